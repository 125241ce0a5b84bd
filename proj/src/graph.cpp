#include "logicbench/graph.hpp"

#include "logicbench/errors.hpp"

namespace logicbench {

void GoldenGraph::finalize() {
    index_.clear();
    distractor_index_.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) index_[nodes[i].statement.key()] = static_cast<int>(i);
    for (std::size_t i = 0; i < distractors.size(); ++i)
        distractor_index_[distractors[i].key()] = static_cast<int>(i);
    required_cache_.assign(nodes.size(), std::nullopt);
}

std::optional<int> GoldenGraph::find_node(const Statement& s) const {
    auto it = index_.find(s.key());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool GoldenGraph::is_distractor(const Statement& s) const {
    return distractor_index_.count(s.key()) > 0;
}

std::vector<int> GoldenGraph::premise_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].depth == 0) out.push_back(static_cast<int>(i));
    return out;
}

const std::set<std::string>& GoldenGraph::required_premises(int node_index) const {
    auto& slot = required_cache_[node_index];
    if (slot) return *slot;
    std::set<std::string> req;
    const GraphNode& n = nodes[node_index];
    if (n.inputs.empty()) {
        req.insert(n.statement.key());
    } else {
        for (int child : n.inputs) {
            const auto& sub = required_premises(child);
            req.insert(sub.begin(), sub.end());
        }
        if (n.universal_index) req.insert(universals[*n.universal_index].key());
    }
    slot = std::move(req);
    return *slot;
}

PremiseSet GoldenGraph::premises(bool include_distractors) const {
    PremiseSet ps;
    for (const auto& n : nodes)
        if (n.depth == 0) ps.add(n.statement);
    for (const auto& u : universals) ps.add(u);
    if (include_distractors)
        for (const auto& d : distractors) ps.add(d);
    return ps;
}

}  // namespace logicbench
