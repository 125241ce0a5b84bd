#include "logicbench/prover.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "logicbench/errors.hpp"

namespace logicbench {

namespace {

int rule_priority(RuleKind kind) {
    switch (kind) {
        case RuleKind::MP: return 0;
        case RuleKind::CE: return 1;
        case RuleKind::CI: return 2;
        case RuleKind::DI: return 3;
    }
    return 4;
}

// Conjunction sources a backward CE step may draw its extra predicate from:
// any same-subject premise conjunction plus every universal consequent,
// instantiated for the target's subject.  A normalized proof only ever
// eliminates within one of these, so wider intermediates are never needed.
std::vector<Statement> ce_sources(const Statement& target, const PremiseSet& premises) {
    std::vector<Statement> sources;
    for (const auto& s : premises.statements()) {
        if (s.form() == Connective::conj && s.subject() == target.subject())
            sources.push_back(s);
    }
    for (const auto& u : premises.universals()) {
        if (u.consequent().form() == Connective::conj)
            sources.push_back(u.consequent().instantiate(target.subject()));
    }
    return sources;
}

}  // namespace

std::vector<InferencePath> find_paths(const Statement& target, const PremiseSet& premises) {
    std::vector<InferencePath> paths;
    const auto& preds = target.predicates();

    for (std::size_t i = 0; i < premises.universals().size(); ++i) {
        const auto& u = premises.universals()[i];
        if (!u.consequent().matches(target)) continue;
        InferencePath p;
        p.kind = RuleKind::MP;
        p.universal = u;
        p.intermediates.push_back(u.antecedent().instantiate(target.subject()));
        paths.push_back(std::move(p));
    }

    if (target.form() == Connective::atom || target.form() == Connective::conj) {
        std::unordered_set<std::string> seen;
        for (const auto& src : ce_sources(target, premises)) {
            const auto& sp = src.predicates();
            if (sp.size() <= preds.size()) continue;
            if (!std::includes(sp.begin(), sp.end(), preds.begin(), preds.end())) continue;
            for (const auto& p : sp) {
                if (std::binary_search(preds.begin(), preds.end(), p)) continue;
                auto wider = preds;
                wider.push_back(p);
                Statement inter = Statement::conjunction(target.subject(), wider);
                if (!seen.insert(inter.key()).second) continue;
                InferencePath path;
                path.kind = RuleKind::CE;
                path.predicates = {p};
                path.intermediates.push_back(std::move(inter));
                paths.push_back(std::move(path));
            }
        }
    }

    if (target.form() == Connective::conj) {
        const auto k = preds.size();
        for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << k); mask += 2) {
            std::vector<std::string> left, right;
            for (std::size_t i = 0; i < k; ++i)
                ((mask >> i) & 1 ? left : right).push_back(preds[i]);
            InferencePath path;
            path.kind = RuleKind::CI;
            path.intermediates.push_back(
                Statement::make(target.subject(), Connective::conj, std::move(left)));
            path.intermediates.push_back(
                Statement::make(target.subject(), Connective::conj, std::move(right)));
            paths.push_back(std::move(path));
        }
    }

    if (target.form() == Connective::disj) {
        for (const auto& p : preds) {
            std::vector<std::string> rest;
            for (const auto& q : preds)
                if (q != p) rest.push_back(q);
            InferencePath path;
            path.kind = RuleKind::DI;
            path.predicates = {p};
            path.intermediates.push_back(
                Statement::make(target.subject(), Connective::disj, std::move(rest)));
            paths.push_back(std::move(path));
        }
    }

    std::stable_sort(paths.begin(), paths.end(), [](const InferencePath& a, const InferencePath& b) {
        if (a.intermediates.size() != b.intermediates.size())
            return a.intermediates.size() < b.intermediates.size();
        return rule_priority(a.kind) < rule_priority(b.kind);
    });
    return paths;
}

namespace {

struct SubProof {
    std::set<std::string> used_statements;
    std::set<std::string> used_universals;
    std::vector<ProofStep> steps;
};

class Searcher {
public:
    Searcher(const PremiseSet& premises, const SearchLimits& limits)
        : premises_(premises),
          limits_(limits),
          deadline_(std::chrono::steady_clock::now() + limits.timeout) {
        for (const auto& s : premises.statements())
            for (const auto& p : s.predicates()) vocab_[s.subject()].insert(p);
        for (const auto& u : premises.universals())
            for (const auto& p : u.consequent().predicates()) consequent_preds_.insert(p);
    }

    bool limit_hit() const { return limit_hit_; }

    std::optional<SubProof> search(const Statement& target, int depth) {
        if (std::chrono::steady_clock::now() > deadline_) {
            limit_hit_ = true;
            return std::nullopt;
        }
        const std::string key = target.key();
        if (premises_.contains(target)) {
            SubProof sub;
            sub.used_statements.insert(key);
            return sub;
        }
        if (target.form() != Connective::disj && !in_vocabulary(target)) return std::nullopt;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (depth >= limits_.max_depth) {
            limit_hit_ = true;
            return std::nullopt;
        }
        if (visited_.count(key)) return std::nullopt;
        visited_.insert(key);

        std::optional<SubProof> result;
        for (const auto& path : find_paths(target, premises_)) {
            SubProof sub;
            bool ok = true;
            for (const auto& inter : path.intermediates) {
                auto child = search(inter, depth + 1);
                if (!child) {
                    ok = false;
                    break;
                }
                sub.used_statements.insert(child->used_statements.begin(),
                                           child->used_statements.end());
                sub.used_universals.insert(child->used_universals.begin(),
                                           child->used_universals.end());
                sub.steps.insert(sub.steps.end(), child->steps.begin(), child->steps.end());
            }
            if (!ok) continue;
            if (path.universal) sub.used_universals.insert(path.universal->key());
            ProofStep step;
            step.kind = path.kind;
            step.inputs = path.intermediates;
            step.universal = path.universal;
            step.predicates = path.predicates;
            step.output = target;
            sub.steps.push_back(std::move(step));
            memo_[key] = sub;
            result = std::move(sub);
            break;
        }
        visited_.erase(key);
        return result;
    }

private:
    bool in_vocabulary(const Statement& target) const {
        auto it = vocab_.find(target.subject());
        for (const auto& p : target.predicates()) {
            if (it != vocab_.end() && it->second.count(p)) continue;
            if (consequent_preds_.count(p)) continue;
            return false;
        }
        return true;
    }

    const PremiseSet& premises_;
    SearchLimits limits_;
    std::chrono::steady_clock::time_point deadline_;
    std::unordered_map<std::string, SubProof> memo_;
    std::unordered_set<std::string> visited_;
    std::map<std::string, std::set<std::string>> vocab_;
    std::set<std::string> consequent_preds_;
    bool limit_hit_ = false;
};

}  // namespace

ProofResult prove(const Statement& target, const PremiseSet& premises, const SearchLimits& limits) {
    Searcher searcher(premises, limits);
    ProofResult result;
    auto sub = searcher.search(target, 0);
    if (sub) {
        result.outcome = ProofOutcome::proved;
        result.used_statements = std::move(sub->used_statements);
        result.used_universals = std::move(sub->used_universals);
        result.steps = std::move(sub->steps);
    } else {
        result.outcome =
            searcher.limit_hit() ? ProofOutcome::limit_exceeded : ProofOutcome::unprovable;
    }
    return result;
}

bool is_provable(const Statement& target, const PremiseSet& premises, const SearchLimits& limits,
                 bool* limit_hit) {
    auto result = prove(target, premises, limits);
    if (limit_hit) *limit_hit = result.outcome == ProofOutcome::limit_exceeded;
    return result.outcome == ProofOutcome::proved;
}

void ClosureMap::insert(const Statement& s, int depth) {
    if (!by_key_.emplace(s.key(), std::make_pair(s, depth)).second) return;
    if (s.form() == Connective::conj) return;
    std::vector<std::string> lowered;
    for (const auto& p : s.predicates()) lowered.push_back(to_lower(p));
    std::sort(lowered.begin(), lowered.end());
    bases_[s.subject()].emplace_back(std::move(lowered), depth);
}

std::optional<int> ClosureMap::disjunction_depth(const Statement& s) const {
    auto it = bases_.find(s.subject());
    if (it == bases_.end()) return std::nullopt;
    std::vector<std::string> target;
    for (const auto& p : s.predicates()) target.push_back(to_lower(p));
    std::sort(target.begin(), target.end());

    std::optional<int> best;
    for (const auto& [preds, depth] : it->second) {
        if (preds.size() > target.size()) continue;
        if (!std::includes(target.begin(), target.end(), preds.begin(), preds.end())) continue;
        int total = depth + static_cast<int>(target.size() - preds.size());
        if (!best || total < *best) best = total;
    }
    return best;
}

std::optional<int> ClosureMap::conjunction_depth(const Statement& s) const {
    const auto& preds = s.predicates();
    const auto width = preds.size();
    if (width > 24) return std::nullopt;
    const std::uint32_t full = (std::uint32_t{1} << width) - 1;

    // depth per predicate subset: -2 unvisited, -1 underivable
    std::vector<int> memo(full + 1, -2);
    auto lookup = [&](std::uint32_t mask) -> int {
        std::vector<std::string> part;
        for (std::size_t i = 0; i < width; ++i)
            if ((mask >> i) & 1) part.push_back(preds[i]);
        auto it = by_key_.find(Statement::make(s.subject(), Connective::conj, part).key());
        return it == by_key_.end() ? -1 : it->second.second;
    };
    auto solve = [&](auto&& self, std::uint32_t mask) -> int {
        int& slot = memo[mask];
        if (slot != -2) return slot;
        slot = lookup(mask);
        if (slot >= 0 || std::popcount(mask) < 2) return slot;
        // not enumerated: only an introduction can conclude it, so try splits
        for (std::uint32_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
            const std::uint32_t rest = mask ^ sub;
            if (sub < rest) break;  // each unordered split once
            int a = self(self, sub);
            if (a < 0) continue;
            int b = self(self, rest);
            if (b < 0) continue;
            int total = std::max(a, b) + 1;
            if (slot < 0 || total < slot) slot = total;
        }
        return slot;
    };
    int depth = solve(solve, full);
    if (depth < 0) return std::nullopt;
    return depth;
}

bool ClosureMap::contains(const Statement& s) const {
    return depth_of(s).has_value();
}

std::optional<int> ClosureMap::depth_of(const Statement& s) const {
    if (s.form() == Connective::disj) return disjunction_depth(s);
    auto it = by_key_.find(s.key());
    if (it != by_key_.end()) return it->second.second;
    if (s.form() == Connective::conj) return conjunction_depth(s);
    return std::nullopt;
}

ClosureMap forward_closure(const PremiseSet& premises, const ClosureConfig& config) {
    int max_width = config.max_width;
    if (max_width <= 0) {
        // Introductions only ever feed universal antecedents; anything wider
        // is answered analytically (see ClosureMap).
        max_width = 2;
        for (const auto& u : premises.universals())
            max_width = std::max(max_width, static_cast<int>(u.antecedent().predicates().size()));
    }

    ClosureMap closure;
    std::vector<Statement> frontier;
    for (const auto& s : premises.statements()) {
        if (!closure.enumerated(s)) {
            closure.insert(s, 0);
            frontier.push_back(s);
        }
    }

    auto emit = [&](const Statement& s, int depth, std::vector<Statement>& next) {
        if (closure.enumerated(s)) return;
        closure.insert(s, depth);
        if (closure.size() > config.size_limit)
            throw ClosureExplosion("forward closure exceeded " +
                                   std::to_string(config.size_limit) + " statements");
        next.push_back(s);
    };

    for (int depth = 1; depth <= config.max_depth && !frontier.empty(); ++depth) {
        std::vector<Statement> next;
        std::vector<Statement> known_ac;  // snapshot: CI partners from earlier levels only
        for (const auto& [key, entry] : closure.entries())
            if (entry.first.form() != Connective::disj &&
                static_cast<int>(entry.first.width()) < max_width)
                known_ac.push_back(entry.first);

        for (const auto& s : frontier) {
            for (const auto& u : premises.universals()) {
                if (!u.antecedent().matches(s)) continue;
                RuleInputs in;
                in.statements = {s};
                in.universal = u;
                emit(apply_rule(RuleKind::MP, in), depth, next);
            }
            if (s.form() == Connective::conj) {
                for (const auto& p : s.predicates()) {
                    RuleInputs in;
                    in.statements = {s};
                    in.predicates = {p};
                    emit(apply_rule(RuleKind::CE, in), depth, next);
                }
            }
            if (s.form() != Connective::disj && static_cast<int>(s.width()) < max_width) {
                for (const auto& other : known_ac) {
                    if (other.subject() != s.subject()) continue;
                    if (other.key() == s.key()) continue;
                    std::set<std::string> merged(s.predicates().begin(), s.predicates().end());
                    merged.insert(other.predicates().begin(), other.predicates().end());
                    if (static_cast<int>(merged.size()) > max_width) continue;
                    if (merged.size() <= std::max(s.width(), other.width())) continue;
                    RuleInputs in;
                    in.statements = {s, other};
                    emit(apply_rule(RuleKind::CI, in), depth, next);
                }
            }
        }
        frontier = std::move(next);
    }
    return closure;
}

std::optional<int> golden_depth(const GoldenGraph& graph, const Statement& s) {
    if (auto idx = graph.find_node(s)) return graph.nodes[*idx].depth;
    if (graph.is_distractor(s)) return 0;
    return std::nullopt;
}

EquivalentDepth equivalent_depth(const GoldenGraph& graph, const Statement& s,
                                 const SearchLimits& limits) {
    EquivalentDepth out;
    if (auto idx = graph.find_node(s)) {
        out.depth = graph.nodes[*idx].depth;
        out.exact = true;
        return out;
    }
    if (graph.is_distractor(s)) {
        out.depth = 0;
        out.exact = true;
        return out;
    }

    auto result = prove(s, graph.premises(true), limits);
    if (result.outcome == ProofOutcome::limit_exceeded) {
        out.undecided = true;
        return out;
    }
    if (result.outcome == ProofOutcome::unprovable) {
        out.depth = -1;
        return out;
    }

    std::set<std::string> used = result.used_statements;
    used.insert(result.used_universals.begin(), result.used_universals.end());
    std::set<std::string> target_preds(s.predicates().begin(), s.predicates().end());

    bool found = false;
    int best_depth = 0;
    bool best_exact = false;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& node = graph.nodes[i];
        const auto& req = graph.required_premises(static_cast<int>(i));
        std::set<std::string> node_preds(node.statement.predicates().begin(),
                                         node.statement.predicates().end());
        bool covered = std::includes(used.begin(), used.end(), req.begin(), req.end()) ||
                       node_preds == target_preds;
        if (!covered) continue;
        if (!found || node.depth < best_depth) {
            found = true;
            best_depth = node.depth;
            best_exact = (req == used);
        }
    }
    if (!found) {
        out.depth = 0;
        return out;
    }
    out.exact = best_exact;
    out.depth = best_exact ? best_depth : std::max(best_depth - 1, 0);
    return out;
}

SearchLimits limits_for_complexity(int complexity) {
    SearchLimits limits;
    limits.max_depth = 2 * complexity + 2;
    return limits;
}

}  // namespace logicbench
