#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "logicbench/rules.hpp"
#include "logicbench/statement.hpp"

namespace logicbench {

/// One statement node of a golden derivation tree. Non-premise nodes record
/// the rule that produced them and the indices of their statement inputs;
/// MP nodes additionally reference the universal they fired.
struct GraphNode {
    Statement statement;
    int depth = 0;
    std::optional<RuleKind> rule;
    std::vector<int> inputs;
    std::optional<int> universal_index;
};

/// Golden derivation graph of one benchmark instance: a logically complete
/// tree (every leaf-to-root path has length `complexity`) plus the universals
/// it fires and, in hard mode, distractor facts about fresh subjects.
class GoldenGraph {
public:
    std::vector<GraphNode> nodes;
    std::vector<UniversalRule> universals;
    std::vector<Statement> distractors;
    int conclusion_index = -1;
    int complexity = 0;

    /// Rebuilds the lookup index; call after mutating `nodes`/`distractors`.
    void finalize();

    std::optional<int> find_node(const Statement& s) const;
    bool is_distractor(const Statement& s) const;

    const Statement& conclusion() const { return nodes[conclusion_index].statement; }
    std::vector<int> premise_indices() const;

    /// Keys of the premise statements and universals in the subtree under
    /// `node_index` — everything a proof of that node must touch.
    const std::set<std::string>& required_premises(int node_index) const;

    /// Given premises: depth-0 statements, universals and (optionally)
    /// distractors.
    PremiseSet premises(bool include_distractors = true) const;

private:
    std::unordered_map<std::string, int> index_;
    std::unordered_map<std::string, int> distractor_index_;
    mutable std::vector<std::optional<std::set<std::string>>> required_cache_;
};

}  // namespace logicbench
