#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logicbench/graph.hpp"
#include "logicbench/rules.hpp"
#include "logicbench/statement.hpp"

namespace logicbench {

/// One backward decomposition of a target: prove every statement in
/// `intermediates` and the target follows by `rule`.
struct InferencePath {
    RuleKind kind = RuleKind::MP;
    std::vector<Statement> intermediates;
    std::optional<UniversalRule> universal;
    std::vector<std::string> predicates;  // dropped/added predicate for CE/DI
};

/// All single-rule backward expansions of `target` against the premise pool,
/// cheapest (fewest subgoals) first.
std::vector<InferencePath> find_paths(const Statement& target, const PremiseSet& premises);

enum class ProofOutcome { proved, unprovable, limit_exceeded };

struct SearchLimits {
    int max_depth = 12;
    std::chrono::milliseconds timeout{500};
};

/// Forward-replayable step of a completed proof.
struct ProofStep {
    RuleKind kind = RuleKind::MP;
    std::vector<Statement> inputs;
    std::optional<UniversalRule> universal;
    std::vector<std::string> predicates;
    Statement output;
};

struct ProofResult {
    ProofOutcome outcome = ProofOutcome::unprovable;
    // Canonical keys of the premises the found proof actually touched.
    std::set<std::string> used_statements;
    std::set<std::string> used_universals;
    std::vector<ProofStep> steps;
};

/// Backward proof search with cycle detection and memoized successes.
ProofResult prove(const Statement& target, const PremiseSet& premises,
                  const SearchLimits& limits = {});

/// Convenience wrapper: true iff `prove` returns `proved`.  Throws nothing;
/// a limit hit reports false via `*limit_hit` when the pointer is non-null.
bool is_provable(const Statement& target, const PremiseSet& premises,
                 const SearchLimits& limits = {}, bool* limit_hit = nullptr);

struct ClosureConfig {
    int max_depth = 32;
    std::size_t size_limit = 500000;
    // Width cap for introduced conjunctions; 0 picks the widest universal
    // antecedent (at least two).  Only conjunction introduction is capped:
    // premises, eliminations and universal consequents enter at any width,
    // and wider targets are answered analytically, so the cap never changes
    // an answer, only how much gets enumerated.
    int max_width = 0;
};

/// Every derivable atom and conjunction up to the introduction cap, mapped to
/// its minimum derivation depth.  Statements beyond the enumeration are
/// answered analytically:
///   - a disjunction is derivable iff it extends a derivable base (an atom or
///     a stated/universal-produced disjunction) by introductions, one depth
///     level per added disjunct;
///   - a conjunction absent from the table is derivable iff some 2-partition
///     splits it into derivable halves (anything coverable by a single wide
///     statement is already enumerated through eliminations, so only splits
///     remain to check, which a small subset DP settles exactly).
class ClosureMap {
public:
    void insert(const Statement& s, int depth);
    bool contains(const Statement& s) const;
    std::optional<int> depth_of(const Statement& s) const;
    /// In the enumerated table itself (contains() also answers analytically).
    bool enumerated(const Statement& s) const { return by_key_.count(s.key()) > 0; }
    std::size_t size() const { return by_key_.size(); }
    const std::map<std::string, std::pair<Statement, int>>& entries() const { return by_key_; }

private:
    std::optional<int> disjunction_depth(const Statement& s) const;
    std::optional<int> conjunction_depth(const Statement& s) const;

    std::map<std::string, std::pair<Statement, int>> by_key_;
    // per subject: lowercased predicate sets of atoms and stated/produced
    // disjunctions, with their depths
    std::map<std::string, std::vector<std::pair<std::vector<std::string>, int>>> bases_;
};

/// Forward closure under the four rules, level by level.  Disjunction
/// introduction is not enumerated (see ClosureMap); universals whose
/// antecedent is a disjunction fire only on stated or universal-produced
/// disjunctions.  Throws ClosureExplosion when `size_limit` is exceeded.
ClosureMap forward_closure(const PremiseSet& premises, const ClosureConfig& config = {});

/// Depth of `s` inside the golden graph: recorded depth for members,
/// 0 for distractors, empty otherwise.
std::optional<int> golden_depth(const GoldenGraph& graph, const Statement& s);

struct EquivalentDepth {
    int depth = 0;
    bool undecided = false;  // search gave up before settling provability
    bool exact = false;      // matched a golden node's premise set exactly
};

/// Effective reasoning depth of an arbitrary statement relative to the graph:
/// members keep their recorded depth, unprovable statements get -1, and
/// provable strangers inherit from the shallowest golden node whose required
/// premises cover the proof (exact cover keeps the depth, partial steps one
/// level down).
EquivalentDepth equivalent_depth(const GoldenGraph& graph, const Statement& s,
                                 const SearchLimits& limits = {});

/// Search limits scaled to a problem of the given complexity.
SearchLimits limits_for_complexity(int complexity);

}  // namespace logicbench
