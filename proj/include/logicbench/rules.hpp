#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "logicbench/statement.hpp"
#include "logicbench/vocab.hpp"

namespace logicbench {

/// The four deduction rules.
///
///   MP  f(a), all f are g      |- g(a)
///   CI  A, B                   |- A and B
///   CE  A and B                |- A        (drops exactly one conjunct)
///   DI  A                      |- A or B   (adds exactly one disjunct)
enum class RuleKind { MP, CI, CE, DI };

const char* rule_name(RuleKind k);
std::optional<RuleKind> rule_from_name(const std::string& name);

/// Inputs of a single rule application. `predicates` carries the dropped
/// conjunct for CE and the added disjunct for DI.
struct RuleInputs {
    std::vector<Statement> statements;
    std::optional<UniversalRule> universal;
    std::vector<std::string> predicates;
};

/// Applies one rule. Deterministic and total on shape-valid inputs; throws
/// ShapeMismatch otherwise.
Statement apply_rule(RuleKind kind, const RuleInputs& inputs);

/// Samples inputs whose application yields `conclusion`, drawing any fresh
/// symbols from `vocab`. Throws RuleInadmissible when the conclusion's form
/// cannot be produced by `kind` (e.g. DI cannot conclude an atom).
///
/// `mp_antecedent_width` controls the MP inversion: 1 gives a fresh atomic
/// antecedent, >=2 a fresh conjunction antecedent (whose statement can then
/// be split further without opening a derivational shortcut).
RuleInputs invert_rule(RuleKind kind, const Statement& conclusion, VocabPool& vocab,
                       std::mt19937_64& rng, int mp_antecedent_width = 1);

/// Rules that can produce a statement of this form. MP is always admissible.
std::vector<RuleKind> admissible_rules(const Statement& conclusion);

}  // namespace logicbench
