#include "logicbench/rules.hpp"

#include <algorithm>

#include "logicbench/errors.hpp"

namespace logicbench {

const char* rule_name(RuleKind k) {
    switch (k) {
        case RuleKind::MP: return "MP";
        case RuleKind::CI: return "CI";
        case RuleKind::CE: return "CE";
        case RuleKind::DI: return "DI";
    }
    return "?";
}

std::optional<RuleKind> rule_from_name(const std::string& name) {
    if (name == "MP") return RuleKind::MP;
    if (name == "CI") return RuleKind::CI;
    if (name == "CE") return RuleKind::CE;
    if (name == "DI") return RuleKind::DI;
    return std::nullopt;
}

namespace {

Statement apply_mp(const RuleInputs& in) {
    if (in.statements.size() != 1 || !in.universal)
        throw ShapeMismatch("MP takes one statement and one universal");
    const Statement& fact = in.statements[0];
    const UniversalRule& u = *in.universal;
    if (!u.antecedent().matches(fact))
        throw ShapeMismatch("MP fact does not match the universal's antecedent");
    return u.consequent().instantiate(fact.subject());
}

Statement apply_ci(const RuleInputs& in) {
    if (in.statements.size() != 2) throw ShapeMismatch("CI takes two statements");
    const Statement& a = in.statements[0];
    const Statement& b = in.statements[1];
    if (a.subject() != b.subject()) throw ShapeMismatch("CI inputs must share a subject");
    if (a.is_disjunction() || b.is_disjunction())
        throw ShapeMismatch("CI inputs must be atoms or conjunctions");
    std::vector<std::string> preds = a.predicates();
    preds.insert(preds.end(), b.predicates().begin(), b.predicates().end());
    return Statement::conjunction(a.subject(), std::move(preds));
}

Statement apply_ce(const RuleInputs& in) {
    if (in.statements.size() != 1 || in.predicates.size() != 1)
        throw ShapeMismatch("CE takes one conjunction and one dropped conjunct");
    const Statement& conj = in.statements[0];
    if (!conj.is_conjunction()) throw ShapeMismatch("CE input must be a conjunction");
    const std::string dropped = to_lower(in.predicates[0]);
    std::vector<std::string> preds;
    for (const auto& p : conj.predicates())
        if (to_lower(p) != dropped) preds.push_back(p);
    if (preds.size() != conj.predicates().size() - 1)
        throw ShapeMismatch("CE dropped conjunct must occur in the conjunction");
    return Statement::make(conj.subject(), Connective::conj, std::move(preds));
}

Statement apply_di(const RuleInputs& in) {
    if (in.statements.size() != 1 || in.predicates.size() != 1)
        throw ShapeMismatch("DI takes one statement and one added disjunct");
    const Statement& base = in.statements[0];
    if (base.is_conjunction()) throw ShapeMismatch("DI input must be an atom or disjunction");
    const std::string& added = in.predicates[0];
    for (const auto& p : base.predicates())
        if (to_lower(p) == to_lower(added))
            throw ShapeMismatch("DI added disjunct already present");
    std::vector<std::string> preds = base.predicates();
    preds.push_back(added);
    return Statement::disjunction(base.subject(), std::move(preds));
}

}  // namespace

Statement apply_rule(RuleKind kind, const RuleInputs& inputs) {
    switch (kind) {
        case RuleKind::MP: return apply_mp(inputs);
        case RuleKind::CI: return apply_ci(inputs);
        case RuleKind::CE: return apply_ce(inputs);
        case RuleKind::DI: return apply_di(inputs);
    }
    throw ShapeMismatch("unknown rule");
}

std::vector<RuleKind> admissible_rules(const Statement& c) {
    switch (c.form()) {
        case Connective::atom: return {RuleKind::MP, RuleKind::CE};
        case Connective::conj: return {RuleKind::MP, RuleKind::CI, RuleKind::CE};
        case Connective::disj: return {RuleKind::MP, RuleKind::DI};
    }
    return {RuleKind::MP};
}

RuleInputs invert_rule(RuleKind kind, const Statement& c, VocabPool& vocab, std::mt19937_64& rng,
                       int mp_antecedent_width) {
    RuleInputs in;
    switch (kind) {
        case RuleKind::MP: {
            const int width = std::max(mp_antecedent_width, 1);
            std::vector<std::string> fresh;
            for (int i = 0; i < width; ++i) fresh.push_back(vocab.fresh_predicate());
            StatementForm antecedent =
                StatementForm::make(width == 1 ? Connective::atom : Connective::conj, fresh);
            in.statements.push_back(antecedent.instantiate(c.subject()));
            in.universal = UniversalRule(std::move(antecedent), StatementForm::of(c));
            return in;
        }
        case RuleKind::CI: {
            if (!c.is_conjunction())
                throw RuleInadmissible("CI can only conclude a conjunction");
            const auto& preds = c.predicates();
            const std::size_t k = preds.size();
            // random 2-partition, both sides non-empty
            std::uniform_int_distribution<unsigned long> d(1, (1ul << k) - 2);
            unsigned long mask = d(rng) | 1ul;  // keep predicate 0 on side A, avoids mirrored duplicates
            if (mask == (1ul << k) - 1) mask &= ~(1ul << (k - 1));
            std::vector<std::string> a, b;
            for (std::size_t i = 0; i < k; ++i)
                ((mask >> i) & 1 ? a : b).push_back(preds[i]);
            in.statements.push_back(Statement::make(c.subject(), Connective::conj, std::move(a)));
            in.statements.push_back(Statement::make(c.subject(), Connective::conj, std::move(b)));
            return in;
        }
        case RuleKind::CE: {
            if (c.is_disjunction())
                throw RuleInadmissible("CE cannot conclude a disjunction");
            std::string extra = vocab.fresh_predicate();
            std::vector<std::string> preds = c.predicates();
            preds.push_back(extra);
            in.statements.push_back(Statement::conjunction(c.subject(), std::move(preds)));
            in.predicates.push_back(extra);
            return in;
        }
        case RuleKind::DI: {
            if (!c.is_disjunction())
                throw RuleInadmissible("DI can only conclude a disjunction");
            const auto& preds = c.predicates();
            std::uniform_int_distribution<std::size_t> d(0, preds.size() - 1);
            std::size_t drop = d(rng);
            std::vector<std::string> rest;
            for (std::size_t i = 0; i < preds.size(); ++i)
                if (i != drop) rest.push_back(preds[i]);
            in.statements.push_back(Statement::make(c.subject(), Connective::disj, std::move(rest)));
            in.predicates.push_back(preds[drop]);
            return in;
        }
    }
    throw RuleInadmissible("unknown rule");
}

}  // namespace logicbench
