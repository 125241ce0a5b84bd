#include "logicbench/statement.hpp"

#include <algorithm>
#include <cctype>

#include "logicbench/errors.hpp"

namespace logicbench {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

namespace {

char form_tag(Connective f) {
    switch (f) {
        case Connective::atom: return '.';
        case Connective::conj: return '&';
        case Connective::disj: return '+';
    }
    return '?';
}

const char* connector_word(Connective f) { return f == Connective::conj ? " and " : " or "; }

// Sorts case-insensitively, drops duplicates, rejects empties.
std::vector<std::string> normalize_predicates(std::vector<std::string> preds) {
    if (preds.empty()) throw ShapeMismatch("statement requires a non-empty predicate list");
    for (auto& p : preds) {
        if (p.empty()) throw ShapeMismatch("empty predicate");
    }
    std::sort(preds.begin(), preds.end(), [](const std::string& a, const std::string& b) {
        return to_lower(a) < to_lower(b);
    });
    preds.erase(std::unique(preds.begin(), preds.end(),
                            [](const std::string& a, const std::string& b) {
                                return to_lower(a) == to_lower(b);
                            }),
                preds.end());
    return preds;
}

std::string join_keys(const std::vector<std::string>& preds) {
    std::string out;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (i) out += ',';
        out += to_lower(preds[i]);
    }
    return out;
}

std::string join_text(const std::vector<std::string>& preds, Connective f) {
    std::string out;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (i) out += connector_word(f);
        out += preds[i];
    }
    return out;
}

}  // namespace

Statement Statement::make(std::string subject, Connective form, std::vector<std::string> predicates) {
    if (subject.empty()) throw ShapeMismatch("statement requires a subject");
    predicates = normalize_predicates(std::move(predicates));
    if (predicates.size() == 1) form = Connective::atom;  // degenerate compound collapses
    if (form == Connective::atom && predicates.size() != 1)
        throw ShapeMismatch("atom carries exactly one predicate");
    Statement s;
    s.subject_ = std::move(subject);
    s.form_ = form;
    s.predicates_ = std::move(predicates);
    s.key_ = to_lower(s.subject_) + '|' + form_tag(s.form_) + '|' + join_keys(s.predicates_);
    return s;
}

Statement Statement::atom(std::string subject, std::string predicate) {
    return make(std::move(subject), Connective::atom, {std::move(predicate)});
}

Statement Statement::conjunction(std::string subject, std::vector<std::string> predicates) {
    return make(std::move(subject), Connective::conj, std::move(predicates));
}

Statement Statement::disjunction(std::string subject, std::vector<std::string> predicates) {
    return make(std::move(subject), Connective::disj, std::move(predicates));
}

std::string Statement::text() const {
    return subject_ + " is " + join_text(predicates_, form_);
}

StatementForm StatementForm::make(Connective form, std::vector<std::string> predicates) {
    predicates = normalize_predicates(std::move(predicates));
    if (predicates.size() == 1) form = Connective::atom;
    StatementForm f;
    f.form_ = form;
    f.predicates_ = std::move(predicates);
    f.key_ = std::string(1, form_tag(f.form_)) + '|' + join_keys(f.predicates_);
    return f;
}

StatementForm StatementForm::atom(std::string predicate) {
    return make(Connective::atom, {std::move(predicate)});
}

StatementForm StatementForm::of(const Statement& s) {
    return make(s.form(), s.predicates());
}

bool StatementForm::matches(const Statement& s) const {
    return StatementForm::of(s).key() == key_;
}

Statement StatementForm::instantiate(std::string subject) const {
    return Statement::make(std::move(subject), form_, predicates_);
}

std::string StatementForm::text() const {
    return join_text(predicates_, form_);
}

UniversalRule::UniversalRule(StatementForm antecedent, StatementForm consequent)
    : antecedent_(std::move(antecedent)), consequent_(std::move(consequent)) {
    if (antecedent_ == consequent_)
        throw ShapeMismatch("universal rule must relate two distinct forms");
    key_ = "all|" + antecedent_.key() + "|" + consequent_.key();
}

std::string UniversalRule::text() const {
    return "all " + antecedent_.text() + " are " + consequent_.text();
}

void PremiseSet::add(const Statement& s) {
    if (statement_keys_.insert(s.key()).second) statements_.push_back(s);
}

void PremiseSet::add(const UniversalRule& u) {
    if (universal_keys_.insert(u.key()).second) universals_.push_back(u);
}

}  // namespace logicbench
