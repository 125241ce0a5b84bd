#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace logicbench {

enum class Connective { atom, conj, disj };

/// A flat categorical statement: "<subject> is <p1> [and|or <p2> ...]".
///
/// Predicate lists are kept in canonical form (sorted, duplicate free) and a
/// compound that collapses to a single predicate becomes an atom, so
/// structural equality coincides with logical identity up to reordering.
class Statement {
public:
    Statement() = default;  // empty placeholder; real statements come from the factories

    static Statement atom(std::string subject, std::string predicate);
    static Statement conjunction(std::string subject, std::vector<std::string> predicates);
    static Statement disjunction(std::string subject, std::vector<std::string> predicates);
    static Statement make(std::string subject, Connective form, std::vector<std::string> predicates);

    const std::string& subject() const { return subject_; }
    Connective form() const { return form_; }
    const std::vector<std::string>& predicates() const { return predicates_; }
    int width() const { return static_cast<int>(predicates_.size()); }

    bool is_atom() const { return form_ == Connective::atom; }
    bool is_conjunction() const { return form_ == Connective::conj; }
    bool is_disjunction() const { return form_ == Connective::disj; }

    /// Canonical identity key; case-insensitive on subject and predicates.
    const std::string& key() const { return key_; }
    /// Grammar rendering, e.g. "x is bablpus or babypus".
    std::string text() const;

    bool operator==(const Statement& other) const { return key_ == other.key_; }
    bool operator!=(const Statement& other) const { return key_ != other.key_; }
    bool operator<(const Statement& other) const { return key_ < other.key_; }

private:
    std::string subject_;
    Connective form_ = Connective::atom;
    std::vector<std::string> predicates_;
    std::string key_;
};

/// A statement with the subject abstracted away; the shape shared by a
/// universal rule's antecedent and consequent.
class StatementForm {
public:
    StatementForm() = default;

    static StatementForm atom(std::string predicate);
    static StatementForm make(Connective form, std::vector<std::string> predicates);
    static StatementForm of(const Statement& s);

    Connective form() const { return form_; }
    const std::vector<std::string>& predicates() const { return predicates_; }
    int width() const { return static_cast<int>(predicates_.size()); }

    bool matches(const Statement& s) const;
    Statement instantiate(std::string subject) const;

    const std::string& key() const { return key_; }
    std::string text() const;

    bool operator==(const StatementForm& o) const { return key_ == o.key_; }
    bool operator!=(const StatementForm& o) const { return key_ != o.key_; }

private:
    Connective form_ = Connective::atom;
    std::vector<std::string> predicates_;
    std::string key_;
};

/// "all <antecedent> are <consequent>" over a single implicit variable.
class UniversalRule {
public:
    UniversalRule(StatementForm antecedent, StatementForm consequent);

    const StatementForm& antecedent() const { return antecedent_; }
    const StatementForm& consequent() const { return consequent_; }

    const std::string& key() const { return key_; }
    std::string text() const;

    bool operator==(const UniversalRule& o) const { return key_ == o.key_; }

private:
    StatementForm antecedent_;
    StatementForm consequent_;
    std::string key_;
};

/// Ordered, duplicate-free collection of given statements and universals.
class PremiseSet {
public:
    void add(const Statement& s);
    void add(const UniversalRule& u);

    bool contains(const Statement& s) const { return statement_keys_.count(s.key()) > 0; }
    bool contains(const UniversalRule& u) const { return universal_keys_.count(u.key()) > 0; }

    const std::vector<Statement>& statements() const { return statements_; }
    const std::vector<UniversalRule>& universals() const { return universals_; }

    std::size_t size() const { return statements_.size() + universals_.size(); }

private:
    std::vector<Statement> statements_;
    std::vector<UniversalRule> universals_;
    std::unordered_set<std::string> statement_keys_;
    std::unordered_set<std::string> universal_keys_;
};

std::string to_lower(std::string s);

}  // namespace logicbench
