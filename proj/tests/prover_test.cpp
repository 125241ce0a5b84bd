#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "logicbench/datagen.hpp"
#include "logicbench/prover.hpp"

using namespace logicbench;

namespace {

// Premise "A is B", rules all B are C / all C are D, derived A is C, A is D,
// plus the stated red herring "B is C".
GoldenGraph chain_fixture() {
    GoldenGraph g;
    g.complexity = 2;
    g.universals.push_back(UniversalRule(StatementForm::atom("B"), StatementForm::atom("C")));
    g.universals.push_back(UniversalRule(StatementForm::atom("C"), StatementForm::atom("D")));

    GraphNode conclusion;
    conclusion.statement = Statement::atom("A", "D");
    conclusion.depth = 2;
    conclusion.rule = RuleKind::MP;
    conclusion.inputs = {1};
    conclusion.universal_index = 1;

    GraphNode mid;
    mid.statement = Statement::atom("A", "C");
    mid.depth = 1;
    mid.rule = RuleKind::MP;
    mid.inputs = {2};
    mid.universal_index = 0;

    GraphNode premise;
    premise.statement = Statement::atom("A", "B");
    premise.depth = 0;

    g.nodes = {conclusion, mid, premise};
    g.conclusion_index = 0;
    g.distractors.push_back(Statement::atom("B", "C"));
    g.finalize();
    return g;
}

}  // namespace

TEST_CASE("find_paths proposes exactly the admissible decompositions") {
    PremiseSet prem;
    prem.add(Statement::conjunction("K", {"a", "b", "c"}));
    prem.add(UniversalRule(StatementForm::atom("z"), StatementForm::atom("a")));

    SUBCASE("atom: one MP path per matching universal, CE within stated conjunctions") {
        auto paths = find_paths(Statement::atom("K", "a"), prem);
        REQUIRE(paths.size() == 3);
        // single-subgoal paths first, MP before CE
        CHECK(paths[0].kind == RuleKind::MP);
        CHECK(paths[0].intermediates == std::vector<Statement>{Statement::atom("K", "z")});
        std::set<std::string> ce_targets;
        for (std::size_t i = 1; i < paths.size(); ++i) {
            CHECK(paths[i].kind == RuleKind::CE);
            REQUIRE(paths[i].intermediates.size() == 1);
            ce_targets.insert(paths[i].intermediates[0].key());
        }
        CHECK(ce_targets == std::set<std::string>{Statement::conjunction("K", {"a", "b"}).key(),
                                                  Statement::conjunction("K", {"a", "c"}).key()});
    }

    SUBCASE("conjunction: every unordered 2-partition plus the wider elimination") {
        auto paths = find_paths(Statement::conjunction("K", {"a", "b"}), prem);
        int ci = 0, ce = 0;
        for (const auto& p : paths) {
            if (p.kind == RuleKind::CI) {
                ++ci;
                REQUIRE(p.intermediates.size() == 2);
                std::set<std::string> parts;
                for (const auto& s : p.intermediates)
                    parts.insert(s.predicates().begin(), s.predicates().end());
                CHECK(parts == std::set<std::string>{"a", "b"});
            }
            if (p.kind == RuleKind::CE) {
                ++ce;
                CHECK(p.intermediates[0] == Statement::conjunction("K", {"a", "b", "c"}));
            }
        }
        CHECK(ci == 1);  // {a}|{b} only, mirrored masks are not repeated
        CHECK(ce == 1);
    }

    SUBCASE("disjunction: drop each disjunct once") {
        auto paths = find_paths(Statement::disjunction("K", {"a", "b"}), prem);
        REQUIRE(paths.size() == 2);
        for (const auto& p : paths) {
            CHECK(p.kind == RuleKind::DI);
            CHECK(p.intermediates[0].width() == 1);
        }
    }
}

TEST_CASE("proofs replay forward to the target") {
    GoldenGraph g = generate_graph(5, true, 402);
    PremiseSet prem = g.premises(true);
    ProofResult result = prove(g.conclusion(), prem, limits_for_complexity(5));
    REQUIRE(result.outcome == ProofOutcome::proved);
    CHECK_FALSE(result.steps.empty());

    PremiseSet seen = prem;
    for (const auto& step : result.steps) {
        for (const auto& in : step.inputs) CHECK(seen.contains(in));
        RuleInputs in;
        in.statements = step.inputs;
        in.universal = step.universal;
        in.predicates = step.predicates;
        CHECK(apply_rule(step.kind, in) == step.output);
        seen.add(step.output);
    }
    CHECK(result.steps.back().output == g.conclusion());

    for (const auto& key : result.used_statements) {
        bool stated = false;
        for (const auto& s : prem.statements()) stated |= s.key() == key;
        CHECK(stated);
    }
}

TEST_CASE("prove agrees with the forward closure on fabricated statements") {
    for (int c = 3; c <= 5; ++c) {
        GoldenGraph g = generate_graph(c, true, 7000 + c);
        PremiseSet prem = g.premises(true);
        ClosureMap closure = forward_closure(prem);
        // generous budget: establishing *unprovability* must exhaust every
        // decomposition, which wants more depth than a successful proof
        SearchLimits limits;
        limits.max_depth = 30;
        limits.timeout = std::chrono::seconds(5);

        std::vector<std::string> subjects;
        std::set<std::string> subject_seen;
        std::vector<std::string> preds;
        std::set<std::string> pred_seen;
        for (const auto& s : prem.statements()) {
            if (subject_seen.insert(s.subject()).second) subjects.push_back(s.subject());
            for (const auto& p : s.predicates())
                if (pred_seen.insert(p).second) preds.push_back(p);
        }
        for (const auto& u : prem.universals())
            for (const auto& p : u.consequent().predicates())
                if (pred_seen.insert(p).second) preds.push_back(p);

        std::mt19937_64 rng(c);
        std::uniform_int_distribution<std::size_t> subj_d(0, subjects.size() - 1);
        std::uniform_int_distribution<std::size_t> pred_d(0, preds.size() - 1);
        std::uniform_int_distribution<int> width_d(1, 4);
        std::uniform_int_distribution<int> form_d(0, 2);
        int checked = 0;
        for (int probe = 0; probe < 120; ++probe) {
            int width = width_d(rng);
            std::set<std::string> chosen;
            while (static_cast<int>(chosen.size()) < width) chosen.insert(preds[pred_d(rng)]);
            Connective form = width == 1 ? Connective::atom
                                         : (form_d(rng) < 2 ? Connective::conj : Connective::disj);
            Statement target = Statement::make(
                subjects[subj_d(rng)], form,
                std::vector<std::string>(chosen.begin(), chosen.end()));
            bool limit_hit = false;
            bool proved = is_provable(target, prem, limits, &limit_hit);
            REQUIRE_FALSE(limit_hit);
            CHECK_MESSAGE(proved == closure.contains(target), target.text());
            ++checked;
        }
        CHECK(checked == 120);
    }
}

TEST_CASE("equivalent depth: members, distractors, strangers") {
    GoldenGraph g = chain_fixture();
    SearchLimits limits = limits_for_complexity(2);

    SUBCASE("graph members keep their recorded depth") {
        for (const auto& n : g.nodes) {
            EquivalentDepth eq = equivalent_depth(g, n.statement, limits);
            CHECK(eq.depth == n.depth);
            CHECK(eq.exact);
            CHECK_FALSE(eq.undecided);
        }
    }

    SUBCASE("stated red herrings sit at depth zero") {
        EquivalentDepth eq = equivalent_depth(g, Statement::atom("B", "C"), limits);
        CHECK(eq.depth == 0);
        CHECK(eq.exact);
    }

    SUBCASE("a derivation through the red herring lands one level shallow") {
        // "B is D" follows from the stated "B is C" and all C are D; it covers
        // the conclusion's predicate without its premises.
        EquivalentDepth eq = equivalent_depth(g, Statement::atom("B", "D"), limits);
        CHECK_FALSE(eq.undecided);
        CHECK(eq.depth == 1);
        CHECK_FALSE(eq.exact);
    }

    SUBCASE("unprovable statements report -1") {
        EquivalentDepth eq = equivalent_depth(g, Statement::atom("A", "Q"), limits);
        CHECK(eq.depth == -1);
        CHECK_FALSE(eq.undecided);
    }
}

TEST_CASE("golden_depth lookup") {
    GoldenGraph g = chain_fixture();
    CHECK(golden_depth(g, Statement::atom("A", "D")) == 2);
    CHECK(golden_depth(g, Statement::atom("a", "d")) == 2);
    CHECK(golden_depth(g, Statement::atom("B", "C")) == 0);
    CHECK_FALSE(golden_depth(g, Statement::atom("A", "Q")).has_value());
}

TEST_CASE("mutually recursive universals terminate") {
    PremiseSet prem;
    prem.add(Statement::atom("X", "c"));
    prem.add(UniversalRule(StatementForm::atom("a"), StatementForm::atom("b")));
    prem.add(UniversalRule(StatementForm::atom("b"), StatementForm::atom("a")));
    ProofResult r = prove(Statement::atom("X", "b"), prem);
    CHECK(r.outcome == ProofOutcome::unprovable);
}

TEST_CASE("limits are honored and reported") {
    GoldenGraph g = generate_graph(6, true, 55);
    PremiseSet prem = g.premises(true);

    SearchLimits tight;
    tight.max_depth = 0;
    ProofResult r = prove(g.conclusion(), prem, tight);
    CHECK(r.outcome == ProofOutcome::limit_exceeded);

    // premise membership beats the depth limit
    ProofResult p = prove(prem.statements()[0], prem, tight);
    CHECK(p.outcome == ProofOutcome::proved);

    SearchLimits scaled = limits_for_complexity(6);
    CHECK(scaled.max_depth == 14);
    CHECK(prove(g.conclusion(), prem, scaled).outcome == ProofOutcome::proved);
}

TEST_CASE("closure map answers wide statements analytically") {
    ClosureMap m;
    m.insert(Statement::conjunction("K", {"a", "b", "c", "d", "e"}), 0);
    m.insert(Statement::atom("K", "a"), 4);

    // subsets of a stated conjunction cost one elimination per dropped conjunct
    CHECK(m.depth_of(Statement::conjunction("K", {"a", "b", "c", "d"})).value_or(-1) == -1);
    m.insert(Statement::conjunction("K", {"a", "b", "c", "d"}), 1);
    m.insert(Statement::conjunction("K", {"b", "c"}), 3);
    // a split across enumerated pieces: max(4, 3) + 1
    CHECK(m.depth_of(Statement::conjunction("K", {"a", "b", "c"})) == 5);
    CHECK_FALSE(m.contains(Statement::conjunction("K", {"a", "q"})));

    // disjunctions extend any base one introduction at a time
    m.insert(Statement::disjunction("K", {"p", "q"}), 2);
    CHECK(m.depth_of(Statement::disjunction("K", {"p", "q", "r"})) == 3);
    CHECK(m.depth_of(Statement::disjunction("K", {"a", "z"})) == 5);  // from the atom
    CHECK_FALSE(m.contains(Statement::disjunction("K", {"y", "z"})));
}
