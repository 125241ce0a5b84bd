// Acceptance gate: one check per shipped guarantee, each printing a single
// [PASS]/[FAIL] line.  Exits nonzero when anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "logicbench/datagen.hpp"
#include "logicbench/harness.hpp"
#include "logicbench/io.hpp"
#include "logicbench/metrics.hpp"
#include "logicbench/pipeline.hpp"
#include "logicbench/prover.hpp"
#include "logicbench/rng.hpp"
#include "logicbench/scoring.hpp"
#include "logicbench/trace_parser.hpp"
#include "../support/naive_metrics.hpp"

using namespace logicbench;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::vector<std::string> notes;

void note(const std::string& line) { notes.push_back(line); }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int index, const std::string& name, bool ok, double secs) {
    std::printf("[%s] %d. %s (%.1fs)\n", ok ? "PASS" : "FAIL", index, name.c_str(), secs);
    if (!ok) {
        ++failures;
        for (const auto& line : notes) std::printf("       %s\n", line.c_str());
    }
    notes.clear();
    std::fflush(stdout);
}

bool expect(bool cond, const std::string& what) {
    if (!cond) note(what);
    return cond;
}

// ---------------------------------------------------------------------------
// 1. dataset structure: depth-C conclusions over uniform levels, C distractors
//    in hard mode, deterministic regeneration; < 60 s for 9 x 100 instances.
// ---------------------------------------------------------------------------
bool dataset_structural_suite() {
    bool ok = true;
    for (int c = 3; c <= 11 && ok; ++c) {
        for (int i = 0; i < 100 && ok; ++i) {
            std::uint64_t seed = mix_seed(0xacc1, {std::uint64_t(c), std::uint64_t(i)});
            GoldenGraph g = generate_graph(c, true, seed);
            ok &= expect(g.complexity == c, "complexity mismatch");
            ok &= expect(g.conclusion_index >= 0 &&
                             g.nodes[g.conclusion_index].depth == c,
                         "conclusion depth != " + std::to_string(c));
            int max_depth = 0;
            for (const auto& n : g.nodes) {
                max_depth = std::max(max_depth, n.depth);
                if (n.depth == 0) {
                    ok &= expect(n.inputs.empty(), "premise with inputs");
                    continue;
                }
                ok &= expect(!n.inputs.empty(), "derived node without inputs");
                for (int child : n.inputs)
                    ok &= expect(g.nodes[child].depth == n.depth - 1,
                                 "tree level skip at depth " + std::to_string(n.depth));
            }
            ok &= expect(max_depth == c, "graph deeper than its conclusion");
            ok &= expect(static_cast<int>(g.distractors.size()) == c,
                         "hard mode distractor count != " + std::to_string(c));
            if (i % 20 == 0) {
                GoldenGraph again = generate_graph(c, true, seed);
                ok &= expect(graph_to_json(again) == graph_to_json(g),
                             "regeneration under the same seed differs");
            }
            if (!ok) note("at level " + std::to_string(c) + ", instance " + std::to_string(i));
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 2. prover/closure equivalence: 1000 sampled statements across 50 instances,
//    100% provability agreement; golden members carry the closure's exact
//    depth through both depth lookups; < 120 s.
// ---------------------------------------------------------------------------
bool prover_closure_equivalence() {
    bool ok = true;
    SearchLimits generous;
    generous.max_depth = 30;  // settling unprovability takes spare depth
    generous.timeout = std::chrono::milliseconds(5000);

    std::mt19937_64 rng(0xacc2);
    int sampled = 0, golden_checked = 0;
    for (int i = 0; i < 50 && ok; ++i) {
        int c = 3 + (i % 3);
        ProblemInstance inst = generate_instance(c, true, 7000 + i, "a2");
        const GoldenGraph& g = inst.golden;
        PremiseSet prem = g.premises(true);
        ClosureMap closure = forward_closure(prem);

        // sampling pools: golden members, closure entries, fabrications
        std::vector<Statement> pool;
        for (const auto& n : g.nodes) pool.push_back(n.statement);
        for (const auto& d : g.distractors) pool.push_back(d);
        std::vector<Statement> members;
        for (const auto& [key, entry] : closure.entries()) members.push_back(entry.first);

        std::vector<std::string> subjects, predicates;
        for (const auto& n : g.nodes) {
            subjects.push_back(n.statement.subject());
            for (const auto& p : n.statement.predicates()) predicates.push_back(p);
        }
        for (const auto& u : g.universals)
            for (const auto& p : u.consequent().predicates()) predicates.push_back(p);
        predicates.push_back("glorptex");
        predicates.push_back("snibblex");
        subjects.push_back("Qux");

        auto fabricate = [&]() {
            std::uniform_int_distribution<std::size_t> subj(0, subjects.size() - 1);
            std::uniform_int_distribution<std::size_t> pred(0, predicates.size() - 1);
            std::uniform_int_distribution<int> width(1, 4), form(0, 2);
            std::set<std::string> chosen;
            int w = width(rng);
            while (static_cast<int>(chosen.size()) < w) chosen.insert(predicates[pred(rng)]);
            std::vector<std::string> preds(chosen.begin(), chosen.end());
            Connective conn = preds.size() == 1
                                  ? Connective::atom
                                  : (form(rng) == 2 ? Connective::disj : Connective::conj);
            return Statement::make(subjects[subj(rng)], conn, preds);
        };

        for (int k = 0; k < 20 && ok; ++k) {
            Statement s = [&] {
                if (k % 3 == 0) return pool[k / 3 % pool.size()];
                if (k % 3 == 1 && !members.empty()) {
                    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
                    return members[pick(rng)];
                }
                return fabricate();
            }();
            ++sampled;

            bool limit = false;
            bool proved = is_provable(s, prem, generous, &limit);
            ok &= expect(!limit, "search limit hit while deciding " + s.text());
            ok &= expect(proved == closure.contains(s),
                         "provability disagreement on " + s.text());

            if (auto gd = golden_depth(g, s)) {
                ++golden_checked;
                auto cd = closure.depth_of(s);
                ok &= expect(cd.has_value(), "golden member missing from closure: " + s.text());
                ok &= expect(cd && *gd == *cd, "golden depth != closure depth for " + s.text());
                EquivalentDepth eq = equivalent_depth(g, s, generous);
                ok &= expect(!eq.undecided && cd && eq.depth == *cd,
                             "equivalent depth != closure depth for " + s.text());
            }
            if (!ok) note("instance " + std::to_string(i) + " (level " + std::to_string(c) + ")");
        }
    }
    ok &= expect(sampled == 1000, "expected 1000 samples, ran " + std::to_string(sampled));
    ok &= expect(golden_checked >= 300, "too few golden members sampled");
    return ok;
}

// ---------------------------------------------------------------------------
// 3. regression on the hand-encoded two-hop chain: the distractor-bridged
//    side statement lands at depth 1 and the conclusion at 2, exactly.
// ---------------------------------------------------------------------------
bool chain_regression() {
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

    bool ok = true;
    EquivalentDepth side = equivalent_depth(g, Statement::atom("B", "D"));
    ok &= expect(!side.undecided, "side statement undecided");
    ok &= expect(side.depth == 1,
                 "equivalent depth of 'B is D' = " + std::to_string(side.depth) + ", want 1");
    ok &= expect(g.conclusion().key() == Statement::atom("A", "D").key(), "conclusion mismatch");
    ok &= expect(g.nodes[g.conclusion_index].depth == 2, "conclusion depth != 2");
    auto gd = golden_depth(g, Statement::atom("A", "D"));
    ok &= expect(gd && *gd == 2, "golden depth lookup != 2");
    return ok;
}

// ---------------------------------------------------------------------------
// 4. metric properties on 500 synthesized traces: ratios/spans in [0,1],
//    strict monotonicity probes, and equality with the naive reference
//    (exact for counts, 1e-12 relative for ratios).
// ---------------------------------------------------------------------------
bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

bool metrics_match_naive(const TraceMetrics& tm, const ParsedTrace& trace,
                         const GoldenGraph& graph, int window) {
    naive::NaiveDerived n = naive::naive_reference(trace, tm.nodes, graph, window);
    const DerivedMetrics& d = tm.derived;
    bool ok = true;
    ok &= expect(naive::close(d.node_duplication, n.node_duplication), "node_duplication");
    ok &= expect(naive::close(d.exploration_precision, n.exploration_precision),
                 "exploration_precision");
    ok &= expect(naive::close(d.reasoning_accuracy, n.reasoning_accuracy), "reasoning_accuracy");
    ok &= expect(naive::close(d.premise_coverage, n.premise_coverage), "premise_coverage");
    ok &= expect(naive::close(d.depth_coverage, n.depth_coverage), "depth_coverage");
    ok &= expect(d.max_correct_depth == n.max_correct_depth, "max_correct_depth");
    ok &= expect(naive::close(d.incorrect_ratio, n.incorrect_ratio), "incorrect_ratio");
    ok &= expect(d.interval_depth == n.interval_depth, "interval_depth");
    ok &= expect(d.first_correct_step == n.first_correct_step, "first_correct_step");
    ok &= expect(naive::close(d.step_efficiency, n.step_efficiency), "step_efficiency");
    ok &= expect(naive::close(d.node_efficiency, n.node_efficiency), "node_efficiency");
    ok &= expect(naive::close(d.reflection_efficiency, n.reflection_efficiency),
                 "reflection_efficiency");
    ok &= expect(naive::close(d.effective_span, n.effective_span), "effective_span");
    ok &= expect(naive::close(d.forward_span, n.forward_span), "forward_span");
    ok &= expect(naive::close(d.reasoning_span, n.reasoning_span), "reasoning_span");
    ok &= expect(naive::close(d.sentence_duplication, n.sentence_duplication),
                 "sentence_duplication");
    ok &= expect(tm.base.valid_planning == n.valid_planning, "valid_planning");
    ok &= expect(tm.base.reflections_with_new_node == n.refl_new, "reflections_with_new_node");
    ok &= expect(tm.base.reflections_with_deeper_node == n.refl_deeper,
                 "reflections_with_deeper_node");
    ok &= expect(tm.base.reflections_with_new_hallucination == n.refl_halluc,
                 "reflections_with_new_hallucination");
    return ok;
}

bool metric_property_suite(std::map<std::string, std::vector<TraceMetrics>>& collected) {
    bool ok = true;
    const int window = 5;
    GenConfig cfg;
    cfg.negate = true;
    int traces = 0;
    for (int i = 0; i < 125 && ok; ++i) {
        int c = 3 + (i % 3);
        ProblemInstance inst = generate_instance(c, true, 9000 + i, "a4", cfg);
        SearchLimits limits = limits_for_complexity(c);
        for (Archetype a : kAllArchetypes) {
            TraceRecord rec = synthesize_trace(a, inst, 400 + i);
            ParsedTrace trace = parse_trace(rec.response_text);
            TraceMetrics tm = evaluate_trace(trace, inst, limits, window);
            ++traces;

            const DerivedMetrics& d = tm.derived;
            for (double v : {d.node_duplication, d.exploration_precision, d.reasoning_accuracy,
                             d.premise_coverage, d.depth_coverage, d.incorrect_ratio,
                             d.effective_span, d.forward_span, d.reasoning_span,
                             d.sentence_duplication})
                ok &= expect(in_unit(v), "ratio outside [0,1]");
            ok &= metrics_match_naive(tm, trace, inst.golden, window);

            // strict monotonicity probes on a slice of the corpus
            if (i % 25 == 0) {
                std::string first = trace.sentences.front().text;
                TraceMetrics duped = evaluate_trace(
                    parse_trace(rec.response_text + "\n" + first), inst, limits, window);
                ok &= expect(duped.derived.sentence_duplication > d.sentence_duplication,
                             "duplicate sentence did not raise sentence_duplication");
            }
            if (a == Archetype::LazyGuesser && i % 25 == 0) {
                TraceMetrics deeper = evaluate_trace(
                    parse_trace(rec.response_text + "\n" + inst.golden.conclusion().text() + "."),
                    inst, limits, window);
                ok &= expect(d.max_correct_depth < c, "guesser unexpectedly deep");
                ok &= expect(deeper.derived.max_correct_depth == c,
                             "deeper correct node did not raise max_correct_depth");
            }

            tm.model_id = archetype_name(a);
            collected[tm.model_id].push_back(std::move(tm));
            if (!ok) {
                note("trace " + std::to_string(traces) + " (" + archetype_name(a) + ", level " +
                     std::to_string(c) + ")");
                break;
            }
        }
    }
    ok &= expect(traces == 500 || !ok, "expected 500 traces, ran " + std::to_string(traces));
    return ok;
}

// ---------------------------------------------------------------------------
// 5. normalization and aggregation arithmetic, tolerance 1e-12.
// ---------------------------------------------------------------------------
bool normalization_suite(const std::map<std::string, std::vector<TraceMetrics>>& collected) {
    bool ok = true;
    std::vector<ModelAggregate> population;
    for (const auto& [model, traces] : collected)
        population.push_back(aggregate_model(model, traces));
    ok &= expect(population.size() == 4, "expected 4 aggregated models");

    const std::vector<double ModelAggregate::*> columns = {
        &ModelAggregate::reflection_count,     &ModelAggregate::planning_count,
        &ModelAggregate::verbosity,            &ModelAggregate::max_depth,
        &ModelAggregate::explored,             &ModelAggregate::step_efficiency,
        &ModelAggregate::effective_span,       &ModelAggregate::reflection_efficiency,
        &ModelAggregate::valid_planning,       &ModelAggregate::sentence_duplication,
        &ModelAggregate::node_duplication};

    auto normalized = normalize_population(population);
    for (auto col : columns) {
        double maxv = 0, raw_max = 0;
        for (const auto& m : normalized) maxv = std::max(maxv, m.*col);
        for (const auto& m : population) raw_max = std::max(raw_max, m.*col);
        if (raw_max > 0)
            ok &= expect(std::fabs(maxv - 1.0) <= 1e-12, "population max does not map to 1.0");
        else
            ok &= expect(maxv == 0.0, "all-zero column changed");
    }

    for (auto col : columns) {
        auto scaled = population;
        for (auto& m : scaled) m.*col *= 2.5;
        auto renorm = normalize_population(scaled);
        for (std::size_t i = 0; i < renorm.size(); ++i)
            for (auto other : columns)
                ok &= expect(std::fabs(renorm[i].*other - normalized[i].*other) <= 1e-12,
                             "scaling one column moved a normalized value");
    }

    for (const auto& m : normalized) {
        DimensionScores s = dimension_scores(m);
        ok &= expect(std::fabs(s.ld - m.max_depth) <= 1e-12, "ld is not the depth column");
        ok &= expect(std::fabs(s.exp - m.explored) <= 1e-12, "exp is not the explored column");
        ok &= expect(std::fabs(s.cost - (m.reflection_count + m.planning_count + m.verbosity) / 3) <=
                         1e-12,
                     "cost mean mismatch");
        ok &= expect(std::fabs(s.eff - (m.step_efficiency + m.effective_span) / 2) <= 1e-12,
                     "eff mean mismatch");
        ok &= expect(std::fabs(s.coh - (m.reflection_efficiency + m.valid_planning) / 2) <= 1e-12,
                     "coh mean mismatch");
        ok &= expect(std::fabs(s.red - (m.sentence_duplication + m.node_duplication) / 2) <= 1e-12,
                     "red mean mismatch");
    }
    return ok;
}

// ---------------------------------------------------------------------------
// 6. confidence geometry, tolerance 1e-9.
// ---------------------------------------------------------------------------
bool confidence_suite() {
    bool ok = true;
    std::vector<Point2> two = {{0.0, 0.0}, {2.0, 0.0}};
    ok &= expect(std::fabs(boundary_confidence({0.0, 0.0}, 0, two) - 1.0) <= 1e-9,
                 "own centroid is not 1.0");
    ok &= expect(std::fabs(boundary_confidence({1.0, 0.4}, 0, two)) <= 1e-9,
                 "bisector point is not 0");
    ok &= expect(std::fabs(boundary_confidence({0.5, 0.3}, 0, two) - 0.5) <= 1e-9,
                 "2-centroid midway case is not 0.5");

    std::vector<Point2> corners = {{0, 1}, {1, 1}, {0, 0}, {1, 0}};
    ok &= expect(std::fabs(boundary_confidence({0, 1}, 0, corners) - 1.0) <= 1e-9,
                 "corner centroid is not 1.0");
    ok &= expect(std::fabs(boundary_confidence({0.5, 1.0}, 0, corners)) <= 1e-9,
                 "corner bisector is not 0");
    return ok;
}

// ---------------------------------------------------------------------------
// 7. end-to-end archetype recovery through the pipeline: 25 traces per
//    archetype at level 5 as single-trace models; >= 90% label recovery and
//    a bijective corner mapping; < 3 min.
// ---------------------------------------------------------------------------
bool archetype_recovery() {
    bool ok = true;
    fs::path dir = fs::temp_directory_path() / "logicbench-acceptance-e2e";
    fs::remove_all(dir);

    PipelineConfig cfg;
    cfg.out_dir = dir / "out";
    cfg.seed = 17;
    cfg.min_complexity = 5;
    cfg.max_complexity = 5;
    cfg.per_level = 25;

    auto instances = run_generate(cfg);
    ok &= expect(instances.size() == 25, "expected 25 generated instances");

    for (std::size_t i = 0; i < instances.size(); ++i) {
        for (Archetype a : kAllArchetypes) {
            TraceRecord rec = synthesize_trace(a, instances[i], 600 + i);
            char suffix[8];
            std::snprintf(suffix, sizeof suffix, "-%02zu", i);
            rec.model_id = archetype_name(a) + std::string(suffix);
            write_jsonl(traces_path(cfg, rec.model_id), {trace_to_json(rec)});
        }
    }

    auto models = run_evaluate(cfg);
    ok &= expect(models.size() == 100, "expected 100 single-trace models");
    ScoreReport report = run_score(cfg);
    ok &= expect(report.rows.size() == 100, "expected 100 scored rows");

    std::set<Archetype> mapped(report.mapping.begin(), report.mapping.end());
    ok &= expect(mapped.size() == 4, "centroid->corner mapping is not a bijection");

    int matched = 0;
    for (const auto& row : report.rows) {
        std::string intended = row.model_id.substr(0, row.model_id.find('-'));
        if (archetype_name(row.archetype) == intended) ++matched;
    }
    ok &= expect(matched >= 90, "label recovery " + std::to_string(matched) + "/100 < 90%");
    note("recovered " + std::to_string(matched) + "/100 labels");

    run_report(cfg);
    ok &= expect(fs::exists(cfg.out_dir / "scores" / "accuracy.csv"), "missing accuracy.csv");

    fs::remove_all(dir);
    if (ok) notes.clear();
    return ok;
}

// ---------------------------------------------------------------------------
// 8. published model tables need live access to many proprietary endpoints
//    and are out of desk-scale reach; checks 1-7 stand in for them.  When an
//    endpoint is configured via environment variables, run a live smoke that
//    must yield a per-level accuracy table.
// ---------------------------------------------------------------------------
bool endpoint_smoke() {
    const char* url = std::getenv("LOGICBENCH_SMOKE_URL");
    if (!url || !*url) {
        std::printf("       model-table results are not desk-reproducible; checks 1-7 are the\n"
                    "       substitute. set LOGICBENCH_SMOKE_URL to also smoke-test a live "
                    "endpoint.\n");
        return true;
    }

    bool ok = true;
    fs::path dir = fs::temp_directory_path() / "logicbench-acceptance-smoke";
    fs::remove_all(dir);

    PipelineConfig cfg;
    cfg.out_dir = dir / "out";
    cfg.seed = 23;
    cfg.min_complexity = 3;
    cfg.max_complexity = 5;
    cfg.per_level = 2;
    run_generate(cfg);

    EndpointConfig endpoint;
    endpoint.base_url = url;
    if (const char* model = std::getenv("LOGICBENCH_SMOKE_MODEL")) endpoint.model = model;
    if (endpoint.model.empty()) endpoint.model = "smoke-model";

    try {
        run_endpoint(cfg, endpoint);
        run_evaluate(cfg);
        std::string table = accuracy_table_csv(load_metrics(cfg));
        std::printf("       per-level accuracy (live endpoint):\n");
        std::istringstream lines(table);
        for (std::string line; std::getline(lines, line);)
            std::printf("       %s\n", line.c_str());
        ok &= expect(table.find('\n') != std::string::npos, "empty accuracy table");
    } catch (const std::exception& e) {
        ok = expect(false, std::string("endpoint smoke failed: ") + e.what());
    }
    fs::remove_all(dir);
    return ok;
}

template <typename Fn>
void run(int index, const std::string& name, double budget_secs, Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = fn();
    } catch (const std::exception& e) {
        note(std::string("exception: ") + e.what());
    }
    double secs = seconds_since(start);
    if (budget_secs > 0 && secs > budget_secs) {
        note("runtime " + std::to_string(secs) + "s exceeded budget " +
             std::to_string(budget_secs) + "s");
        ok = false;
    }
    report(index, name, ok, secs);
}

}  // namespace

int main() {
    std::map<std::string, std::vector<TraceMetrics>> collected;

    run(1, "dataset structural suite", 60, dataset_structural_suite);
    run(2, "prover/closure equivalence", 120, prover_closure_equivalence);
    run(3, "hand-encoded chain regression", 0, chain_regression);
    run(4, "metric property suite", 0, [&] { return metric_property_suite(collected); });
    run(5, "normalization and aggregation", 0, [&] { return normalization_suite(collected); });
    run(6, "confidence geometry", 0, confidence_suite);
    run(7, "end-to-end archetype recovery", 180, archetype_recovery);
    run(8, "live endpoint smoke", 0, endpoint_smoke);

    if (failures) {
        std::printf("%d acceptance check(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance checks passed\n");
    return 0;
}
