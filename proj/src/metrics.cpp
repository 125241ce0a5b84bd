#include "logicbench/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace logicbench {

std::string category_name(NodeCategory c) {
    switch (c) {
        case NodeCategory::premise: return "premise";
        case NodeCategory::derived: return "derived";
        case NodeCategory::hallucination: return "hallucination";
        case NodeCategory::planning: return "planning";
    }
    return "unknown";
}

std::vector<AnnotatedNode> classify_nodes(const ParsedTrace& trace, const GoldenGraph& graph,
                                          const SearchLimits& limits) {
    const PremiseSet premises = graph.premises(true);
    const int complexity = graph.complexity;

    struct Verdict {
        NodeCategory category;
        bool correct;
        bool undecided;
        int depth;
    };
    std::unordered_map<std::string, Verdict> memo;
    auto judge = [&](const Statement& s) -> Verdict {
        auto it = memo.find(s.key());
        if (it != memo.end()) return it->second;
        Verdict v{NodeCategory::hallucination, false, false, -1};
        if (premises.contains(s)) {
            v = {NodeCategory::premise, true, false, 0};
        } else {
            EquivalentDepth eq = equivalent_depth(graph, s, limits);
            if (eq.undecided) {
                v = {NodeCategory::hallucination, false, true, -1};
            } else if (eq.depth < 0) {
                v = {NodeCategory::hallucination, false, false, -1};
            } else {
                v = {NodeCategory::derived, true, false,
                     std::clamp(eq.depth, 0, complexity)};
            }
        }
        memo.emplace(s.key(), v);
        return v;
    };

    std::vector<AnnotatedNode> out;
    out.reserve(trace.nodes.size());
    std::unordered_set<std::string> seen_actual, seen_planning;
    for (const auto& node : trace.nodes) {
        Verdict v = judge(node.statement);
        AnnotatedNode an;
        an.node = node;
        an.correct = v.correct;
        an.undecided = v.undecided;
        an.depth = v.depth;
        if (node.kind == NodeKind::planning) {
            an.category = NodeCategory::planning;
            an.novel = seen_planning.insert(node.statement.key()).second;
        } else {
            an.category = v.category;
            an.novel = seen_actual.insert(node.statement.key()).second;
        }
        out.push_back(std::move(an));
    }
    return out;
}

namespace {

bool is_actual(const AnnotatedNode& an) { return an.category != NodeCategory::planning; }

/// Highest correct actual-node depth in sentences [0, before_sentence); -1 if none.
int max_correct_depth_before(const std::vector<AnnotatedNode>& annotated, int before_sentence) {
    int best = -1;
    for (const auto& an : annotated) {
        if (!is_actual(an) || !an.correct) continue;
        if (an.node.sentence_index >= before_sentence) continue;
        best = std::max(best, an.depth);
    }
    return best;
}

}  // namespace

bool planning_validity(const ParsedTrace& trace, const std::vector<AnnotatedNode>& annotated,
                       std::size_t node_index, int window) {
    const auto& pn = annotated.at(node_index);
    const int lo = pn.node.sentence_index;
    const int hi = lo + window - 1;
    (void)trace;
    for (const auto& an : annotated) {
        if (!is_actual(an) || !an.novel) continue;
        if (an.node.sentence_index < lo || an.node.sentence_index > hi) continue;
        return true;
    }
    return false;
}

ReflectionEffects reflection_effects(const ParsedTrace& trace,
                                     const std::vector<AnnotatedNode>& annotated,
                                     int sentence_index, int window) {
    (void)trace;
    ReflectionEffects fx;
    const int lo = sentence_index;
    const int hi = lo + window - 1;
    const int prior = max_correct_depth_before(annotated, lo);
    int window_best = -1;
    for (const auto& an : annotated) {
        if (!is_actual(an)) continue;
        if (an.node.sentence_index < lo || an.node.sentence_index > hi) continue;
        if (an.novel) fx.new_node = true;
        if (an.novel && an.category == NodeCategory::hallucination && !an.undecided)
            fx.new_hallucination = true;
        if (an.correct) {
            window_best = std::max(window_best, an.depth);
            if (an.depth > prior) fx.deeper_node = true;
        }
    }
    if (window_best >= 0) fx.depth_gain = std::max(0, window_best - std::max(prior, 0));
    return fx;
}

BaseMetrics compute_base_metrics(const ParsedTrace& trace,
                                 const std::vector<AnnotatedNode>& annotated, int window) {
    BaseMetrics m;
    m.sentences = static_cast<int>(trace.sentences.size());
    m.tokens = trace.token_count;

    std::unordered_set<std::string> uniq_actual, uniq_correct, uniq_planning;
    for (const auto& an : annotated) {
        const std::string& key = an.node.statement.key();
        if (an.category == NodeCategory::planning) {
            ++m.planning_nodes;
            uniq_planning.insert(key);
            continue;
        }
        ++m.actual_nodes;
        uniq_actual.insert(key);
        switch (an.category) {
            case NodeCategory::premise: ++m.premise_nodes; break;
            case NodeCategory::derived: ++m.derived_nodes; break;
            case NodeCategory::hallucination:
                an.undecided ? ++m.undecided_nodes : ++m.hallucination_nodes;
                break;
            default: break;
        }
        if (an.correct) {
            ++m.correct_nodes;
            uniq_correct.insert(key);
        }
    }
    m.unique_actual = static_cast<int>(uniq_actual.size());
    m.unique_correct = static_cast<int>(uniq_correct.size());
    m.unique_planning = static_cast<int>(uniq_planning.size());

    for (std::size_t i = 0; i < annotated.size(); ++i) {
        const auto& an = annotated[i];
        if (an.category != NodeCategory::planning) continue;
        if (planning_validity(trace, annotated, i, window)) ++m.valid_planning;
    }

    for (const auto& sent : trace.sentences) {
        if (sent.kind != SentenceKind::reflection) continue;
        ++m.reflection_sentences;
        ReflectionEffects fx = reflection_effects(trace, annotated, sent.index, window);
        if (fx.new_node) ++m.reflections_with_new_node;
        if (fx.deeper_node) ++m.reflections_with_deeper_node;
        if (fx.new_hallucination) ++m.reflections_with_new_hallucination;
    }
    return m;
}

namespace {

std::string normalized_sentence(const std::string& s) {
    std::string out;
    bool pending_space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

DerivedMetrics compute_derived_metrics(const BaseMetrics& base, const ParsedTrace& trace,
                                       const std::vector<AnnotatedNode>& annotated,
                                       const GoldenGraph& graph, int window) {
    DerivedMetrics d;
    const int C = graph.complexity;

    std::unordered_set<std::string> uniq_correct, uniq_golden, covered_premises;
    std::set<int> covered_depths;
    int last_novel_actual = -1;    // sentence of the last first-mention actual node
    int last_novel_correct = -1;   // sentence of the last first-mention correct node
    int last_depth_record = -1;    // sentence of the last new max-depth record
    int running_max = -1;
    int first_correct_sentence = -1;

    for (const auto& an : annotated) {
        if (an.category == NodeCategory::planning) continue;
        const std::string& key = an.node.statement.key();
        if (an.novel) last_novel_actual = std::max(last_novel_actual, an.node.sentence_index);
        if (!an.correct) continue;
        uniq_correct.insert(key);
        if (an.novel) last_novel_correct = std::max(last_novel_correct, an.node.sentence_index);
        if (graph.find_node(an.node.statement)) uniq_golden.insert(key);
        if (an.category == NodeCategory::premise) covered_premises.insert(key);
        if (an.depth >= 1 && an.depth <= C) covered_depths.insert(an.depth);
        if (an.depth > running_max) {
            running_max = an.depth;
            last_depth_record = an.node.sentence_index;
        }
        if (first_correct_sentence < 0) first_correct_sentence = an.node.sentence_index;
    }

    d.max_correct_depth = std::max(running_max, 0);
    d.first_correct_step = first_correct_sentence < 0 ? 0 : first_correct_sentence + 1;

    const int decided = base.actual_nodes - base.undecided_nodes;
    d.incorrect_ratio = decided > 0 ? double(base.hallucination_nodes) / decided : 0.0;
    d.node_duplication =
        base.actual_nodes > 0
            ? double(base.actual_nodes - base.unique_actual) / base.actual_nodes
            : 0.0;
    d.exploration_precision =
        uniq_correct.empty() ? 0.0 : double(uniq_golden.size()) / uniq_correct.size();
    d.reasoning_accuracy =
        graph.nodes.empty() ? 0.0 : double(uniq_golden.size()) / graph.nodes.size();

    int golden_premises = 0, golden_covered = 0;
    for (const auto& n : graph.nodes) {
        if (n.depth != 0) continue;
        ++golden_premises;
        if (covered_premises.count(n.statement.key())) ++golden_covered;
    }
    d.premise_coverage = golden_premises > 0 ? double(golden_covered) / golden_premises : 0.0;

    d.depth_coverage = C > 0 ? double(covered_depths.size()) / C : 0.0;
    int prefix = 0;
    while (covered_depths.count(prefix + 1)) ++prefix;
    d.interval_depth = prefix;

    d.step_efficiency = base.tokens > 0 ? double(d.max_correct_depth) / base.tokens : 0.0;
    d.node_efficiency = base.sentences > 0 ? double(base.correct_nodes) / base.sentences : 0.0;

    if (base.reflection_sentences > 0) {
        double total_gain = 0;
        for (const auto& sent : trace.sentences) {
            if (sent.kind != SentenceKind::reflection) continue;
            total_gain += reflection_effects(trace, annotated, sent.index, window).depth_gain;
        }
        d.reflection_efficiency = total_gain / base.reflection_sentences;
    }

    if (base.sentences > 0) {
        d.effective_span = last_novel_correct < 0 ? 0.0
                                                  : double(last_novel_correct + 1) / base.sentences;
        d.forward_span =
            last_depth_record < 0 ? 0.0 : double(last_depth_record + 1) / base.sentences;
        d.reasoning_span =
            last_novel_actual < 0 ? 0.0 : double(last_novel_actual + 1) / base.sentences;

        std::unordered_set<std::string> uniq_sentences;
        for (const auto& sent : trace.sentences) uniq_sentences.insert(normalized_sentence(sent.text));
        d.sentence_duplication =
            double(base.sentences - static_cast<int>(uniq_sentences.size())) / base.sentences;
    }
    return d;
}

TraceMetrics evaluate_trace(const ParsedTrace& trace, const ProblemInstance& inst,
                            const SearchLimits& limits, int window) {
    TraceMetrics tm;
    tm.instance_id = inst.id;
    tm.complexity = inst.complexity;
    tm.final_answer = trace.final_answer;
    tm.expected_answer = inst.answer;
    tm.answer_correct = trace.final_answer.has_value() && *trace.final_answer == inst.answer;
    tm.nodes = classify_nodes(trace, inst.golden, limits);
    tm.base = compute_base_metrics(trace, tm.nodes, window);
    tm.derived = compute_derived_metrics(tm.base, trace, tm.nodes, inst.golden, window);
    return tm;
}

}  // namespace logicbench
