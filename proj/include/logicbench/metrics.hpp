#pragma once

#include <string>
#include <vector>

#include "logicbench/datagen.hpp"
#include "logicbench/prover.hpp"
#include "logicbench/trace_parser.hpp"

namespace logicbench {

enum class NodeCategory { premise, derived, hallucination, planning };

std::string category_name(NodeCategory c);

struct AnnotatedNode {
    ExtractedNode node;
    NodeCategory category = NodeCategory::hallucination;
    bool correct = false;
    bool undecided = false;  // proof search gave up; excluded from correctness ratios
    int depth = 0;           // premises 0, derived clamped to [0, C], hallucinations -1
    bool novel = false;      // first mention of this canonical key among same-kind nodes
};

struct BaseMetrics {
    int sentences = 0;
    int tokens = 0;
    int reflection_sentences = 0;

    int actual_nodes = 0;
    int premise_nodes = 0;
    int derived_nodes = 0;
    int hallucination_nodes = 0;
    int undecided_nodes = 0;
    int correct_nodes = 0;  // premise + derived mentions

    int unique_actual = 0;
    int unique_correct = 0;

    int planning_nodes = 0;
    int unique_planning = 0;
    int valid_planning = 0;

    int reflections_with_new_node = 0;
    int reflections_with_deeper_node = 0;
    int reflections_with_new_hallucination = 0;
};

struct DerivedMetrics {
    double node_duplication = 0;
    double exploration_precision = 0;
    double reasoning_accuracy = 0;
    double premise_coverage = 0;
    double depth_coverage = 0;
    int max_correct_depth = 0;
    double incorrect_ratio = 0;
    int interval_depth = 0;
    int first_correct_step = 0;  // 1-based sentence number, 0 when absent
    double step_efficiency = 0;
    double node_efficiency = 0;
    double reflection_efficiency = 0;
    double effective_span = 0;
    double forward_span = 0;
    double reasoning_span = 0;
    double sentence_duplication = 0;
};

/// Categorizes every extracted node against the instance: premises by key
/// lookup, everything else through golden/equivalent depth.  Planning nodes
/// keep category `planning` and carry provability in `correct`.
std::vector<AnnotatedNode> classify_nodes(const ParsedTrace& trace, const GoldenGraph& graph,
                                          const SearchLimits& limits);

/// True when a not-previously-seen actual node first appears inside the
/// window of `window` sentences starting at the planning node's sentence.
bool planning_validity(const ParsedTrace& trace, const std::vector<AnnotatedNode>& annotated,
                       std::size_t node_index, int window = 5);

struct ReflectionEffects {
    bool new_node = false;
    bool deeper_node = false;
    bool new_hallucination = false;
    double depth_gain = 0;  // max(0, window max correct depth - prior max)
};

ReflectionEffects reflection_effects(const ParsedTrace& trace,
                                     const std::vector<AnnotatedNode>& annotated,
                                     int sentence_index, int window = 5);

BaseMetrics compute_base_metrics(const ParsedTrace& trace,
                                 const std::vector<AnnotatedNode>& annotated, int window = 5);

DerivedMetrics compute_derived_metrics(const BaseMetrics& base, const ParsedTrace& trace,
                                       const std::vector<AnnotatedNode>& annotated,
                                       const GoldenGraph& graph, int window = 5);

/// Full per-trace evaluation record.
struct TraceMetrics {
    std::string instance_id;
    std::string model_id;
    int complexity = 0;
    std::optional<bool> final_answer;
    bool expected_answer = true;
    bool answer_correct = false;
    BaseMetrics base;
    DerivedMetrics derived;
    std::vector<AnnotatedNode> nodes;
};

TraceMetrics evaluate_trace(const ParsedTrace& trace, const ProblemInstance& inst,
                            const SearchLimits& limits, int window = 5);

}  // namespace logicbench
