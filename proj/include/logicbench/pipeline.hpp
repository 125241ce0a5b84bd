#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "logicbench/datagen.hpp"
#include "logicbench/harness.hpp"
#include "logicbench/io.hpp"
#include "logicbench/metrics.hpp"
#include "logicbench/scoring.hpp"
#include "logicbench/trace_parser.hpp"

namespace logicbench {

/// Settings shared by every pipeline stage.  Stages communicate through
/// JSONL artifacts under `out_dir`, so they can run in separate invocations.
struct PipelineConfig {
    std::uint64_t seed = 7;
    std::filesystem::path out_dir = "out";

    int min_complexity = 3;
    int max_complexity = 11;
    int per_level = 100;
    bool hard = true;
    GenConfig gen;

    int window = 5;
    int threads = 0;  // 0 = hardware concurrency

    bool remote_parser = false;
    RemoteParserConfig remote;

    ComponentWeights weights;
};

std::filesystem::path dataset_path(const PipelineConfig& config);
std::filesystem::path traces_path(const PipelineConfig& config, const std::string& model_id);
std::filesystem::path metrics_path(const PipelineConfig& config, const std::string& model_id);
std::filesystem::path report_path(const PipelineConfig& config);

/// Generates per_level instances for every complexity level and writes the
/// dataset artifact.  Returns the instances in file order.
std::vector<ProblemInstance> run_generate(const PipelineConfig& config);

/// Loads the dataset artifact; throws MissingStageInput when absent.
std::vector<ProblemInstance> load_dataset(const PipelineConfig& config);

/// Synthesizes one trace per (archetype, instance) and writes one trace file
/// per archetype model.
void run_synthesize(const PipelineConfig& config);

/// Queries a live endpoint for every instance and writes the model's traces.
void run_endpoint(const PipelineConfig& config, const EndpointConfig& endpoint);

/// Parses and scores every trace file against the dataset, in parallel,
/// writing per-model metrics artifacts.  Returns the processed model ids.
std::vector<std::string> run_evaluate(const PipelineConfig& config);

/// Loads all metrics artifacts keyed by model.
std::map<std::string, std::vector<TraceMetrics>> load_metrics(const PipelineConfig& config);

/// Aggregates, clusters and labels every model; writes the score report.
ScoreReport run_score(const PipelineConfig& config);

/// Renders the CSV artifacts (scores, radar spokes, per-level accuracy).
void run_report(const PipelineConfig& config);

}  // namespace logicbench
