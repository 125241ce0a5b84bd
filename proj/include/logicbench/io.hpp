#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "logicbench/datagen.hpp"
#include "logicbench/harness.hpp"
#include "logicbench/metrics.hpp"
#include "logicbench/scoring.hpp"

namespace logicbench {

using ordered_json = nlohmann::ordered_json;

ordered_json statement_to_json(const Statement& s);
Statement statement_from_json(const ordered_json& j);

ordered_json form_to_json(const StatementForm& f);
StatementForm form_from_json(const ordered_json& j);

ordered_json graph_to_json(const GoldenGraph& g);
GoldenGraph graph_from_json(const ordered_json& j);

ordered_json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const ordered_json& j);

ordered_json trace_to_json(const TraceRecord& rec);
TraceRecord trace_record_from_json(const ordered_json& j);

ordered_json metrics_to_json(const TraceMetrics& m);
TraceMetrics metrics_from_json(const ordered_json& j);

ordered_json report_to_json(const ScoreReport& report);
ScoreReport report_from_json(const ordered_json& j);

/// Writes via a sibling temp file and renames, so readers never observe a
/// half-written artifact.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

void write_jsonl(const std::filesystem::path& path, const std::vector<ordered_json>& rows);

/// Throws MissingStageInput when the file does not exist and Error on a line
/// that fails to parse.
std::vector<ordered_json> read_jsonl(const std::filesystem::path& path);

std::string score_report_csv(const ScoreReport& report);
/// Long-format dimension table (model,dimension,value), one row per spoke.
std::string radar_csv(const ScoreReport& report);
/// Answer accuracy per model and complexity level.
std::string accuracy_table_csv(const std::map<std::string, std::vector<TraceMetrics>>& by_model);

}  // namespace logicbench
