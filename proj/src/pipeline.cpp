#include "logicbench/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "logicbench/errors.hpp"
#include "logicbench/prover.hpp"
#include "logicbench/rng.hpp"

namespace logicbench {

std::filesystem::path dataset_path(const PipelineConfig& config) {
    return config.out_dir / "dataset" / "instances.jsonl";
}

std::filesystem::path traces_path(const PipelineConfig& config, const std::string& model_id) {
    return config.out_dir / "traces" / (model_id + ".jsonl");
}

std::filesystem::path metrics_path(const PipelineConfig& config, const std::string& model_id) {
    return config.out_dir / "metrics" / (model_id + ".jsonl");
}

std::filesystem::path report_path(const PipelineConfig& config) {
    return config.out_dir / "scores" / "report.json";
}

namespace {

std::string instance_name(int complexity, int index) {
    std::ostringstream os;
    os << "c";
    if (complexity < 10) os << "0";
    os << complexity << "-";
    os.fill('0');
    os.width(4);
    os << index;
    return os.str();
}

int worker_count(const PipelineConfig& config) {
    if (config.threads > 0) return config.threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 4;
}

/// Runs job(i) for i in [0, total) across a small worker pool, rethrowing the
/// first failure.  Results must be stored by index inside the job itself.
template <typename Job>
void parallel_for(int total, int workers, Job&& job) {
    if (total <= 0) return;
    workers = std::max(1, std::min(workers, total));
    if (workers == 1) {
        for (int i = 0; i < total; ++i) job(i);
        return;
    }
    std::atomic<int> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int i = cursor.fetch_add(1);
                if (i >= total) return;
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    cursor.store(total);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<ProblemInstance> run_generate(const PipelineConfig& config) {
    if (config.min_complexity < 1 || config.max_complexity < config.min_complexity ||
        config.per_level < 1)
        throw ConfigError("invalid complexity range or per-level count");

    std::vector<ProblemInstance> instances;
    std::vector<ordered_json> rows;
    for (int c = config.min_complexity; c <= config.max_complexity; ++c) {
        for (int i = 0; i < config.per_level; ++i) {
            std::uint64_t seed = mix_seed(config.seed, {0x646174617365ull,
                                                        static_cast<std::uint64_t>(c),
                                                        static_cast<std::uint64_t>(i)});
            ProblemInstance inst =
                generate_instance(c, config.hard, seed, instance_name(c, i), config.gen);
            rows.push_back(instance_to_json(inst));
            instances.push_back(std::move(inst));
        }
    }
    write_jsonl(dataset_path(config), rows);
    return instances;
}

std::vector<ProblemInstance> load_dataset(const PipelineConfig& config) {
    std::vector<ProblemInstance> instances;
    for (const auto& row : read_jsonl(dataset_path(config)))
        instances.push_back(instance_from_json(row));
    return instances;
}

void run_synthesize(const PipelineConfig& config) {
    const auto instances = load_dataset(config);
    for (Archetype archetype : kAllArchetypes) {
        std::vector<ordered_json> rows;
        rows.reserve(instances.size());
        for (std::size_t i = 0; i < instances.size(); ++i) {
            std::uint64_t seed =
                mix_seed(config.seed, {0x73796e7468ull, static_cast<std::uint64_t>(i)});
            rows.push_back(trace_to_json(synthesize_trace(archetype, instances[i], seed)));
        }
        write_jsonl(traces_path(config, archetype_name(archetype)), rows);
    }
}

void run_endpoint(const PipelineConfig& config, const EndpointConfig& endpoint) {
    if (endpoint.base_url.empty()) throw ConfigError("endpoint base_url is required");
    if (endpoint.model.empty()) throw ConfigError("endpoint model is required");
    const auto instances = load_dataset(config);

    EndpointClient client(endpoint);
    std::vector<ordered_json> rows(instances.size());
    parallel_for(static_cast<int>(instances.size()), worker_count(config), [&](int i) {
        rows[i] = trace_to_json(client.query(instances[i]));
    });
    write_jsonl(traces_path(config, endpoint.model), rows);
}

std::vector<std::string> run_evaluate(const PipelineConfig& config) {
    const auto instances = load_dataset(config);
    std::unordered_map<std::string, const ProblemInstance*> by_id;
    for (const auto& inst : instances) by_id[inst.id] = &inst;

    const auto traces_dir = config.out_dir / "traces";
    if (!std::filesystem::exists(traces_dir))
        throw MissingStageInput("missing traces directory: " + traces_dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(traces_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw MissingStageInput("no trace files under " + traces_dir.string());

    std::vector<std::string> models;
    for (const auto& file : files) {
        std::vector<TraceRecord> records;
        for (const auto& row : read_jsonl(file)) records.push_back(trace_record_from_json(row));

        std::vector<ordered_json> rows(records.size());
        parallel_for(static_cast<int>(records.size()), worker_count(config), [&](int i) {
            const TraceRecord& rec = records[i];
            auto it = by_id.find(rec.instance_id);
            if (it == by_id.end())
                throw MissingStageInput("trace references unknown instance " + rec.instance_id);
            const ProblemInstance& inst = *it->second;

            ParsedTrace parsed = config.remote_parser
                                     ? parse_trace_remote(rec.response_text, config.remote)
                                     : parse_trace(rec.response_text);
            parsed.token_count = rec.token_count;  // prefer the endpoint's count

            TraceMetrics tm =
                evaluate_trace(parsed, inst, limits_for_complexity(inst.complexity),
                               config.window);
            tm.model_id = rec.model_id;
            rows[i] = metrics_to_json(tm);
        });

        std::string model_id = file.stem().string();
        write_jsonl(metrics_path(config, model_id), rows);
        models.push_back(std::move(model_id));
    }
    return models;
}

std::map<std::string, std::vector<TraceMetrics>> load_metrics(const PipelineConfig& config) {
    const auto metrics_dir = config.out_dir / "metrics";
    if (!std::filesystem::exists(metrics_dir))
        throw MissingStageInput("missing metrics directory: " + metrics_dir.string());

    std::map<std::string, std::vector<TraceMetrics>> by_model;
    for (const auto& entry : std::filesystem::directory_iterator(metrics_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".jsonl") continue;
        for (const auto& row : read_jsonl(entry.path())) {
            TraceMetrics tm = metrics_from_json(row);
            by_model[tm.model_id].push_back(std::move(tm));
        }
    }
    if (by_model.empty()) throw MissingStageInput("no metrics files under " + metrics_dir.string());
    return by_model;
}

ScoreReport run_score(const PipelineConfig& config) {
    auto by_model = load_metrics(config);
    ScoreReport report =
        score_population(by_model, mix_seed(config.seed, {0x73636f7265ull}), config.weights);
    atomic_write(report_path(config), report_to_json(report).dump(2) + "\n");
    return report;
}

void run_report(const PipelineConfig& config) {
    ScoreReport report;
    {
        std::ifstream in(report_path(config), std::ios::binary);
        if (!in) throw MissingStageInput("missing score report: " + report_path(config).string());
        std::stringstream buffer;
        buffer << in.rdbuf();
        auto j = ordered_json::parse(buffer.str(), nullptr, false);
        if (j.is_discarded()) throw Error("malformed score report");
        report = report_from_json(j);
    }
    auto by_model = load_metrics(config);

    const auto scores_dir = config.out_dir / "scores";
    atomic_write(scores_dir / "scores.csv", score_report_csv(report));
    atomic_write(scores_dir / "radar.csv", radar_csv(report));
    atomic_write(scores_dir / "accuracy.csv", accuracy_table_csv(by_model));
}

}  // namespace logicbench
