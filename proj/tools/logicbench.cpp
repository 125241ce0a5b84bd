#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "logicbench/errors.hpp"
#include "logicbench/io.hpp"
#include "logicbench/pipeline.hpp"
#include "logicbench/prover.hpp"
#include "logicbench/trace_parser.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitMissingInput = 3;
constexpr int kExitEndpoint = 4;
constexpr int kExitInternal = 5;

int run_oracle(const std::string& instance_path, const std::string& instance_id,
               const std::string& statement_text) {
    using logicbench::ordered_json;

    std::ifstream in(instance_path, std::ios::binary);
    if (!in) throw logicbench::MissingStageInput("cannot open " + instance_path);
    std::optional<logicbench::ProblemInstance> inst;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            // Possibly a pretty-printed single object: parse the whole file.
            std::ifstream whole(instance_path, std::ios::binary);
            std::stringstream buffer;
            buffer << whole.rdbuf();
            j = ordered_json::parse(buffer.str(), nullptr, false);
            if (j.is_discarded()) throw logicbench::Error("malformed instance file");
            inst = logicbench::instance_from_json(j);
            break;
        }
        auto candidate = logicbench::instance_from_json(j);
        if (instance_id.empty() || candidate.id == instance_id) {
            inst = std::move(candidate);
            break;
        }
    }
    if (!inst)
        throw logicbench::MissingStageInput(
            instance_id.empty() ? "no instance found in " + instance_path
                                : "instance " + instance_id + " not found in " + instance_path);

    auto nodes = logicbench::extract_nodes(statement_text);
    if (nodes.statements.size() != 1)
        throw logicbench::ConfigError("--statement must contain exactly one statement, got " +
                                      std::to_string(nodes.statements.size()));
    const logicbench::Statement& target = nodes.statements.front();

    auto limits = logicbench::limits_for_complexity(inst->complexity);
    auto eq = logicbench::equivalent_depth(inst->golden, target, limits);

    ordered_json out{{"instance", ordered_json(inst->id)},
                     {"statement", ordered_json(target.text())},
                     {"provable", ordered_json(eq.depth >= 0 && !eq.undecided)},
                     {"undecided", ordered_json(eq.undecided)},
                     {"depth", ordered_json(eq.depth)},
                     {"exact", ordered_json(eq.exact)}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace logicbench;

    CLI::App app{"First-order reasoning benchmark: generation, tracing, evaluation, scoring"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from an INI/TOML file");

    PipelineConfig config;
    std::string parser_mode = "local";
    app.add_option("--seed", config.seed, "Master seed")->capture_default_str();
    app.add_option("--out", config.out_dir, "Artifact directory")->capture_default_str();
    app.add_option("--parser", parser_mode, "Trace parser backend")
        ->check(CLI::IsMember({"local", "remote"}))
        ->capture_default_str();
    app.add_option("--parser-url", config.remote.base_url, "Remote parser base URL");
    app.add_option("--threads", config.threads, "Worker threads (0 = auto)")
        ->capture_default_str();

    auto* gen_cmd = app.add_subcommand("generate", "Generate the benchmark dataset");
    bool easy = false;
    gen_cmd->add_option("--min-complexity", config.min_complexity, "Lowest level")
        ->capture_default_str();
    gen_cmd->add_option("--max-complexity", config.max_complexity, "Highest level")
        ->capture_default_str();
    gen_cmd->add_option("--per-level", config.per_level, "Instances per level")
        ->capture_default_str();
    gen_cmd->add_flag("--easy", easy, "Skip distractor facts");

    auto* synth_cmd =
        app.add_subcommand("synthesize", "Write reference traces for the four archetypes");

    auto* run_cmd = app.add_subcommand("run", "Query a live endpoint for every instance");
    EndpointConfig endpoint;
    bool short_mode = false;
    run_cmd->add_option("--endpoint", endpoint.base_url, "Endpoint base URL (scheme://host[:port])")
        ->required();
    run_cmd->add_option("--model", endpoint.model, "Model identifier")->required();
    run_cmd->add_option("--path", endpoint.path, "Completions route")->capture_default_str();
    run_cmd->add_option("--temperature", endpoint.temperature, "Sampling temperature")
        ->capture_default_str();
    run_cmd->add_option("--max-tokens", endpoint.max_tokens, "Completion budget")
        ->capture_default_str();
    run_cmd->add_flag("--short", short_mode, "Use the reduced completion budget");
    run_cmd->add_option("--rpm", endpoint.requests_per_minute, "Request rate cap (0 = off)")
        ->capture_default_str();
    run_cmd->add_option("--timeout", endpoint.timeout_seconds, "Per-request timeout, seconds")
        ->capture_default_str();
    run_cmd->add_option("--token-env", endpoint.token_env, "Env var holding the bearer token")
        ->capture_default_str();

    auto* eval_cmd = app.add_subcommand("evaluate", "Parse and score every stored trace");
    eval_cmd->add_option("--window", config.window, "Planning/reflection sentence window")
        ->capture_default_str();

    auto* score_cmd = app.add_subcommand("score", "Aggregate, cluster and label models");
    auto* report_cmd = app.add_subcommand("report", "Render CSV artifacts from the score report");

    auto* oracle_cmd =
        app.add_subcommand("oracle", "Check one statement against an instance's golden graph");
    std::string oracle_instance, oracle_id, oracle_statement;
    oracle_cmd->add_option("--instance", oracle_instance, "Instance JSON/JSONL file")->required();
    oracle_cmd->add_option("--id", oracle_id, "Instance id inside a JSONL dataset");
    oracle_cmd->add_option("--statement", oracle_statement, "Statement text, e.g. \"X is a and b\"")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    config.hard = !easy;
    config.remote_parser = parser_mode == "remote";
    if (short_mode) endpoint.max_tokens = 8000;

    try {
        if (config.remote_parser && config.remote.base_url.empty())
            throw ConfigError("--parser remote requires --parser-url");

        if (*gen_cmd) {
            auto instances = run_generate(config);
            std::cout << "wrote " << instances.size() << " instances to "
                      << dataset_path(config).string() << "\n";
        } else if (*synth_cmd) {
            run_synthesize(config);
            std::cout << "wrote synthetic traces for " << kAllArchetypes.size() << " archetypes\n";
        } else if (*run_cmd) {
            run_endpoint(config, endpoint);
            std::cout << "wrote traces to " << traces_path(config, endpoint.model).string()
                      << "\n";
        } else if (*eval_cmd) {
            auto models = run_evaluate(config);
            std::cout << "evaluated " << models.size() << " model(s)\n";
        } else if (*score_cmd) {
            auto report = run_score(config);
            for (const auto& row : report.rows)
                std::cout << row.model_id << ": " << archetype_name(row.archetype)
                          << " (confidence " << row.confidence << ")\n";
            std::cout << "wrote " << report_path(config).string() << "\n";
        } else if (*report_cmd) {
            run_report(config);
            std::cout << "wrote CSV artifacts under "
                      << (config.out_dir / "scores").string() << "\n";
        } else if (*oracle_cmd) {
            return run_oracle(oracle_instance, oracle_id, oracle_statement);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const MissingStageInput& e) {
        std::cerr << "missing input: " << e.what() << "\n";
        return kExitMissingInput;
    } catch (const AuthError& e) {
        std::cerr << "endpoint auth error: " << e.what() << "\n";
        return kExitEndpoint;
    } catch (const EndpointError& e) {
        std::cerr << "endpoint error: " << e.what() << "\n";
        return kExitEndpoint;
    } catch (const RemoteParserUnavailable& e) {
        std::cerr << "remote parser error: " << e.what() << "\n";
        return kExitEndpoint;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}
