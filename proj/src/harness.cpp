#include "logicbench/harness.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "logicbench/errors.hpp"
#include "logicbench/rng.hpp"
#include "logicbench/trace_parser.hpp"

namespace logicbench {

TraceRecord trace_from_response(const std::string& body, const std::string& instance_id,
                                const std::string& model_id) {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw EndpointError("endpoint reply is not a JSON object");
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
        throw EndpointError("endpoint reply has no choices");
    const auto& choice = j["choices"][0];

    TraceRecord rec;
    rec.instance_id = instance_id;
    rec.model_id = model_id;
    rec.raw_response = body;
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string())
        rec.response_text = choice["message"]["content"].get<std::string>();
    if (choice.contains("finish_reason") && choice["finish_reason"].is_string())
        rec.truncated = choice["finish_reason"].get<std::string>() == "length";
    if (j.contains("usage") && j["usage"].contains("completion_tokens") &&
        j["usage"]["completion_tokens"].is_number()) {
        rec.token_count = j["usage"]["completion_tokens"].get<int>();
        rec.token_source = "endpoint";
    } else {
        rec.token_count = count_tokens(rec.response_text);
        rec.token_source = "local";
    }
    return rec;
}

struct EndpointClient::Impl {
    EndpointConfig config;
    std::mutex gate;
    std::chrono::steady_clock::time_point next_slot = std::chrono::steady_clock::now();

    void rate_limit() {
        if (config.requests_per_minute <= 0) return;
        const auto interval = std::chrono::milliseconds(60000 / config.requests_per_minute);
        std::chrono::steady_clock::time_point wake;
        {
            std::lock_guard<std::mutex> lock(gate);
            auto now = std::chrono::steady_clock::now();
            wake = std::max(now, next_slot);
            next_slot = wake + interval;
        }
        std::this_thread::sleep_until(wake);
    }
};

EndpointClient::EndpointClient(EndpointConfig config)
    : impl_(std::make_unique<Impl>()) {
    impl_->config = std::move(config);
}

EndpointClient::~EndpointClient() = default;

TraceRecord EndpointClient::query(const ProblemInstance& inst) {
    const EndpointConfig& cfg = impl_->config;

    nlohmann::json body{
        {"model", cfg.model},
        {"messages", nlohmann::json::array({nlohmann::json{{"role", "user"},
                                                           {"content", inst.prompt_text}}})},
        {"temperature", cfg.temperature},
        {"max_tokens", cfg.max_tokens},
    };
    httplib::Headers headers;
    if (const char* tok = std::getenv(cfg.token_env.c_str()); tok && *tok)
        headers.emplace("Authorization", std::string("Bearer ") + tok);

    std::string last_error = "no attempts made";
    int backoff = cfg.retry.backoff_ms;
    for (int attempt = 0; attempt < std::max(cfg.retry.max_attempts, 1); ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff *= 2;
        }
        impl_->rate_limit();

        httplib::Client client(cfg.base_url);
        client.set_connection_timeout(cfg.timeout_seconds);
        client.set_read_timeout(cfg.timeout_seconds);

        auto start = std::chrono::steady_clock::now();
        auto res = client.Post(cfg.path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403)
            throw AuthError("endpoint rejected credentials with status " +
                            std::to_string(res->status));
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw EndpointError("endpoint returned status " + std::to_string(res->status));

        TraceRecord rec = trace_from_response(res->body, inst.id, cfg.model);
        rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        return rec;
    }
    throw EndpointError("endpoint failed after " + std::to_string(cfg.retry.max_attempts) +
                        " attempts: " + last_error);
}

namespace {

std::vector<int> derivation_order(const GoldenGraph& g) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i)
        if (g.nodes[i].depth > 0) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return g.nodes[a].depth < g.nodes[b].depth; });
    return idx;
}

std::string derivation_sentence(const GoldenGraph& g, int i) {
    const auto& node = g.nodes[i];
    std::vector<std::string> parts;
    for (int child : node.inputs) parts.push_back(g.nodes[child].statement.text());
    if (node.universal_index) parts.push_back(g.universals[*node.universal_index].text());
    std::string out = "Since ";
    for (std::size_t p = 0; p < parts.size(); ++p) {
        if (p > 0) out += ", and ";
        out += parts[p];
    }
    out += ", " + node.statement.text() + ".";
    return out;
}

std::string boxed_sentence(bool verdict) {
    return std::string("Therefore, the answer is \\boxed{") + (verdict ? "True" : "False") + "}.";
}

std::vector<Statement> premise_statements(const GoldenGraph& g, bool with_distractors) {
    std::vector<Statement> out;
    for (const auto& n : g.nodes)
        if (n.depth == 0) out.push_back(n.statement);
    if (with_distractors)
        for (const auto& d : g.distractors) out.push_back(d);
    return out;
}

std::set<std::string> instance_vocabulary(const GoldenGraph& g) {
    std::set<std::string> vocab;
    for (const auto& n : g.nodes)
        for (const auto& p : n.statement.predicates()) vocab.insert(p);
    for (const auto& d : g.distractors)
        for (const auto& p : d.predicates()) vocab.insert(p);
    for (const auto& u : g.universals) {
        for (const auto& p : u.antecedent().predicates()) vocab.insert(p);
        for (const auto& p : u.consequent().predicates()) vocab.insert(p);
    }
    return vocab;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) out += "\n";
        out += lines[i];
    }
    return out;
}

std::string fresh_nonsense_word(std::mt19937_64& rng, const std::set<std::string>& vocab) {
    const std::string consonants = "bdfgklmnprstvz", vowels = "aeiou";
    std::uniform_int_distribution<std::size_t> dc(0, consonants.size() - 1);
    std::uniform_int_distribution<std::size_t> dv(0, vowels.size() - 1);
    for (;;) {
        std::string w;
        for (int s = 0; s < 3; ++s) {
            w += consonants[dc(rng)];
            w += vowels[dv(rng)];
        }
        w += 'x';  // 'x' is outside the generator alphabet, guaranteeing freshness
        if (!vocab.count(w)) return w;
    }
}

std::vector<std::string> effective_solver_lines(const ProblemInstance& inst) {
    std::vector<std::string> lines;
    for (int i : derivation_order(inst.golden)) lines.push_back(derivation_sentence(inst.golden, i));
    if (!inst.answer) lines.push_back("This does not match the questioned statement.");
    lines.push_back(boxed_sentence(inst.answer));
    return lines;
}

std::vector<std::string> deep_wanderer_lines(const ProblemInstance& inst, std::mt19937_64& rng) {
    const GoldenGraph& g = inst.golden;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const auto vocab = instance_vocabulary(g);

    std::vector<std::string> lines;
    lines.push_back("The goal is to derive " + g.conclusion().text() + ".");
    for (const auto& s : premise_statements(g, false)) lines.push_back(s.text() + ".");
    for (const auto& u : g.universals) lines.push_back(u.text() + ".");
    const std::vector<int> order = derivation_order(g);
    std::vector<std::string> derivations;
    for (int i : order) derivations.push_back(derivation_sentence(g, i));
    std::uniform_int_distribution<std::size_t> pick_deriv(0, derivations.size() - 1);

    for (std::size_t d = 0; d < derivations.size(); ++d) {
        lines.push_back(derivations[d]);
        const auto& node = g.nodes[order[d]].statement;
        if (coin(rng) < 0.6) {
            // a valid but redundant side derivation
            if (node.form() == Connective::conj && node.width() >= 2) {
                std::uniform_int_distribution<std::size_t> pick(0, node.predicates().size() - 1);
                std::size_t drop = pick(rng);
                std::vector<std::string> kept;
                for (std::size_t p = 0; p < node.predicates().size(); ++p)
                    if (p != drop) kept.push_back(node.predicates()[p]);
                Statement side = Statement::make(node.subject(), Connective::conj, kept);
                lines.push_back("Also, " + side.text() + ".");
            } else {
                std::vector<std::string> options;
                for (const auto& w : vocab) {
                    const auto& ps = node.predicates();
                    if (std::find(ps.begin(), ps.end(), w) == ps.end()) options.push_back(w);
                }
                if (!options.empty()) {
                    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
                    auto preds = node.predicates();
                    preds.push_back(options[pick(rng)]);
                    Statement side = Statement::make(node.subject(), Connective::disj, preds);
                    lines.push_back("Also, " + side.text() + ".");
                }
            }
        }
        if (d + 1 < derivations.size() && coin(rng) < 0.45) {
            lines.push_back("Wait, let me double-check that " + node.text() + ".");
        }
    }
    lines.push_back("I need to show that " + g.conclusion().text() + ".");
    lines.push_back(derivations.back());
    int repeats = 2 + static_cast<int>(rng() % 3);
    for (int r = 0; r < repeats; ++r) lines.push_back(derivations[pick_deriv(rng)]);
    lines.push_back("Actually, everything checks out.");
    if (!inst.answer) lines.push_back("This does not match the questioned statement.");
    lines.push_back(boxed_sentence(inst.answer));
    return lines;
}

std::vector<std::string> lazy_guesser_lines(const ProblemInstance& inst, std::mt19937_64& rng) {
    auto prems = premise_statements(inst.golden, true);
    std::shuffle(prems.begin(), prems.end(), rng);
    std::vector<std::string> lines;
    const std::size_t shown = std::min<std::size_t>(prems.size(), 2);
    for (std::size_t i = 0; i < shown; ++i) lines.push_back(prems[i].text() + ".");
    lines.push_back("It is hard to tell.");
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    lines.push_back(boxed_sentence(coin(rng) < 0.5));
    return lines;
}

std::vector<std::string> hollow_mimic_lines(const ProblemInstance& inst, std::mt19937_64& rng) {
    const GoldenGraph& g = inst.golden;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const auto vocab = instance_vocabulary(g);
    auto prems = premise_statements(g, true);
    std::uniform_int_distribution<std::size_t> pick_prem(0, prems.size() - 1);

    std::vector<std::string> shallow;  // depth-1 derivations only
    for (int i : derivation_order(g))
        if (g.nodes[i].depth == 1) shallow.push_back(derivation_sentence(g, i));

    std::vector<std::string> lines;
    lines.push_back("The goal is to derive " + g.conclusion().text() + ".");
    lines.push_back("I need to show that " + g.conclusion().text() + ".");
    int blocks = 3 + static_cast<int>(rng() % 3);
    for (int b = 0; b < blocks; ++b) {
        lines.push_back(prems[pick_prem(rng)].text() + ".");
        if (!shallow.empty()) lines.push_back(shallow[rng() % shallow.size()]);
        lines.push_back("Wait, let me re-check the given statements.");
        lines.push_back(prems[pick_prem(rng)].text() + ".");
        if (coin(rng) < 0.5) {
            std::string subject = g.conclusion().subject();
            lines.push_back("Hmm, maybe " + subject + " is " + fresh_nonsense_word(rng, vocab) +
                            ".");
        }
        lines.push_back("The plan is to combine the given statements.");
    }
    lines.push_back("On second thought, the reasoning above should settle it.");
    bool verdict = coin(rng) < 0.25 ? inst.answer : !inst.answer;
    lines.push_back(boxed_sentence(verdict));
    return lines;
}

}  // namespace

TraceRecord synthesize_trace(Archetype archetype, const ProblemInstance& inst,
                             std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, {0x747261636573ull, static_cast<std::uint64_t>(archetype)}));
    std::vector<std::string> lines;
    switch (archetype) {
        case Archetype::EffectiveSolver: lines = effective_solver_lines(inst); break;
        case Archetype::DeepWanderer: lines = deep_wanderer_lines(inst, rng); break;
        case Archetype::LazyGuesser: lines = lazy_guesser_lines(inst, rng); break;
        case Archetype::HollowMimic: lines = hollow_mimic_lines(inst, rng); break;
    }
    TraceRecord rec;
    rec.instance_id = inst.id;
    rec.model_id = archetype_name(archetype);
    rec.response_text = join_lines(lines);
    rec.token_count = count_tokens(rec.response_text);
    rec.token_source = "local";
    return rec;
}

}  // namespace logicbench
