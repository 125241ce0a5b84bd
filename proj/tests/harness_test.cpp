#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "logicbench/datagen.hpp"
#include "logicbench/errors.hpp"
#include "logicbench/harness.hpp"
#include "logicbench/metrics.hpp"
#include "logicbench/trace_parser.hpp"

using namespace logicbench;

namespace {

std::string completion_body(const std::string& content, bool with_usage,
                            const std::string& finish = "stop") {
    nlohmann::json j;
    j["choices"] = nlohmann::json::array();
    j["choices"].push_back({{"message", {{"role", "assistant"}, {"content", content}}},
                            {"finish_reason", finish}});
    if (with_usage) j["usage"] = {{"prompt_tokens", 50}, {"completion_tokens", 123}};
    return j.dump();
}

struct MockEndpoint {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::mutex mutex;
    std::vector<nlohmann::json> requests;
    std::string auth_header = "<none>";
    std::atomic<int> hits{0};

    explicit MockEndpoint(std::function<void(int, httplib::Response&)> handler) {
        server.Post("/v1/chat/completions",
                    [this, handler](const httplib::Request& req, httplib::Response& res) {
                        int n = ++hits;
                        {
                            std::lock_guard<std::mutex> lock(mutex);
                            auto j = nlohmann::json::parse(req.body, nullptr, false);
                            if (!j.is_discarded()) requests.push_back(j);
                            auth_header = req.has_header("Authorization")
                                              ? req.get_header_value("Authorization")
                                              : "<none>";
                        }
                        handler(n, res);
                    });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~MockEndpoint() {
        server.stop();
        thread.join();
    }

    EndpointConfig config() const {
        EndpointConfig cfg;
        cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
        cfg.model = "mock-model";
        cfg.retry.backoff_ms = 10;  // keep retried tests quick
        return cfg;
    }
};

}  // namespace

TEST_CASE("trace_from_response reads the completion schema") {
    std::string body = completion_body("Rex is big. \\boxed{True}", true, "length");
    TraceRecord rec = trace_from_response(body, "inst-1", "m");

    CHECK(rec.instance_id == "inst-1");
    CHECK(rec.model_id == "m");
    CHECK(rec.response_text == "Rex is big. \\boxed{True}");
    CHECK(rec.token_count == 123);
    CHECK(rec.token_source == "endpoint");
    CHECK(rec.truncated);
    CHECK(rec.raw_response == body);

    // replaying the persisted body reproduces the record exactly
    TraceRecord again = trace_from_response(rec.raw_response, "inst-1", "m");
    CHECK(again.response_text == rec.response_text);
    CHECK(again.token_count == rec.token_count);
    CHECK(again.token_source == rec.token_source);
    CHECK(again.truncated == rec.truncated);
    CHECK(again.raw_response == rec.raw_response);

    std::string no_usage = completion_body("one two three", false);
    TraceRecord local = trace_from_response(no_usage, "i", "m");
    CHECK(local.token_source == "local");
    CHECK(local.token_count == 3);
    CHECK_FALSE(local.truncated);

    CHECK_THROWS_AS(trace_from_response("not json at all", "i", "m"), EndpointError);
    CHECK_THROWS_AS(trace_from_response("{}", "i", "m"), EndpointError);
    CHECK_THROWS_AS(trace_from_response(R"({"choices": []})", "i", "m"), EndpointError);
    TraceRecord bare = trace_from_response(R"({"choices": [{}]})", "i", "m");
    CHECK(bare.response_text.empty());
    CHECK(bare.token_count == 0);
}

TEST_CASE("endpoint client sends the prompt and reads the reply") {
    MockEndpoint mock([](int, httplib::Response& res) {
        res.set_content(completion_body("All good. \\boxed{True}", true), "application/json");
    });
    setenv("LOGICBENCH_API_TOKEN", "hunter2", 1);

    ProblemInstance inst = generate_instance(3, true, 5, "c03-0005");
    EndpointClient client(mock.config());
    TraceRecord rec = client.query(inst);
    unsetenv("LOGICBENCH_API_TOKEN");

    CHECK(rec.instance_id == "c03-0005");
    CHECK(rec.model_id == "mock-model");
    CHECK(rec.response_text == "All good. \\boxed{True}");
    CHECK(rec.token_count == 123);
    CHECK(rec.wall_time_ms > 0);

    REQUIRE(mock.requests.size() == 1);
    const auto& req = mock.requests[0];
    CHECK(req.at("model") == "mock-model");
    CHECK(req.at("temperature") == 0.0);
    CHECK(req.at("max_tokens") == 24000);
    REQUIRE(req.at("messages").size() == 1);
    CHECK(req.at("messages")[0].at("role") == "user");
    CHECK(req.at("messages")[0].at("content") == inst.prompt_text);
    CHECK(mock.auth_header == "Bearer hunter2");
}

TEST_CASE("endpoint client retries server errors") {
    MockEndpoint mock([](int hit, httplib::Response& res) {
        if (hit < 3) {
            res.status = 503;
            res.set_content("overloaded", "text/plain");
        } else {
            res.set_content(completion_body("ok \\boxed{True}", true), "application/json");
        }
    });
    ProblemInstance inst = generate_instance(3, true, 6, "t");
    EndpointClient client(mock.config());
    TraceRecord rec = client.query(inst);
    CHECK(rec.response_text == "ok \\boxed{True}");
    CHECK(mock.hits == 3);
}

TEST_CASE("endpoint client failure modes") {
    ProblemInstance inst = generate_instance(3, true, 6, "t");

    {  // credential rejection aborts immediately
        MockEndpoint mock([](int, httplib::Response& res) { res.status = 401; });
        EndpointClient client(mock.config());
        CHECK_THROWS_AS(client.query(inst), AuthError);
        CHECK(mock.hits == 1);
    }
    {  // unexpected but non-retryable status
        MockEndpoint mock([](int, httplib::Response& res) { res.status = 404; });
        EndpointClient client(mock.config());
        CHECK_THROWS_AS(client.query(inst), EndpointError);
        CHECK(mock.hits == 1);
    }
    {  // persistent 5xx exhausts the retry budget
        MockEndpoint mock([](int, httplib::Response& res) { res.status = 500; });
        EndpointClient client(mock.config());
        CHECK_THROWS_AS(client.query(inst), EndpointError);
        CHECK(mock.hits == 3);
    }
    {  // nothing listening at all
        EndpointConfig cfg;
        cfg.base_url = "http://127.0.0.1:9";
        cfg.model = "m";
        cfg.retry.max_attempts = 1;
        cfg.timeout_seconds = 1;
        EndpointClient client(cfg);
        CHECK_THROWS_AS(client.query(inst), EndpointError);
    }
    {  // no token in the environment -> no Authorization header
        MockEndpoint mock([](int, httplib::Response& res) {
            res.set_content(completion_body("x", false), "application/json");
        });
        unsetenv("LOGICBENCH_API_TOKEN");
        EndpointClient client(mock.config());
        client.query(inst);
        CHECK(mock.auth_header == "<none>");
    }
}

TEST_CASE("synthesized traces are deterministic and archetype-shaped") {
    ProblemInstance inst = generate_instance(4, true, 21, "c04-0021");
    SearchLimits limits = limits_for_complexity(4);

    for (Archetype a : kAllArchetypes) {
        TraceRecord r1 = synthesize_trace(a, inst, 9);
        TraceRecord r2 = synthesize_trace(a, inst, 9);
        CHECK(r1.response_text == r2.response_text);
        CHECK(r1.instance_id == "c04-0021");
        CHECK(r1.model_id == archetype_name(a));
        CHECK(r1.token_count == count_tokens(r1.response_text));
        CHECK(parse_trace(r1.response_text).final_answer.has_value());
    }
    CHECK(synthesize_trace(Archetype::DeepWanderer, inst, 1).response_text !=
          synthesize_trace(Archetype::DeepWanderer, inst, 2).response_text);

    TraceRecord solver = synthesize_trace(Archetype::EffectiveSolver, inst, 9);
    TraceMetrics sm = evaluate_trace(parse_trace(solver.response_text), inst, limits);
    CHECK(sm.answer_correct);
    CHECK(sm.derived.max_correct_depth == 4);
    CHECK(sm.base.hallucination_nodes == 0);

    TraceRecord guesser = synthesize_trace(Archetype::LazyGuesser, inst, 9);
    TraceMetrics gm = evaluate_trace(parse_trace(guesser.response_text), inst, limits);
    CHECK(guesser.response_text.find("It is hard to tell.") != std::string::npos);
    CHECK(gm.derived.max_correct_depth == 0);
    CHECK(gm.base.sentences <= 4);

    TraceRecord wanderer = synthesize_trace(Archetype::DeepWanderer, inst, 9);
    TraceMetrics wm = evaluate_trace(parse_trace(wanderer.response_text), inst, limits);
    CHECK(wm.base.reflection_sentences > 0);
    CHECK(wm.answer_correct);
    CHECK(wm.derived.max_correct_depth == 4);
    CHECK(wanderer.token_count > solver.token_count);

    TraceRecord mimic = synthesize_trace(Archetype::HollowMimic, inst, 9);
    TraceMetrics mm = evaluate_trace(parse_trace(mimic.response_text), inst, limits);
    CHECK(mm.base.reflection_sentences > 0);
    CHECK(mm.derived.max_correct_depth <= 1);
    CHECK(mm.base.planning_nodes > 0);
}
