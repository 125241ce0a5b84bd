#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logicbench/archetype.hpp"
#include "logicbench/datagen.hpp"

namespace logicbench {

struct RetryPolicy {
    int max_attempts = 3;
    int backoff_ms = 250;  // doubles after each failed attempt
};

struct EndpointConfig {
    std::string base_url;
    std::string path = "/v1/chat/completions";
    std::string model;
    double temperature = 0.0;
    int max_tokens = 24000;  // long reasoning mode; short mode uses 8000
    std::string token_env = "LOGICBENCH_API_TOKEN";
    int timeout_seconds = 120;
    RetryPolicy retry;
    int requests_per_minute = 0;  // 0 disables rate limiting
};

struct TraceRecord {
    std::string instance_id;
    std::string model_id;
    std::string response_text;
    int token_count = 0;
    std::string token_source = "local";  // "endpoint" when usage was reported
    bool truncated = false;              // endpoint stopped at the token cap
    double wall_time_ms = 0;
    std::string raw_response;  // verbatim endpoint body, for replay
};

/// Builds a TraceRecord from a raw chat-completions response body.  Pure, so
/// replaying a persisted body reproduces the record byte for byte.
TraceRecord trace_from_response(const std::string& body, const std::string& instance_id,
                                const std::string& model_id);

/// One model endpoint with retry, auth, and optional rate limiting.
class EndpointClient {
public:
    explicit EndpointClient(EndpointConfig config);
    ~EndpointClient();

    EndpointClient(const EndpointClient&) = delete;
    EndpointClient& operator=(const EndpointClient&) = delete;

    /// Sends the instance prompt as a single user message.  Throws AuthError
    /// on 401/403 and EndpointError after exhausted retries.
    TraceRecord query(const ProblemInstance& inst);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Deterministic archetype-shaped trace for end-to-end testing without any
/// model access.
TraceRecord synthesize_trace(Archetype archetype, const ProblemInstance& inst,
                             std::uint64_t seed);

}  // namespace logicbench
