#pragma once

#include <stdexcept>
#include <string>

namespace logicbench {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// logic_core
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& what) : Error(what) {}
};
struct RuleInadmissible : Error {
    explicit RuleInadmissible(const std::string& what) : Error(what) {}
};

// datagen
struct VocabularyExhausted : Error {
    explicit VocabularyExhausted(const std::string& what) : Error(what) {}
};
struct GenerationFailed : Error {
    explicit GenerationFailed(const std::string& what) : Error(what) {}
};

// prover
struct ClosureExplosion : Error {
    explicit ClosureExplosion(const std::string& what) : Error(what) {}
};

// trace_parser
struct RemoteParserUnavailable : Error {
    explicit RemoteParserUnavailable(const std::string& what) : Error(what) {}
};
struct MalformedRemoteReply : Error {
    explicit MalformedRemoteReply(const std::string& what) : Error(what) {}
};

// scoring
struct EmptyPopulation : Error {
    explicit EmptyPopulation(const std::string& what) : Error(what) {}
};
struct DegeneratePopulation : Error {
    explicit DegeneratePopulation(const std::string& what) : Error(what) {}
};
struct CoincidentCentroids : Error {
    explicit CoincidentCentroids(const std::string& what) : Error(what) {}
};

// harness
struct EndpointError : Error {
    explicit EndpointError(const std::string& what) : Error(what) {}
};
struct AuthError : Error {
    explicit AuthError(const std::string& what) : Error(what) {}
};

// cli / pipeline
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};
struct MissingStageInput : Error {
    explicit MissingStageInput(const std::string& what) : Error(what) {}
};

}  // namespace logicbench
