#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "logicbench/graph.hpp"
#include "logicbench/vocab.hpp"

namespace logicbench {

struct GenConfig {
    VocabConfig vocab;
    /// Widest conjunction the backward expansion may build.
    int max_conjunction_width = 4;
    /// Root conclusions sample 1..3 predicates.
    int root_max_predicates = 3;
    /// Splits every leaf-to-root path must contain; -1 = complexity/2.
    /// Keeps premise counts growing ~ sqrt(2)^C. 0 disables the floor.
    int min_splits_per_path = -1;
    int max_invert_attempts = 24;
    int max_graph_attempts = 64;
    /// When set, roughly half the rendered instances ask about a corrupted
    /// conclusion and carry answer = false.
    bool negate = false;
};

/// Backward-chains a logically complete derivation tree of the requested
/// complexity. Hard mode appends `complexity` distractor facts over fresh
/// symbols. Deterministic in (complexity, hard, seed).
GoldenGraph generate_graph(int complexity, bool hard, std::uint64_t seed,
                           const GenConfig& config = {});

/// Standalone distractor facts with subjects/predicates disjoint from the
/// graph's vocabulary; adding them never changes golden provability.
std::vector<Statement> make_distractors(const GoldenGraph& graph, int count, std::mt19937_64& rng,
                                        const VocabConfig& vocab = {});

struct ProblemInstance {
    std::string id;
    int complexity = 0;
    std::vector<std::string> premise_text;  // shuffled premise sentences
    std::string question_text;
    std::string prompt_text;
    GoldenGraph golden;
    Statement question_target = Statement::atom("x", "p");
    bool answer = true;
};

/// Renders shuffled premise sentences, the question about `target` and the
/// full prompt (fixed template with the disambiguation note and the
/// boxed-answer instruction).
ProblemInstance render_instance(const GoldenGraph& graph, std::string id,
                                std::uint64_t shuffle_seed,
                                std::optional<Statement> target = std::nullopt,
                                bool answer = true);

/// generate_graph + optional negation + render_instance under one seed.
ProblemInstance generate_instance(int complexity, bool hard, std::uint64_t seed, std::string id,
                                  const GenConfig& config = {});

std::string statement_sentence(const Statement& s);
std::string universal_sentence(const UniversalRule& u);

}  // namespace logicbench
