#pragma once

#include <random>
#include <string>
#include <unordered_set>

namespace logicbench {

struct VocabConfig {
    std::string consonants = "bdfgklmnprstvz";
    std::string vowels = "aeiou";
    int min_syllables = 2;
    int max_syllables = 3;
    double trailing_consonant_prob = 0.5;
    int max_attempts = 64;
};

/// Seeded pool of nonsense consonant-vowel words ("bavok", "lumipos", ...).
/// Every word handed out is unique for the lifetime of the pool.
class VocabPool {
public:
    VocabPool(VocabConfig config, std::mt19937_64& rng) : config_(std::move(config)), rng_(&rng) {}

    /// Lowercase predicate word, never seen before from this pool.
    std::string fresh_predicate();
    /// Capitalized entity name.
    std::string fresh_subject();

    /// Reserve a word so the pool will not hand it out again.
    void mark_used(const std::string& word);

    std::size_t used_count() const { return used_.size(); }

private:
    std::string sample_word();

    VocabConfig config_;
    std::mt19937_64* rng_;
    std::unordered_set<std::string> used_;
};

}  // namespace logicbench
