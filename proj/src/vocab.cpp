#include "logicbench/vocab.hpp"

#include <cctype>
#include <unordered_set>

#include "logicbench/errors.hpp"
#include "logicbench/statement.hpp"

namespace logicbench {

std::string VocabPool::sample_word() {
    auto pick = [&](const std::string& set) {
        std::uniform_int_distribution<std::size_t> d(0, set.size() - 1);
        return set[d(*rng_)];
    };
    std::uniform_int_distribution<int> nsyl(config_.min_syllables, config_.max_syllables);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int n = nsyl(*rng_);
    std::string w;
    for (int i = 0; i < n; ++i) {
        w += pick(config_.consonants);
        w += pick(config_.vowels);
    }
    if (coin(*rng_) < config_.trailing_consonant_prob) w += pick(config_.consonants);
    return w;
}

namespace {

// English words the sampler can actually produce; they collide with grammar
// keywords or parser stop lists, so never hand them out.
const std::unordered_set<std::string> kReservedWords = {"given", "done", "valid", "data",
                                                        "gone",  "mode", "node"};

}  // namespace

std::string VocabPool::fresh_predicate() {
    if (config_.consonants.empty() || config_.vowels.empty())
        throw VocabularyExhausted("vocabulary alphabet is empty");
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
        std::string w = sample_word();
        if (kReservedWords.count(w)) continue;
        if (used_.insert(w).second) return w;
    }
    throw VocabularyExhausted("could not sample a fresh word after " +
                              std::to_string(config_.max_attempts) + " attempts");
}

std::string VocabPool::fresh_subject() {
    std::string w = fresh_predicate();
    w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    // reserve the lowercase spelling too: keys are case-insensitive
    used_.insert(to_lower(w));
    return w;
}

void VocabPool::mark_used(const std::string& word) {
    used_.insert(to_lower(word));
}

}  // namespace logicbench
