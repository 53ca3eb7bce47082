#include "vadminer/standin_lexicon.hpp"

#include "vadminer/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <string>
#include <unordered_set>

namespace vadminer {

namespace {

double clamp_round(double value, double lo, double hi) {
    return std::round(std::clamp(value, lo, hi) * 100.0) / 100.0;
}

std::string pseudo_word(Rng& rng) {
    static constexpr std::array<const char*, 20> kOnsets{
        "b", "c", "d", "f", "g", "h", "k", "l", "m", "n",
        "p", "r", "s", "t", "v", "br", "tr", "pl", "st", "gr"};
    static constexpr std::array<const char*, 8> kNuclei{"a", "e", "i", "o", "u", "ai", "ou", "ee"};
    static constexpr std::array<const char*, 8> kCodas{"", "", "", "n", "r", "s", "l", "t"};
    const auto syllables = rng.between(2, 4);
    std::string word;
    for (std::int64_t i = 0; i < syllables; ++i) {
        word += kOnsets[rng.below(kOnsets.size())];
        word += kNuclei[rng.below(kNuclei.size())];
        word += kCodas[rng.below(kCodas.size())];
    }
    return word;
}

} // namespace

std::vector<LexiconEntry> discrete_emotion_entries() {
    return {
        {"anger", 2.50, 5.93, 5.14},
        {"joy", 8.21, 5.55, 7.00},
        {"sadness", 2.40, 2.81, 3.84},
        {"love", 8.00, 5.36, 5.92},
    };
}

std::vector<LexiconEntry> standin_entries(std::size_t size, std::uint64_t seed) {
    auto entries = discrete_emotion_entries();
    if (size <= entries.size()) {
        entries.resize(size);
        return entries;
    }
    std::unordered_set<std::string> used;
    for (const auto& e : entries) used.insert(e.word);

    Rng rng(seed);
    entries.reserve(size);
    while (entries.size() < size) {
        std::string word = pseudo_word(rng);
        if (!used.insert(word).second) continue;
        const double v = rng.normal(5.06, 1.27);
        const double dv = v - 5.06;
        const double a = 3.55 + 0.28 * dv * dv + rng.normal(0.0, 0.75);
        const double d = 5.18 + 0.53 * dv + rng.normal(0.0, 0.66);
        entries.push_back({std::move(word), clamp_round(v, 1.26, 8.53), clamp_round(a, 1.6, 7.79),
                           clamp_round(d, 1.68, 7.9)});
    }
    return entries;
}

void write_warriner_csv(std::ostream& out, const std::vector<LexiconEntry>& entries) {
    out << ",Word,V.Mean.Sum,A.Mean.Sum,D.Mean.Sum\n";
    std::size_t row = 0;
    for (const auto& e : entries)
        out << fmt::format("{},{},{:.2f},{:.2f},{:.2f}\n", ++row, e.word, e.valence, e.arousal,
                           e.dominance);
}

} // namespace vadminer
