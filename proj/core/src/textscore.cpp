#include "vadminer/textscore.hpp"

#include "vadminer/errors.hpp"

#include <algorithm>

namespace vadminer {

TokenizedText tokenize(std::string_view text) {
    TokenizedText out;
    for_each_token(text, [&](std::string_view token) { out.tokens.emplace_back(token); });
    return out;
}

TokenizedText tokenize(std::string_view text, const Lexicon& lexicon) {
    TokenizedText out;
    for_each_token(text, [&](std::string_view token) {
        out.tokens.emplace_back(token);
        if (lexicon.find_lower(token) != nullptr) out.matched.emplace_back(token);
    });
    return out;
}

double range_from_extremes(double min_score, double max_score, double baseline) noexcept {
    if (min_score > baseline) return max_score - baseline;
    if (max_score < baseline) return baseline - min_score;
    return max_score - min_score;
}

std::optional<double> range_score(std::span<const std::string> matched_words,
                                  const Lexicon& lexicon, Dimension dim) {
    if (matched_words.empty()) return std::nullopt;
    double lo = kMaxScore + 1.0;
    double hi = kMinScore - 1.0;
    for (const auto& word : matched_words) {
        const auto* entry = lexicon.find_lower(ascii_lower(word));
        if (entry == nullptr) throw ContractError("word '" + word + "' is not in the lexicon");
        lo = std::min(lo, entry->score(dim));
        hi = std::max(hi, entry->score(dim));
    }
    return range_from_extremes(lo, hi, lexicon.baseline(dim));
}

void RangeAccumulator::add(const LexiconEntry& entry) noexcept {
    const double scores[3] = {entry.valence, entry.arousal, entry.dominance};
    for (std::size_t d = 0; d < 3; ++d) {
        min_[d] = std::min(min_[d], scores[d]);
        max_[d] = std::max(max_[d], scores[d]);
    }
    ++count_;
}

void RangeAccumulator::merge(const RangeAccumulator& other) noexcept {
    for (std::size_t d = 0; d < 3; ++d) {
        min_[d] = std::min(min_[d], other.min_[d]);
        max_[d] = std::max(max_[d], other.max_[d]);
    }
    count_ += other.count_;
}

VadScore RangeAccumulator::finish(const Lexicon& lexicon) const noexcept {
    VadScore score;
    score.matched_count = count_;
    if (count_ == 0) return score;
    score.valence = range_from_extremes(min_[0], max_[0], lexicon.baseline(Dimension::Valence));
    score.arousal = range_from_extremes(min_[1], max_[1], lexicon.baseline(Dimension::Arousal));
    score.dominance = range_from_extremes(min_[2], max_[2], lexicon.baseline(Dimension::Dominance));
    return score;
}

void accumulate_text(std::string_view text, const Lexicon& lexicon, RangeAccumulator& acc) {
    for_each_token(text, [&](std::string_view token) {
        if (const auto* entry = lexicon.find_lower(token)) acc.add(*entry);
    });
}

VadScore score_text(std::string_view text, const Lexicon& lexicon) {
    RangeAccumulator acc;
    accumulate_text(text, lexicon, acc);
    return acc.finish(lexicon);
}

} // namespace vadminer
