#pragma once

#include "vadminer/lexicon.hpp"

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vadminer {

/// Tokenizer output. `matched` holds the tokens found in the lexicon, in order
/// and with repetition.
struct TokenizedText {
    std::vector<std::string> tokens;
    std::vector<std::string> matched;
};

/// Splits on every non-letter character and lowercases the letter runs.
///
/// Letters are ASCII a-z/A-Z plus UTF-8 encoded code points in the Latin-1
/// letter range, Latin Extended-A/B, Greek and Cyrillic. Only ASCII is
/// case-folded. Digits, underscores and punctuation are separators, so
/// `stack_trace0x7f` yields `stack`, `trace`, `x`, `f`.
TokenizedText tokenize(std::string_view text);
TokenizedText tokenize(std::string_view text, const Lexicon& lexicon);

/// Calls `fn(std::string_view lowercase_token)` for every token without
/// materialising the token list.
template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn);

/// Range formula folded at the lexicon baseline. Ties with the baseline fall
/// into the max-min branch.
double range_from_extremes(double min_score, double max_score, double baseline) noexcept;

/// Range score of `matched_words` on one dimension; absent for an empty list.
/// Throws ContractError if a word is not in the lexicon.
std::optional<double> range_score(std::span<const std::string> matched_words,
                                  const Lexicon& lexicon, Dimension dim);

/// Text-level VAD score: one value per dimension, present iff at least one
/// token matched the lexicon.
struct VadScore {
    std::optional<double> valence;
    std::optional<double> arousal;
    std::optional<double> dominance;
    std::size_t matched_count = 0;

    std::optional<double> get(Dimension dim) const noexcept {
        switch (dim) {
        case Dimension::Valence: return valence;
        case Dimension::Arousal: return arousal;
        case Dimension::Dominance: return dominance;
        }
        return std::nullopt;
    }

    friend bool operator==(const VadScore&, const VadScore&) = default;
};

/// Running min/max per dimension. Merging accumulators is equivalent to
/// scoring the concatenation of their texts.
class RangeAccumulator {
public:
    void add(const LexiconEntry& entry) noexcept;
    void merge(const RangeAccumulator& other) noexcept;
    std::size_t matched_count() const noexcept { return count_; }
    VadScore finish(const Lexicon& lexicon) const noexcept;

private:
    std::array<double, 3> min_{std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity()};
    std::array<double, 3> max_{-std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity(),
                               -std::numeric_limits<double>::infinity()};
    std::size_t count_ = 0;
};

/// Adds every lexicon match in `text` to `acc`.
void accumulate_text(std::string_view text, const Lexicon& lexicon, RangeAccumulator& acc);

VadScore score_text(std::string_view text, const Lexicon& lexicon);

// --- implementation -------------------------------------------------------

namespace detail {

/// Byte length of the letter starting at text[i], or 0 if text[i] does not
/// start a letter.
inline std::size_t letter_length(std::string_view text, std::size_t i) noexcept {
    const auto c = static_cast<unsigned char>(text[i]);
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return 1;
    if (c < 0xC0 || i + 1 >= text.size()) return 0;
    const auto c1 = static_cast<unsigned char>(text[i + 1]);
    if ((c1 & 0xC0) != 0x80 || (c & 0xE0) != 0xC0) return 0;
    const unsigned cp = ((c & 0x1Fu) << 6) | (c1 & 0x3Fu);
    const bool latin = cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7;
    const bool greek_cyrillic = cp >= 0x370 && cp <= 0x52F;
    return (latin || greek_cyrillic) ? 2 : 0;
}

} // namespace detail

template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn) {
    std::string buffer;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t len = detail::letter_length(text, i);
        if (len == 0) {
            ++i;
            continue;
        }
        buffer.clear();
        while (len != 0) {
            for (std::size_t k = 0; k < len; ++k) {
                char ch = text[i + k];
                if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
                buffer.push_back(ch);
            }
            i += len;
            len = i < text.size() ? detail::letter_length(text, i) : 0;
        }
        fn(std::string_view(buffer));
    }
}

} // namespace vadminer
