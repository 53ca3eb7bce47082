#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vadminer {

enum class Dimension { Valence = 0, Arousal = 1, Dominance = 2 };

inline constexpr std::array<Dimension, 3> kDimensions{
    Dimension::Valence, Dimension::Arousal, Dimension::Dominance};

std::string_view dimension_name(Dimension dim);   // "valence"
char dimension_letter(Dimension dim);              // 'V'
/// Accepts v/a/d and full names, case-insensitive.
std::optional<Dimension> parse_dimension(std::string_view text);

/// Lexicon scores live on the 1-9 rating scale.
inline constexpr double kMinScore = 1.0;
inline constexpr double kMaxScore = 9.0;

struct LexiconEntry {
    std::string word;
    double valence = 0.0;
    double arousal = 0.0;
    double dominance = 0.0;

    double score(Dimension dim) const noexcept {
        switch (dim) {
        case Dimension::Valence: return valence;
        case Dimension::Arousal: return arousal;
        case Dimension::Dominance: return dominance;
        }
        return valence;
    }

    friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Lowercases ASCII letters; other bytes pass through unchanged.
std::string ascii_lower(std::string_view text);

/// Immutable word -> VAD table with per-dimension baselines (mean over all entries).
///
/// Safe to share between threads once constructed.
class Lexicon {
public:
    /// Validates and lowercases `entries`. Throws ValidationError on an empty
    /// list, a duplicate word, a bad word, or a score outside [1, 9].
    explicit Lexicon(std::vector<LexiconEntry> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    double baseline(Dimension dim) const noexcept { return baseline_[static_cast<std::size_t>(dim)]; }

    /// Case-insensitive. Never throws.
    std::optional<LexiconEntry> lookup(std::string_view word) const;

    /// Allocation-free lookup for a word that is already lowercase.
    const LexiconEntry* find_lower(std::string_view lower_word) const noexcept;

    /// Entries in the order they were supplied.
    const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<LexiconEntry> entries_;
    std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
    std::array<double, 3> baseline_{};
};

/// Parses lexicon CSV. The header must name `word`, `valence`, `arousal` and
/// `dominance` columns in any order; Warriner's `Word`, `V.Mean.Sum`,
/// `A.Mean.Sum`, `D.Mean.Sum` are accepted as aliases and extra columns are
/// ignored. Throws ParseError (with line number) or ValidationError.
Lexicon load_lexicon(std::istream& in);
Lexicon load_lexicon_file(const std::filesystem::path& path);

/// Writes canonical `word,valence,arousal,dominance` CSV in entry order.
void write_lexicon(std::ostream& out, const Lexicon& lexicon);

} // namespace vadminer
