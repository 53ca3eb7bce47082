#pragma once

#include "vadminer/lexicon.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace vadminer {

/// Warriner et al.'s published ratings for anger, joy, sadness and love.
std::vector<LexiconEntry> discrete_emotion_entries();

/// Number of words in Warriner et al.'s norms.
inline constexpr std::size_t kWarrinerSize = 13915;

/// Deterministic Warriner-shaped lexicon for desk-scale work when the real
/// norms file is unavailable. Contains the four discrete-emotion words at
/// their published values plus pronounceable pseudo-words whose scores follow
/// Warriner-like marginals: valence ~ N(5.06, 1.27), arousal U-shaped in
/// valence, dominance correlated with valence. Scores use two decimals.
std::vector<LexiconEntry> standin_entries(std::size_t size = kWarrinerSize,
                                          std::uint64_t seed = 2013);

/// Writes the layout of the published norms file:
/// `,Word,V.Mean.Sum,A.Mean.Sum,D.Mean.Sum` with a leading row index column.
void write_warriner_csv(std::ostream& out, const std::vector<LexiconEntry>& entries);

} // namespace vadminer
