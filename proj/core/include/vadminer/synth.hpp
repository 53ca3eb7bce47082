#pragma once

#include "vadminer/corpus.hpp"
#include "vadminer/lexicon.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vadminer {

/// Inclusive count range.
struct CountRange {
    std::size_t min = 0;
    std::size_t max = 0;
};

/// Strengths of the planted relationships. All zero gives a direction-free corpus.
///
/// Each text inserts at most one "extreme" word per dimension, with a
/// probability (rate) that the effects below shift. Extreme words sit well
/// above the lexicon baseline on their own dimension and near it on the
/// others, so a higher rate means a higher range score on that dimension.
struct PlantedEffects {
    double priority_arousal = 0.0;  // arousal rate step per priority level (Blocker highest)
    double bug_valence = 0.0;       // valence rate reduction for Bug issues
    double slow_dominance = 0.0;    // dominance rate gap, slow minus fast issues
    double slow_valence = 0.0;      // valence rate gap, fast minus slow issues
    double valence_rise = 0.0;      // valence rate gain from first to last comment
    /// U-shaped arousal rate over a per-issue valence tone in [0, 1]. When nonzero,
    /// every text also carries one Valence word ranked by that tone.
    double valence_arousal_u = 0.0;
};

struct GeneratorConfig {
    std::size_t issues = 1000;
    std::array<double, kPriorityCount> priority_weights{0.08, 0.12, 0.45, 0.25, 0.10};
    std::array<double, kIssueTypeCount> type_weights{0.40, 0.08, 0.08, 0.04, 0.02,
                                                     0.12, 0.18, 0.03, 0.03, 0.02};
    double comment_mean = 5.0;
    CountRange comments{0, 20};
    double closed_fraction = 0.85;
    double assignee_fraction = 0.85;
    std::size_t participants = 300;

    CountRange title_words{2, 5};
    CountRange description_words{6, 18};
    CountRange comment_words{4, 12};
    double filler_ratio = 1.0;  // non-lexicon tokens per lexicon token

    double valence_rate = 0.35;
    double arousal_rate = 0.35;
    double dominance_rate = 0.35;
    double stratum_fraction = 0.08;  // share of eligible words in each extreme stratum

    double log_time_mean = 13.0;  // log seconds
    double log_time_sd = 1.3;
    double control_signal = 0.5;  // how strongly watchers/changes/developers track resolution time

    std::vector<std::string> external_features{"sentiment", "politeness"};
    PlantedEffects effects;
};

/// Parses the JSON generator spec; absent keys keep their defaults.
/// Throws ConfigError on unknown keys, negative weights or out-of-range values.
GeneratorConfig parse_generator_config(std::string_view json_text);
GeneratorConfig load_generator_config(const std::filesystem::path& path);
std::string to_json(const GeneratorConfig& config);
/// Throws ConfigError.
void validate(const GeneratorConfig& config);

/// Field histograms of a corpus, as recorded in the manifest.
struct CorpusHistogram {
    std::size_t issues = 0;
    std::map<std::string, std::size_t> priorities;
    std::map<std::string, std::size_t> types;
    std::map<std::string, std::size_t> statuses;
    std::map<std::size_t, std::size_t> comment_counts;
    std::size_t resolved = 0;
    std::size_t with_assignee = 0;
    std::size_t total_comments = 0;

    friend bool operator==(const CorpusHistogram&, const CorpusHistogram&) = default;
};

CorpusHistogram histogram(std::span<const IssueReport> issues);

struct PlantedDirection {
    std::string effect;     // e.g. "priority_arousal"
    char dimension = 'V';   // V, A or D
    char direction = '0';   // '+', '-' or '0'
    double strength = 0.0;
    std::string meaning;
};

struct Manifest {
    std::uint64_t seed = 0;
    GeneratorConfig config;
    CorpusHistogram histogram;
    std::vector<PlantedDirection> planted;
};

std::string to_json(const Manifest& manifest);
Manifest parse_manifest(std::string_view json_text);

struct GeneratedCorpus {
    std::vector<IssueReport> issues;
    Manifest manifest;
};

/// Deterministic for a fixed (config, lexicon, seed).
/// Throws ConfigError for an invalid config or a lexicon too small to stratify.
GeneratedCorpus generate_corpus(const GeneratorConfig& config, const Lexicon& lexicon,
                                std::uint64_t seed);

} // namespace vadminer
