#include "vadminer/synth.hpp"

#include "vadminer/errors.hpp"
#include "vadminer/random.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace vadminer {

namespace {

using nlohmann::json;

void require_rate(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0))
        throw ConfigError(fmt::format("{} must be in [0, 1], got {}", name, value));
}

void require_range(const CountRange& r, const char* name) {
    if (r.min > r.max) throw ConfigError(fmt::format("{}: min exceeds max", name));
}

template <std::size_t N>
void require_weights(const std::array<double, N>& weights, const char* name, bool need_positive) {
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ConfigError(fmt::format("{}: negative or invalid weight {}", name, w));
        total += w;
    }
    if (need_positive && total <= 0.0) throw ConfigError(fmt::format("{}: all weights are zero", name));
}

CountRange range_from(const json& j, const char* name) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ConfigError(fmt::format("{} must be [min, max] integers", name));
    const auto lo = j[0].get<std::int64_t>();
    const auto hi = j[1].get<std::int64_t>();
    if (lo < 0 || hi < 0) throw ConfigError(fmt::format("{}: negative count", name));
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

double number_from(const json& j, const char* name) {
    if (!j.is_number()) throw ConfigError(fmt::format("{} must be a number", name));
    return j.get<double>();
}

std::size_t count_from(const json& j, const char* name) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        throw ConfigError(fmt::format("{} must be a non-negative integer", name));
    return j.get<std::size_t>();
}

template <typename Enum, std::size_t N>
void weights_from(const json& j, std::array<double, N>& weights, const char* name) {
    if (!j.is_object()) throw ConfigError(fmt::format("{} must be an object", name));
    weights.fill(0.0);
    for (const auto& [key, value] : j.items()) {
        std::optional<Enum> parsed;
        if constexpr (std::is_same_v<Enum, Priority>) parsed = parse_priority(key);
        else parsed = parse_issue_type(key);
        if (!parsed) throw ConfigError(fmt::format("{}: unknown key '{}'", name, key));
        weights[static_cast<std::size_t>(*parsed)] = number_from(value, name);
    }
}

GeneratorConfig config_from_json(const json& root) {
    if (!root.is_object()) throw ConfigError("generator spec must be a JSON object");
    GeneratorConfig c;
    for (const auto& [key, value] : root.items()) {
        if (key == "issues") c.issues = count_from(value, "issues");
        else if (key == "priority_weights") weights_from<Priority>(value, c.priority_weights, "priority_weights");
        else if (key == "type_weights") weights_from<IssueType>(value, c.type_weights, "type_weights");
        else if (key == "comment_mean") c.comment_mean = number_from(value, "comment_mean");
        else if (key == "comments") c.comments = range_from(value, "comments");
        else if (key == "closed_fraction") c.closed_fraction = number_from(value, "closed_fraction");
        else if (key == "assignee_fraction") c.assignee_fraction = number_from(value, "assignee_fraction");
        else if (key == "participants") c.participants = count_from(value, "participants");
        else if (key == "title_words") c.title_words = range_from(value, "title_words");
        else if (key == "description_words") c.description_words = range_from(value, "description_words");
        else if (key == "comment_words") c.comment_words = range_from(value, "comment_words");
        else if (key == "filler_ratio") c.filler_ratio = number_from(value, "filler_ratio");
        else if (key == "valence_rate") c.valence_rate = number_from(value, "valence_rate");
        else if (key == "arousal_rate") c.arousal_rate = number_from(value, "arousal_rate");
        else if (key == "dominance_rate") c.dominance_rate = number_from(value, "dominance_rate");
        else if (key == "stratum_fraction") c.stratum_fraction = number_from(value, "stratum_fraction");
        else if (key == "log_time_mean") c.log_time_mean = number_from(value, "log_time_mean");
        else if (key == "log_time_sd") c.log_time_sd = number_from(value, "log_time_sd");
        else if (key == "control_signal") c.control_signal = number_from(value, "control_signal");
        else if (key == "external_features") {
            if (!value.is_array()) throw ConfigError("external_features must be an array of names");
            c.external_features.clear();
            for (const auto& name : value) {
                if (!name.is_string()) throw ConfigError("external_features must be an array of names");
                c.external_features.push_back(name.get<std::string>());
            }
        } else if (key == "effects") {
            if (!value.is_object()) throw ConfigError("effects must be an object");
            for (const auto& [ek, ev] : value.items()) {
                double* target = nullptr;
                if (ek == "priority_arousal") target = &c.effects.priority_arousal;
                else if (ek == "bug_valence") target = &c.effects.bug_valence;
                else if (ek == "slow_dominance") target = &c.effects.slow_dominance;
                else if (ek == "slow_valence") target = &c.effects.slow_valence;
                else if (ek == "valence_rise") target = &c.effects.valence_rise;
                else if (ek == "valence_arousal_u") target = &c.effects.valence_arousal_u;
                else throw ConfigError(fmt::format("effects: unknown key '{}'", ek));
                *target = number_from(ev, ek.c_str());
            }
        } else {
            throw ConfigError(fmt::format("unknown generator key '{}'", key));
        }
    }
    validate(c);
    return c;
}

json config_to_json(const GeneratorConfig& c) {
    json j;
    j["issues"] = c.issues;
    json pw = json::object();
    for (auto p : kPriorities) pw[std::string(to_string(p))] = c.priority_weights[static_cast<std::size_t>(p)];
    j["priority_weights"] = pw;
    json tw = json::object();
    for (std::size_t i = 0; i < kIssueTypeCount; ++i)
        tw[std::string(to_string(static_cast<IssueType>(i)))] = c.type_weights[i];
    j["type_weights"] = tw;
    j["comment_mean"] = c.comment_mean;
    j["comments"] = {c.comments.min, c.comments.max};
    j["closed_fraction"] = c.closed_fraction;
    j["assignee_fraction"] = c.assignee_fraction;
    j["participants"] = c.participants;
    j["title_words"] = {c.title_words.min, c.title_words.max};
    j["description_words"] = {c.description_words.min, c.description_words.max};
    j["comment_words"] = {c.comment_words.min, c.comment_words.max};
    j["filler_ratio"] = c.filler_ratio;
    j["valence_rate"] = c.valence_rate;
    j["arousal_rate"] = c.arousal_rate;
    j["dominance_rate"] = c.dominance_rate;
    j["stratum_fraction"] = c.stratum_fraction;
    j["log_time_mean"] = c.log_time_mean;
    j["log_time_sd"] = c.log_time_sd;
    j["control_signal"] = c.control_signal;
    j["external_features"] = c.external_features;
    j["effects"] = {{"priority_arousal", c.effects.priority_arousal},
                    {"bug_valence", c.effects.bug_valence},
                    {"slow_dominance", c.effects.slow_dominance},
                    {"slow_valence", c.effects.slow_valence},
                    {"valence_rise", c.effects.valence_rise},
                    {"valence_arousal_u", c.effects.valence_arousal_u}};
    return j;
}

json histogram_to_json(const CorpusHistogram& h) {
    json j;
    j["issues"] = h.issues;
    j["priorities"] = h.priorities;
    j["types"] = h.types;
    j["statuses"] = h.statuses;
    json cc = json::object();
    for (const auto& [k, v] : h.comment_counts) cc[std::to_string(k)] = v;
    j["comment_counts"] = cc;
    j["resolved"] = h.resolved;
    j["with_assignee"] = h.with_assignee;
    j["total_comments"] = h.total_comments;
    return j;
}

CorpusHistogram histogram_from_json(const json& j) {
    CorpusHistogram h;
    h.issues = j.at("issues").get<std::size_t>();
    h.priorities = j.at("priorities").get<std::map<std::string, std::size_t>>();
    h.types = j.at("types").get<std::map<std::string, std::size_t>>();
    h.statuses = j.at("statuses").get<std::map<std::string, std::size_t>>();
    for (const auto& [k, v] : j.at("comment_counts").items())
        h.comment_counts[static_cast<std::size_t>(std::stoull(k))] = v.get<std::size_t>();
    h.resolved = j.at("resolved").get<std::size_t>();
    h.with_assignee = j.at("with_assignee").get<std::size_t>();
    h.total_comments = j.at("total_comments").get<std::size_t>();
    return h;
}

char sign_char(double v, bool negate = false) {
    if (v == 0.0) return '0';
    return (v > 0.0) != negate ? '+' : '-';
}

// --- vocabulary ----------------------------------------------------------------

struct Vocabulary {
    std::vector<std::string> neutral;
    std::array<std::vector<std::string>, 3> extreme;  // per dimension, above baseline
    std::vector<std::string> valence_ladder;          // all eligible Valence words, ascending
    std::vector<std::string> filler;
};

bool all_tokens_unmatched(std::string_view text, const Lexicon& lexicon) {
    bool clean = true;
    for_each_token(text, [&](std::string_view t) { clean = clean && lexicon.find_lower(t) == nullptr; });
    return clean;
}

Vocabulary build_vocabulary(const Lexicon& lexicon, double stratum_fraction) {
    const auto& entries = lexicon.entries();
    const std::size_t n = entries.size();
    std::array<std::vector<double>, 3> dev;
    for (std::size_t d = 0; d < 3; ++d) {
        dev[d].resize(n);
        for (std::size_t i = 0; i < n; ++i)
            dev[d][i] = std::fabs(entries[i].score(kDimensions[d]) - lexicon.baseline(kDimensions[d]));
    }
    auto quantile = [](std::vector<double> v, double q) {
        std::sort(v.begin(), v.end());
        return v[static_cast<std::size_t>(q * static_cast<double>(v.size() - 1))];
    };
    std::array<double, 3> q40{}, q50{};
    for (std::size_t d = 0; d < 3; ++d) {
        q40[d] = quantile(dev[d], 0.4);
        q50[d] = quantile(dev[d], 0.5);
    }

    Vocabulary vocab;
    for (std::size_t i = 0; i < n; ++i)
        if (dev[0][i] <= q40[0] && dev[1][i] <= q40[1] && dev[2][i] <= q40[2])
            vocab.neutral.push_back(entries[i].word);

    for (std::size_t d = 0; d < 3; ++d) {
        std::vector<std::size_t> eligible;
        for (std::size_t i = 0; i < n; ++i) {
            bool calm_elsewhere = true;
            for (std::size_t o = 0; o < 3; ++o)
                if (o != d && dev[o][i] > q50[o]) calm_elsewhere = false;
            if (calm_elsewhere && entries[i].score(kDimensions[d]) > lexicon.baseline(kDimensions[d]))
                eligible.push_back(i);
        }
        std::stable_sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
            return entries[a].score(kDimensions[d]) > entries[b].score(kDimensions[d]);
        });
        // Ladder words lie outside the neutral band, so each step moves the range score.
        if (d == 0)
            for (auto it = eligible.rbegin(); it != eligible.rend(); ++it)
                if (dev[0][*it] > q40[0]) vocab.valence_ladder.push_back(entries[*it].word);
        const auto take = std::min(
            eligible.size(),
            std::max<std::size_t>(3, static_cast<std::size_t>(stratum_fraction * static_cast<double>(eligible.size()))));
        for (std::size_t k = 0; k < take; ++k) vocab.extreme[d].push_back(entries[eligible[k]].word);
    }

    static constexpr std::array<const char*, 40> kFiller{
        "the", "and", "to", "of", "in", "is", "it", "for", "on", "with",
        "npe", "jvm", "api", "xml", "json", "cfg", "impl", "util", "init", "src",
        "http", "sql", "jar", "pom", "mvn", "ctx", "cpu", "gc", "ui", "db",
        "qzx", "vrt", "plx", "kvn", "bzt", "xqr", "wvk", "jzx", "hqv", "fxz"};
    for (const char* f : kFiller)
        if (all_tokens_unmatched(f, lexicon)) vocab.filler.emplace_back(f);

    if (vocab.neutral.size() < 3 || vocab.filler.empty())
        throw ConfigError("lexicon too small to build generator vocabulary");
    for (const auto& stratum : vocab.extreme)
        if (stratum.empty()) throw ConfigError("lexicon too small to build generator vocabulary");
    if (vocab.valence_ladder.empty()) throw ConfigError("lexicon too small to build generator vocabulary");
    return vocab;
}

// --- text -------------------------------------------------------------------------

/// `ladder` in [0, 1] adds the Valence word at that position of the ladder; negative adds none.
std::string make_text(Rng& rng, const Vocabulary& vocab, const CountRange& words,
                      const std::array<double, 3>& rates, double filler_ratio, double ladder) {
    const auto k = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(words.min),
                                                        static_cast<std::int64_t>(words.max)));
    std::vector<std::string_view> tokens;
    for (std::size_t i = 0; i < k; ++i) tokens.push_back(vocab.neutral[rng.below(vocab.neutral.size())]);
    if (ladder >= 0.0 && k > 0) {
        const auto& words_up = vocab.valence_ladder;
        const auto at = static_cast<std::size_t>(std::llround(ladder * static_cast<double>(words_up.size() - 1)));
        tokens[rng.below(k)] = words_up[at];
    }
    for (std::size_t d = 0; d < 3; ++d) {
        if (k == 0) break;
        if (rng.bernoulli(std::clamp(rates[d], 0.0, 1.0))) {
            const auto& stratum = vocab.extreme[d];
            tokens[rng.below(k)] = stratum[rng.below(stratum.size())];
        }
    }
    const auto fillers = static_cast<std::size_t>(std::llround(filler_ratio * static_cast<double>(k)));
    for (std::size_t i = 0; i < fillers; ++i) tokens.push_back(vocab.filler[rng.below(vocab.filler.size())]);
    rng.shuffle(std::span<std::string_view>(tokens));

    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) text += (rng.below(12) == 0) ? ", " : " ";
        text += tokens[i];
    }
    if (!text.empty()) text += '.';
    return text;
}

} // namespace

// --- config ---------------------------------------------------------------------

void validate(const GeneratorConfig& c) {
    require_weights(c.priority_weights, "priority_weights", c.issues > 0);
    require_weights(c.type_weights, "type_weights", c.issues > 0);
    require_range(c.comments, "comments");
    require_range(c.title_words, "title_words");
    require_range(c.description_words, "description_words");
    require_range(c.comment_words, "comment_words");
    if (!(c.comment_mean >= 0.0)) throw ConfigError("comment_mean must be >= 0");
    require_rate(c.closed_fraction, "closed_fraction");
    require_rate(c.assignee_fraction, "assignee_fraction");
    require_rate(c.valence_rate, "valence_rate");
    require_rate(c.arousal_rate, "arousal_rate");
    require_rate(c.dominance_rate, "dominance_rate");
    if (!(c.stratum_fraction > 0.0 && c.stratum_fraction <= 1.0))
        throw ConfigError("stratum_fraction must be in (0, 1]");
    if (!(c.filler_ratio >= 0.0)) throw ConfigError("filler_ratio must be >= 0");
    if (!(c.log_time_sd >= 0.0)) throw ConfigError("log_time_sd must be >= 0");
    if (c.participants < 3) throw ConfigError("participants must be >= 3");
    std::set<std::string> names(c.external_features.begin(), c.external_features.end());
    if (names.size() != c.external_features.size()) throw ConfigError("duplicate external feature");
}

GeneratorConfig parse_generator_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("generator spec is not valid JSON ({})", e.what()));
    }
    return config_from_json(root);
}

GeneratorConfig load_generator_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open generator spec '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_generator_config(buffer.str());
}

std::string to_json(const GeneratorConfig& config) { return config_to_json(config).dump(2); }

CorpusHistogram histogram(std::span<const IssueReport> issues) {
    CorpusHistogram h;
    h.issues = issues.size();
    for (const auto& issue : issues) {
        ++h.priorities[std::string(to_string(issue.priority))];
        ++h.types[std::string(to_string(issue.issue_type))];
        ++h.statuses[std::string(to_string(issue.status))];
        ++h.comment_counts[issue.comments.size()];
        h.resolved += issue.resolved.has_value();
        h.with_assignee += issue.assignee.has_value();
        h.total_comments += issue.comments.size();
    }
    return h;
}

std::string to_json(const Manifest& m) {
    json j;
    j["seed"] = m.seed;
    j["config"] = config_to_json(m.config);
    j["histogram"] = histogram_to_json(m.histogram);
    json planted = json::array();
    for (const auto& p : m.planted)
        planted.push_back({{"effect", p.effect},
                           {"dimension", std::string(1, p.dimension)},
                           {"direction", std::string(1, p.direction)},
                           {"strength", p.strength},
                           {"meaning", p.meaning}});
    j["planted"] = planted;
    return j.dump(2);
}

Manifest parse_manifest(std::string_view json_text) {
    try {
        const auto j = json::parse(json_text);
        Manifest m;
        m.seed = j.at("seed").get<std::uint64_t>();
        m.config = config_from_json(j.at("config"));
        m.histogram = histogram_from_json(j.at("histogram"));
        for (const auto& p : j.at("planted")) {
            PlantedDirection d;
            d.effect = p.at("effect").get<std::string>();
            d.dimension = p.at("dimension").get<std::string>().at(0);
            d.direction = p.at("direction").get<std::string>().at(0);
            d.strength = p.at("strength").get<double>();
            d.meaning = p.at("meaning").get<std::string>();
            m.planted.push_back(std::move(d));
        }
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("invalid manifest ({})", e.what()));
    }
}

// --- generation -------------------------------------------------------------------

GeneratedCorpus generate_corpus(const GeneratorConfig& config, const Lexicon& lexicon,
                                std::uint64_t seed) {
    validate(config);
    GeneratedCorpus out;
    out.manifest.seed = seed;
    out.manifest.config = config;
    const auto& fx = config.effects;
    out.manifest.planted = {
        {"priority_arousal", 'A', sign_char(fx.priority_arousal), fx.priority_arousal,
         "higher priority issues carry higher Arousal"},
        {"bug_valence", 'V', sign_char(fx.bug_valence, true), fx.bug_valence,
         "Bug issues carry lower Valence than other groups"},
        {"slow_dominance", 'D', sign_char(fx.slow_dominance), fx.slow_dominance,
         "slow (high resolution time) issues carry higher Dominance"},
        {"slow_valence", 'V', sign_char(fx.slow_valence, true), fx.slow_valence,
         "slow issues carry lower Valence, so Valence shortens resolution"},
        {"valence_rise", 'V', sign_char(fx.valence_rise), fx.valence_rise,
         "Valence rises from an issue's first to its last comment"},
        {"valence_arousal_u", 'A', sign_char(fx.valence_arousal_u), fx.valence_arousal_u,
         "Arousal is U-shaped in Valence"},
    };
    if (config.issues == 0) {
        out.manifest.histogram = histogram(out.issues);
        return out;
    }

    const Vocabulary vocab = build_vocabulary(lexicon, config.stratum_fraction);
    Rng rng(seed);

    std::vector<std::string> people(config.participants);
    std::vector<double> people_weights(config.participants);
    for (std::size_t i = 0; i < people.size(); ++i) {
        people[i] = fmt::format("user{:04d}", i + 1);
        people_weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), 0.8);
    }
    static constexpr std::array<const char*, 6> kProjects{"ALPHA", "BRAVO", "CEDAR", "DELTA", "EMBER", "FJORD"};
    constexpr Timestamp kEpoch = 1262304000;  // 2010-01-01
    constexpr Timestamp kWindow = 5LL * 365 * 24 * 3600;

    out.issues.reserve(config.issues);
    for (std::size_t n = 0; n < config.issues; ++n) {
        IssueReport issue;
        issue.id = fmt::format("SYN-{}", n + 1);
        issue.project = kProjects[rng.below(kProjects.size())];
        issue.priority = static_cast<Priority>(rng.weighted(config.priority_weights));
        issue.issue_type = static_cast<IssueType>(rng.weighted(config.type_weights));
        issue.created = kEpoch + static_cast<Timestamp>(rng.below(static_cast<std::uint64_t>(kWindow)));
        issue.reporter = people[rng.weighted(people_weights)];
        if (rng.bernoulli(config.assignee_fraction)) issue.assignee = people[rng.weighted(people_weights)];

        const double z = rng.normal();
        const bool slow = z >= 0.0;
        const double duration = std::max(60.0, std::exp(config.log_time_mean + config.log_time_sd * z));
        if (rng.bernoulli(config.closed_fraction)) {
            issue.status = Status::Closed;
            issue.resolved = issue.created + static_cast<Timestamp>(std::llround(duration));
        }
        const double cs = config.control_signal;
        issue.votes = rng.poisson(0.6);
        issue.watchers = rng.poisson(std::exp(1.0 + 0.5 * cs * z));
        issue.change_count = rng.poisson(std::exp(1.6 + 0.5 * cs * z));
        issue.developer_count = 1 + rng.poisson(std::exp(0.4 * cs * z));

        // Per-issue extreme-word rates.
        const double tone = rng.uniform();
        const double priority_steps = 2.0 - static_cast<double>(static_cast<int>(issue.priority));
        const bool is_bug = issue.issue_type == IssueType::Bug;
        std::array<double, 3> rates{
            config.valence_rate - (is_bug ? fx.bug_valence : 0.0) +
                (slow ? -0.5 : 0.5) * fx.slow_valence,
            config.arousal_rate + fx.priority_arousal * priority_steps +
                fx.valence_arousal_u * (4.0 * (tone - 0.5) * (tone - 0.5) - 1.0 / 3.0),
            config.dominance_rate + (slow ? 0.5 : -0.5) * fx.slow_dominance,
        };

        // With the U effect on, every text's Valence follows the tone.
        const double ladder = fx.valence_arousal_u != 0.0 ? tone : -1.0;
        issue.title = make_text(rng, vocab, config.title_words, rates, config.filler_ratio, ladder);
        issue.description = make_text(rng, vocab, config.description_words, rates, config.filler_ratio, ladder);

        auto count = static_cast<std::size_t>(rng.poisson(config.comment_mean));
        count = std::clamp(count, config.comments.min, config.comments.max);
        const double span_seconds = duration;
        std::vector<Timestamp> stamps(count);
        for (auto& s : stamps)
            s = issue.created + static_cast<Timestamp>(std::llround(rng.uniform() * span_seconds));
        std::sort(stamps.begin(), stamps.end());
        for (std::size_t c = 0; c < count; ++c) {
            Comment comment;
            comment.created = stamps[c];
            const double u = rng.uniform();
            if (issue.assignee && u < 0.35) comment.author = *issue.assignee;
            else if (u < 0.60) comment.author = issue.reporter;
            else comment.author = people[rng.below(people.size())];
            const double position = count > 1 ? static_cast<double>(c) / static_cast<double>(count - 1) : 0.5;
            auto comment_rates = rates;
            comment_rates[0] += fx.valence_rise * (position - 0.5);
            comment.body = make_text(rng, vocab, config.comment_words, comment_rates, config.filler_ratio, ladder);
            issue.comments.push_back(std::move(comment));
        }
        for (const auto& name : config.external_features) issue.external_features[name] = rng.normal();
        out.issues.push_back(std::move(issue));
    }
    out.manifest.histogram = histogram(out.issues);
    return out;
}

} // namespace vadminer
