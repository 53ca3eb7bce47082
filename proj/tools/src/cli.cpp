#include "vadminer/cli.hpp"

#include "vadminer/analyses.hpp"
#include "vadminer/corpus.hpp"
#include "vadminer/errors.hpp"
#include "vadminer/lexicon.hpp"
#include "vadminer/report.hpp"
#include "vadminer/standin_lexicon.hpp"
#include "vadminer/synth.hpp"
#include "vadminer/textscore.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

namespace vadminer::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kLexiconEnv = "VADMINER_LEXICON";
constexpr std::size_t kSchemaErrorsShown = 10;

class MissingFile : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class CorpusRejected : public Error {
public:
    CorpusRejected(std::vector<LineError> errors, std::size_t lines)
        : Error("corpus failed validation"), errors(std::move(errors)), lines(lines) {}
    std::vector<LineError> errors;
    std::size_t lines;
};

void require_file(const std::string& path, const char* what) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) throw MissingFile(fmt::format("{} file not found: {}", what, path));
}

std::string resolve_lexicon_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kLexiconEnv); env && *env) return env;
    throw UsageError(fmt::format("no lexicon given; pass --lexicon or set {}", kLexiconEnv));
}

Lexicon open_lexicon(const std::string& path) {
    require_file(path, "lexicon");
    return load_lexicon_file(path);
}

std::vector<IssueReport> open_corpus(const std::string& path, CorpusLoad* stats = nullptr) {
    require_file(path, "corpus");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile(fmt::format("cannot open corpus: {}", path));
    auto load = read_corpus(in);
    if (!load.errors.empty()) throw CorpusRejected(std::move(load.errors), load.lines);
    if (stats) stats->lines = load.lines;
    return std::move(load.issues);
}

/// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
    require_file(path, "config");
    std::ifstream in(path);
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t number = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected key=value", number));
        values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return values;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

template <typename T>
T convert(const std::string& key, const std::string& value) {
    T result{};
    if (!CLI::detail::lexical_conversion<T, T>({value}, result))
        throw ConfigError(fmt::format("config key {}: invalid value '{}'", key, value));
    return result;
}

// --- score ------------------------------------------------------------------------

struct ScoreArgs {
    std::string lexicon;
    std::string dimension;
    std::string text;
    bool use_stdin = false;
};

int cmd_score(const ScoreArgs& args, std::istream& in, std::ostream& out) {
    const auto lexicon = open_lexicon(resolve_lexicon_path(args.lexicon));
    std::string text = args.text;
    if (args.use_stdin) text.assign(std::istreambuf_iterator<char>(in), {});
    const auto score = score_text(text, lexicon);
    auto cell = [](const std::optional<double>& v) { return v ? fmt::format("{:.10g}", *v) : std::string(); };
    if (!args.dimension.empty()) {
        const auto dim = parse_dimension(args.dimension);
        if (!dim) throw UsageError(fmt::format("unknown dimension '{}'", args.dimension));
        fmt::print(out, "{},{}\n", cell(score.get(*dim)), score.matched_count);
    } else {
        fmt::print(out, "{},{},{},{}\n", cell(score.valence), cell(score.arousal), cell(score.dominance),
                   score.matched_count);
    }
    return kOk;
}

// --- synth ------------------------------------------------------------------------

struct SynthArgs {
    std::string spec;
    std::string lexicon;
    std::string out;
    std::string write_lexicon;
    std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
    GeneratorConfig config;
    if (!args.spec.empty()) {
        require_file(args.spec, "generator spec");
        config = load_generator_config(args.spec);
    }
    std::string lexicon_path = args.lexicon;
    if (lexicon_path.empty())
        if (const char* env = std::getenv(kLexiconEnv); env && *env) lexicon_path = env;
    std::optional<Lexicon> lexicon;
    if (lexicon_path.empty()) {
        fmt::print(err, "note: no lexicon given; using the built-in stand-in lexicon\n");
        lexicon.emplace(standin_entries());
    } else {
        lexicon.emplace(open_lexicon(lexicon_path));
    }

    const auto generated = generate_corpus(config, *lexicon, args.seed);
    {
        std::ofstream file(args.out, std::ios::binary);
        if (!file) throw Error(fmt::format("cannot write '{}'", args.out));
        write_corpus(file, generated.issues);
    }
    const auto manifest_path = args.out + ".manifest.json";
    {
        std::ofstream file(manifest_path, std::ios::binary);
        if (!file) throw Error(fmt::format("cannot write '{}'", manifest_path));
        file << to_json(generated.manifest) << '\n';
    }
    if (!args.write_lexicon.empty()) {
        std::ofstream file(args.write_lexicon, std::ios::binary);
        if (!file) throw Error(fmt::format("cannot write '{}'", args.write_lexicon));
        write_lexicon(file, *lexicon);
    }
    fmt::print(out, "wrote {} issues to {} (manifest {})\n", generated.issues.size(), args.out, manifest_path);
    return kOk;
}

// --- ingest -----------------------------------------------------------------------

int cmd_ingest(const std::string& corpus_path, std::ostream& out) {
    const auto issues = open_corpus(corpus_path);
    const auto h = histogram(issues);
    fmt::print(out, "{} issues valid; {} resolved, {} with assignee, {} comments\n", h.issues, h.resolved,
               h.with_assignee, h.total_comments);
    for (const auto& [name, count] : h.priorities) fmt::print(out, "  priority {}: {}\n", name, count);
    for (const auto& [name, count] : h.types) fmt::print(out, "  type {}: {}\n", name, count);
    return kOk;
}

// --- analyze ----------------------------------------------------------------------

struct AnalyzeArgs {
    std::string config;
    std::string lexicon;
    std::string corpus;
    std::string out;
    std::uint64_t seed = 0;
    double alpha = 0.05;
    std::vector<std::string> analyses;
    unsigned jobs = 0;
};

void apply_config(AnalyzeArgs& args, const CLI::App& sub) {
    if (args.config.empty()) return;
    for (const auto& [key, value] : read_config(args.config)) {
        const auto* option = sub.get_option_no_throw("--" + key);
        if (!option || key == "config") throw ConfigError(fmt::format("unknown config key '{}'", key));
        if (option->count() > 0) continue;  // flags win
        if (key == "lexicon") args.lexicon = value;
        else if (key == "corpus") args.corpus = value;
        else if (key == "out") args.out = value;
        else if (key == "seed") args.seed = convert<std::uint64_t>(key, value);
        else if (key == "alpha") args.alpha = convert<double>(key, value);
        else if (key == "analyses") args.analyses = split_list(value);
        else if (key == "jobs") args.jobs = convert<unsigned>(key, value);
    }
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
    if (args.corpus.empty()) throw UsageError("--corpus is required");
    if (args.out.empty()) throw UsageError("--out is required");
    if (!(args.alpha > 0.0 && args.alpha <= 1.0)) throw ConfigError("alpha must be in (0, 1]");

    std::vector<Analysis> selected;
    if (args.analyses.empty()) {
        selected = {Analysis::Rq1, Analysis::Summary, Analysis::Rq2, Analysis::Rq3, Analysis::Rq4};
    } else {
        for (const auto& name : args.analyses) {
            const auto a = parse_analysis(name);
            if (!a) throw UsageError(fmt::format("unknown analysis '{}'", name));
            selected.push_back(*a);
        }
    }

    const auto lexicon_path = resolve_lexicon_path(args.lexicon);
    require_file(lexicon_path, "lexicon");
    require_file(args.corpus, "corpus");
    const auto lexicon = open_lexicon(lexicon_path);
    const auto issues = open_corpus(args.corpus);

    AnalysisOptions options;
    options.alpha = args.alpha;
    options.seed = args.seed;
    options.jobs = args.jobs;
    const ScoredCorpus corpus(issues, lexicon, args.jobs);
    const auto results = run_analyses(corpus, selected, options);
    const auto files = write_report(results, args.out);

    fmt::print(out, "issues: {}, scored: {}, skipped (no lexicon match): {}\n", results.issues,
               results.scored_issues, results.issues - results.scored_issues);
    if (results.dominance_time)
        fmt::print(out, "resolution-time split: {} resolved, {} unresolved skipped\n", results.dominance_time->included,
                   results.dominance_time->skipped);
    if (results.first_last)
        fmt::print(out, "first/last: {} issues qualify for All, {} excluded\n", results.first_last->included[0],
                   results.first_last->excluded[0]);
    if (const auto& r = results.resolution_model) {
        fmt::print(out, "resolution model: {} rows, {} unresolved and {} incomplete skipped{}\n", r->rows,
                   r->skipped_unresolved, r->skipped_incomplete, r->empty() ? " (empty)" : "");
    }
    fmt::print(out, "wrote {} files to {}\n", files.size(), args.out);
    return kOk;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const UsageError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kUsage;
    } catch (const MissingFile& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kMissingFile;
    } catch (const CorpusRejected& e) {
        fmt::print(err, "error: {} of {} corpus lines rejected\n", e.errors.size(), e.lines);
        for (std::size_t i = 0; i < std::min(kSchemaErrorsShown, e.errors.size()); ++i)
            fmt::print(err, "  line {}: {}\n", e.errors[i].line, e.errors[i].message);
        if (e.errors.size() > kSchemaErrorsShown)
            fmt::print(err, "  ... {} more\n", e.errors.size() - kSchemaErrorsShown);
        return kSchemaError;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kInvalidInput;
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"VAD scoring and issue-tracker affect analyses", "vadminer"};
    app.require_subcommand(1);

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "Score one text and print valence,arousal,dominance,matched_count");
    score->add_option("--lexicon", score_args.lexicon, "Lexicon CSV (default: $VADMINER_LEXICON)");
    score->add_option("--dimension", score_args.dimension, "Print only one dimension (v, a or d)");
    auto* text_opt = score->add_option("--text", score_args.text, "Text to score");
    auto* stdin_opt = score->add_flag("--stdin", score_args.use_stdin, "Read the text from standard input");
    text_opt->excludes(stdin_opt);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic issue corpus and its manifest");
    synth->add_option("--spec", synth_args.spec, "Generator spec (JSON); defaults apply to absent keys");
    synth->add_option("--lexicon", synth_args.lexicon, "Lexicon CSV (default: $VADMINER_LEXICON, else built-in)");
    synth->add_option("--seed", synth_args.seed, "Random seed");
    synth->add_option("--out", synth_args.out, "Output JSONL path")->required();
    synth->add_option("--write-lexicon", synth_args.write_lexicon, "Also write the lexicon used to this path");

    std::string ingest_corpus;
    auto* ingest = app.add_subcommand("ingest", "Validate an issue corpus");
    ingest->add_option("--corpus", ingest_corpus, "Issue JSONL")->required();

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Run the analyses and write report tables");
    analyze->add_option("--config", analyze_args.config, "key=value file; flags override it");
    analyze->add_option("--lexicon", analyze_args.lexicon, "Lexicon CSV (default: $VADMINER_LEXICON)");
    analyze->add_option("--corpus", analyze_args.corpus, "Issue JSONL");
    analyze->add_option("--out", analyze_args.out, "Report directory");
    analyze->add_option("--seed", analyze_args.seed, "Cross-validation seed (default 0)");
    analyze->add_option("--alpha", analyze_args.alpha, "Family-wise alpha (default 0.05)");
    analyze->add_option("--analyses", analyze_args.analyses, "Subset of rq1,rq2,rq3,rq4,summary")->delimiter(',');
    analyze->add_option("--jobs", analyze_args.jobs, "Worker threads (default: all cores)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    if (score->parsed()) {
        if (score_args.text.empty() && !score_args.use_stdin && text_opt->count() == 0) {
            fmt::print(err, "error: pass --text or --stdin\n");
            return kUsage;
        }
        return guarded(err, [&] { return cmd_score(score_args, in, out); });
    }
    if (synth->parsed()) return guarded(err, [&] { return cmd_synth(synth_args, out, err); });
    if (ingest->parsed()) return guarded(err, [&] { return cmd_ingest(ingest_corpus, out); });
    return guarded(err, [&] {
        apply_config(analyze_args, *analyze);
        return cmd_analyze(analyze_args, out);
    });
}

} // namespace vadminer::cli
