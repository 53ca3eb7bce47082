#pragma once

#include "vadminer/corpus.hpp"
#include "vadminer/lexicon.hpp"
#include "vadminer/standin_lexicon.hpp"
#include "vadminer/synth.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace fixtures {

inline const char* kEmotionCsv =
    "word,valence,arousal,dominance\n"
    "anger,2.50,5.93,5.14\n"
    "joy,8.21,5.55,7.00\n"
    "sadness,2.40,2.81,3.84\n"
    "love,8.00,5.36,5.92\n";

inline vadminer::Lexicon emotion_lexicon() {
    std::istringstream in(kEmotionCsv);
    return vadminer::load_lexicon(in);
}

/// The Warriner-format stand-in as file text.
inline const std::string& standin_csv() {
    static const std::string text = [] {
        std::ostringstream out;
        vadminer::write_warriner_csv(out, vadminer::standin_entries());
        return out.str();
    }();
    return text;
}

/// Loaded through the CSV reader, as a user would.
inline const vadminer::Lexicon& standin_lexicon() {
    static const vadminer::Lexicon lexicon = [] {
        std::istringstream in(standin_csv());
        return vadminer::load_lexicon(in);
    }();
    return lexicon;
}

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("vadminer-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline vadminer::IssueReport make_issue(std::string id, vadminer::Priority priority = vadminer::Priority::Major,
                                        vadminer::IssueType type = vadminer::IssueType::Bug) {
    vadminer::IssueReport issue;
    issue.id = std::move(id);
    issue.project = "TEST";
    issue.priority = priority;
    issue.issue_type = type;
    issue.created = 1000;
    issue.reporter = "rita";
    issue.assignee = "alex";
    return issue;
}

inline void close_issue(vadminer::IssueReport& issue, vadminer::Timestamp after) {
    issue.status = vadminer::Status::Closed;
    issue.resolved = issue.created + after;
}

inline void add_comment(vadminer::IssueReport& issue, std::string author, std::string body) {
    const vadminer::Timestamp t = issue.comments.empty() ? issue.created + 1 : issue.comments.back().created + 1;
    issue.comments.push_back({std::move(author), t, std::move(body)});
}

/// Planted directions: priority -> Arousal +, Bug -> Valence -, slow -> Dominance +,
/// slow -> Valence -, last comment -> Valence +.
inline vadminer::GeneratorConfig planted_config(std::size_t issues) {
    vadminer::GeneratorConfig config;
    config.issues = issues;
    config.effects.priority_arousal = 0.14;
    config.effects.bug_valence = 0.2;
    config.effects.slow_dominance = 0.25;
    config.effects.slow_valence = 0.2;
    config.effects.valence_rise = 0.3;
    return config;
}

inline vadminer::GeneratorConfig null_config(std::size_t issues) {
    vadminer::GeneratorConfig config;
    config.issues = issues;
    return config;
}

} // namespace fixtures
