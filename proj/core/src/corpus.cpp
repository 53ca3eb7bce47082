#include "vadminer/corpus.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace vadminer {

namespace {

using nlohmann::json;

std::string normalize_key(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == ' ' || c == '-' || c == '_') continue;
        out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    }
    return out;
}

/// Thrown inside line parsing; turned into a LineError.
struct FieldError {
    std::string message;
};

const json& require(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw FieldError{fmt::format("missing field {}", key)};
    return *it;
}

std::string as_string(const json& value, const char* key) {
    if (!value.is_string()) throw FieldError{fmt::format("field {} must be a string", key)};
    return value.get<std::string>();
}

std::int64_t as_int(const json& value, const char* key) {
    if (value.is_number_integer()) return value.get<std::int64_t>();
    if (value.is_number_float()) {
        const double d = value.get<double>();
        if (std::isfinite(d) && std::floor(d) == d && std::fabs(d) < 9.0e15)
            return static_cast<std::int64_t>(d);
    }
    throw FieldError{fmt::format("field {} must be an integer", key)};
}

std::int64_t as_count(const json& value, const char* key) {
    const auto v = as_int(value, key);
    if (v < 0) throw FieldError{fmt::format("field {} must be >= 0", key)};
    return v;
}

IssueReport parse_issue(const json& obj) {
    if (!obj.is_object()) throw FieldError{"line is not a JSON object"};
    IssueReport issue;
    issue.id = as_string(require(obj, "id"), "id");
    issue.project = as_string(require(obj, "project"), "project");

    const auto type_text = as_string(require(obj, "type"), "type");
    const auto type = parse_issue_type(type_text);
    if (!type) throw FieldError{fmt::format("unknown type '{}'", type_text)};
    issue.issue_type = *type;

    const auto priority_text = as_string(require(obj, "priority"), "priority");
    const auto priority = parse_priority(priority_text);
    if (!priority) throw FieldError{fmt::format("unknown priority '{}'", priority_text)};
    issue.priority = *priority;

    issue.created = as_int(require(obj, "created"), "created");
    if (const auto it = obj.find("resolved"); it != obj.end() && !it->is_null())
        issue.resolved = as_int(*it, "resolved");

    const auto status_text = as_string(require(obj, "status"), "status");
    const auto status = parse_status(status_text);
    if (!status) throw FieldError{fmt::format("unknown status '{}'", status_text)};
    issue.status = *status;

    issue.reporter = as_string(require(obj, "reporter"), "reporter");
    if (const auto it = obj.find("assignee"); it != obj.end() && !it->is_null()) {
        auto assignee = as_string(*it, "assignee");
        if (!assignee.empty()) issue.assignee = std::move(assignee);
    }
    issue.votes = as_count(require(obj, "votes"), "votes");
    issue.watchers = as_count(require(obj, "watchers"), "watchers");
    issue.change_count = as_count(require(obj, "changes"), "changes");
    issue.developer_count = as_count(require(obj, "developers"), "developers");
    issue.title = as_string(require(obj, "title"), "title");
    issue.description = as_string(require(obj, "description"), "description");

    const auto& comments = require(obj, "comments");
    if (!comments.is_array()) throw FieldError{"field comments must be an array"};
    for (const auto& c : comments) {
        if (!c.is_object()) throw FieldError{"comment must be an object"};
        Comment comment;
        comment.author = as_string(require(c, "author"), "comments.author");
        comment.created = as_int(require(c, "created"), "comments.created");
        comment.body = as_string(require(c, "body"), "comments.body");
        issue.comments.push_back(std::move(comment));
    }
    std::stable_sort(issue.comments.begin(), issue.comments.end(),
                     [](const Comment& a, const Comment& b) { return a.created < b.created; });

    if (const auto it = obj.find("external_features"); it != obj.end() && !it->is_null()) {
        if (!it->is_object()) throw FieldError{"field external_features must be an object"};
        for (const auto& [name, value] : it->items()) {
            if (!value.is_number())
                throw FieldError{fmt::format("external feature {} must be a number", name)};
            issue.external_features.emplace(name, value.get<double>());
        }
    }
    try {
        validate(issue);
    } catch (const ValidationError& e) {
        throw FieldError{e.what()};
    }
    return issue;
}

std::string describe(const LineError& e) { return fmt::format("{}, line {}", e.message, e.line); }

} // namespace

std::string_view to_string(IssueType type) {
    switch (type) {
    case IssueType::Bug: return "Bug";
    case IssueType::Task: return "Task";
    case IssueType::SubTask: return "SubTask";
    case IssueType::Test: return "Test";
    case IssueType::Wish: return "Wish";
    case IssueType::NewFeature: return "NewFeature";
    case IssueType::Improvement: return "Improvement";
    case IssueType::FeatureRequest: return "FeatureRequest";
    case IssueType::Enhancement: return "Enhancement";
    case IssueType::Other: return "Other";
    }
    return "Other";
}

std::string_view to_string(Priority priority) {
    switch (priority) {
    case Priority::Blocker: return "Blocker";
    case Priority::Critical: return "Critical";
    case Priority::Major: return "Major";
    case Priority::Minor: return "Minor";
    case Priority::Trivial: return "Trivial";
    }
    return "Major";
}

std::string_view to_string(Status status) { return status == Status::Closed ? "Closed" : "Open"; }

std::string_view to_string(Role role) {
    switch (role) {
    case Role::Assignee: return "Assignee";
    case Role::Reporter: return "Reporter";
    case Role::Other: return "Other";
    }
    return "Other";
}

std::string_view to_string(TypeGroup group) {
    switch (group) {
    case TypeGroup::FutureDev: return "Future Dev";
    case TypeGroup::AllTasks: return "All Tasks";
    case TypeGroup::Bug: return "Bug";
    }
    return "Bug";
}

std::string_view to_string(Element element) {
    switch (element) {
    case Element::Title: return "Title";
    case Element::Description: return "Desc";
    case Element::AllComments: return "All";
    case Element::FirstComment: return "First";
    case Element::LastComment: return "Last";
    }
    return "Title";
}

std::optional<IssueType> parse_issue_type(std::string_view text) {
    const auto key = normalize_key(text);
    for (std::size_t i = 0; i < kIssueTypeCount; ++i) {
        const auto type = static_cast<IssueType>(i);
        if (normalize_key(to_string(type)) == key) return type;
    }
    return std::nullopt;
}

std::optional<Priority> parse_priority(std::string_view text) {
    const auto key = normalize_key(text);
    for (auto p : kPriorities)
        if (normalize_key(to_string(p)) == key) return p;
    return std::nullopt;
}

std::optional<Status> parse_status(std::string_view text) {
    const auto key = normalize_key(text);
    if (key == "open") return Status::Open;
    if (key == "closed") return Status::Closed;
    return std::nullopt;
}

std::optional<TypeGroup> type_group(IssueType type) {
    switch (type) {
    case IssueType::Bug: return TypeGroup::Bug;
    case IssueType::Task:
    case IssueType::SubTask:
    case IssueType::Test: return TypeGroup::AllTasks;
    case IssueType::Wish:
    case IssueType::NewFeature:
    case IssueType::Improvement:
    case IssueType::FeatureRequest:
    case IssueType::Enhancement: return TypeGroup::FutureDev;
    case IssueType::Other: return std::nullopt;
    }
    return std::nullopt;
}

int priority_rank(Priority priority) { return 5 - static_cast<int>(priority); }

std::optional<double> IssueReport::resolution_seconds() const {
    if (!resolved) return std::nullopt;
    return static_cast<double>(*resolved - created);
}

void validate(const IssueReport& issue) {
    if (issue.id.empty()) throw ValidationError("empty id");
    if (issue.reporter.empty()) throw ValidationError("empty reporter");
    if (issue.resolved) {
        if (*issue.resolved < issue.created) throw ValidationError("resolved before created");
        if (issue.status != Status::Closed) throw ValidationError("resolved issue must be Closed");
    }
    if (issue.votes < 0 || issue.watchers < 0 || issue.change_count < 0 ||
        issue.developer_count < 0)
        throw ValidationError("negative count");
    for (std::size_t i = 0; i < issue.comments.size(); ++i) {
        if (issue.comments[i].author.empty()) throw ValidationError("comment with empty author");
        if (i > 0 && issue.comments[i].created < issue.comments[i - 1].created)
            throw ValidationError("comments not sorted by created");
    }
}

SchemaError::SchemaError(std::vector<LineError> errors)
    : Error([&] {
          if (errors.empty()) return std::string("schema error");
          auto msg = describe(errors.front());
          if (errors.size() > 1) msg += fmt::format(" (and {} more)", errors.size() - 1);
          return msg;
      }()),
      errors_(std::move(errors)) {}

CorpusLoad read_corpus(std::istream& in) {
    CorpusLoad result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(),
                        [](char c) { return c == ' ' || c == '\t' || c == '\r'; }))
            continue;
        ++result.lines;
        try {
            result.issues.push_back(parse_issue(json::parse(line)));
        } catch (const FieldError& e) {
            result.errors.push_back({line_no, e.message});
        } catch (const json::exception& e) {
            result.errors.push_back({line_no, fmt::format("invalid JSON ({})", e.what())});
        }
    }
    return result;
}

std::vector<IssueReport> load_corpus(std::istream& in) {
    auto result = read_corpus(in);
    if (!result.errors.empty()) throw SchemaError(std::move(result.errors));
    return std::move(result.issues);
}

std::vector<IssueReport> load_corpus_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open corpus '{}'", path.string()));
    return load_corpus(in);
}

std::string to_json_line(const IssueReport& issue) {
    nlohmann::ordered_json obj;
    obj["id"] = issue.id;
    obj["project"] = issue.project;
    obj["type"] = to_string(issue.issue_type);
    obj["priority"] = to_string(issue.priority);
    obj["created"] = issue.created;
    obj["resolved"] = issue.resolved ? nlohmann::ordered_json(*issue.resolved) : nullptr;
    obj["status"] = to_string(issue.status);
    obj["reporter"] = issue.reporter;
    obj["assignee"] = issue.assignee ? nlohmann::ordered_json(*issue.assignee) : nullptr;
    obj["votes"] = issue.votes;
    obj["watchers"] = issue.watchers;
    obj["changes"] = issue.change_count;
    obj["developers"] = issue.developer_count;
    obj["title"] = issue.title;
    obj["description"] = issue.description;
    auto comments = nlohmann::ordered_json::array();
    for (const auto& c : issue.comments)
        comments.push_back({{"author", c.author}, {"created", c.created}, {"body", c.body}});
    obj["comments"] = std::move(comments);
    auto features = nlohmann::ordered_json::object();
    for (const auto& [name, value] : issue.external_features) features[name] = value;
    obj["external_features"] = std::move(features);
    return obj.dump();
}

void write_corpus(std::ostream& out, std::span<const IssueReport> issues) {
    for (const auto& issue : issues) out << to_json_line(issue) << '\n';
}

const std::optional<VadScore>& element_score(const ElementScores& scores, Element element) {
    switch (element) {
    case Element::Title: return scores.title;
    case Element::Description: return scores.description;
    case Element::AllComments: return scores.all_comments;
    case Element::FirstComment: return scores.first_comment;
    case Element::LastComment: return scores.last_comment;
    }
    return scores.title;
}

namespace {

std::optional<VadScore> present(const VadScore& score) {
    if (score.matched_count == 0) return std::nullopt;
    return score;
}

} // namespace

ElementScores score_elements(const IssueReport& issue, const Lexicon& lexicon,
                             std::vector<VadScore>& per_comment) {
    ElementScores out;
    out.title = present(score_text(issue.title, lexicon));
    out.description = present(score_text(issue.description, lexicon));

    per_comment.clear();
    per_comment.reserve(issue.comments.size());
    RangeAccumulator all;
    for (const auto& comment : issue.comments) {
        RangeAccumulator one;
        accumulate_text(comment.body, lexicon, one);
        per_comment.push_back(one.finish(lexicon));
        all.merge(one);
    }
    if (!per_comment.empty()) {
        out.first_comment = present(per_comment.front());
        out.last_comment = present(per_comment.back());
        out.all_comments = present(all.finish(lexicon));
    }
    return out;
}

ElementScores score_elements(const IssueReport& issue, const Lexicon& lexicon) {
    std::vector<VadScore> per_comment;
    return score_elements(issue, lexicon, per_comment);
}

Role role_of(const Comment& comment, const IssueReport& issue) {
    if (issue.assignee && comment.author == *issue.assignee) return Role::Assignee;
    if (comment.author == issue.reporter) return Role::Reporter;
    return Role::Other;
}

std::vector<ParticipantHistory> participant_history(std::span<const IssueReport> issues) {
    std::vector<ParticipantHistory> history(issues.size());
    std::vector<std::size_t> order(issues.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return issues[a].created < issues[b].created;
    });

    struct Posted {
        Timestamp created;
        const std::string* author;
    };
    std::vector<Posted> posts;
    for (const auto& issue : issues)
        for (const auto& c : issue.comments) posts.push_back({c.created, &c.author});
    std::stable_sort(posts.begin(), posts.end(),
                     [](const Posted& a, const Posted& b) { return a.created < b.created; });

    std::unordered_map<std::string, std::int64_t> assigned, reported, commented;
    std::size_t next_post = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        // Issues sharing a timestamp do not count each other.
        std::size_t j = i;
        const Timestamp t = issues[order[i]].created;
        while (j < order.size() && issues[order[j]].created == t) ++j;
        while (next_post < posts.size() && posts[next_post].created < t)
            ++commented[*posts[next_post++].author];
        for (std::size_t k = i; k < j; ++k) {
            const auto& issue = issues[order[k]];
            auto& h = history[order[k]];
            if (issue.assignee) {
                if (auto it = assigned.find(*issue.assignee); it != assigned.end())
                    h.assignee_prev_issues = it->second;
                if (auto it = commented.find(*issue.assignee); it != commented.end())
                    h.assignee_prev_comments = it->second;
            }
            if (auto it = reported.find(issue.reporter); it != reported.end())
                h.reporter_prev_issues = it->second;
            if (auto it = commented.find(issue.reporter); it != commented.end())
                h.reporter_prev_comments = it->second;
        }
        for (std::size_t k = i; k < j; ++k) {
            const auto& issue = issues[order[k]];
            if (issue.assignee) ++assigned[*issue.assignee];
            ++reported[issue.reporter];
        }
        i = j;
    }
    return history;
}

} // namespace vadminer
