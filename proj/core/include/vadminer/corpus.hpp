#pragma once

#include "vadminer/errors.hpp"
#include "vadminer/lexicon.hpp"
#include "vadminer/textscore.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vadminer {

/// UTC seconds since the epoch.
using Timestamp = std::int64_t;

enum class IssueType {
    Bug,
    Task,
    SubTask,
    Test,
    Wish,
    NewFeature,
    Improvement,
    FeatureRequest,
    Enhancement,
    Other,
};
inline constexpr std::size_t kIssueTypeCount = 10;

/// Ordered from most to least urgent.
enum class Priority { Blocker, Critical, Major, Minor, Trivial };
inline constexpr std::size_t kPriorityCount = 5;
inline constexpr std::array<Priority, kPriorityCount> kPriorities{
    Priority::Blocker, Priority::Critical, Priority::Major, Priority::Minor, Priority::Trivial};

enum class Status { Open, Closed };

enum class Role { Assignee, Reporter, Other };
inline constexpr std::array<Role, 3> kRoles{Role::Assignee, Role::Reporter, Role::Other};

/// Coarse issue-type buckets used by the type/valence analysis.
enum class TypeGroup { FutureDev, AllTasks, Bug };

std::string_view to_string(IssueType type);
std::string_view to_string(Priority priority);
std::string_view to_string(Status status);
std::string_view to_string(Role role);
std::string_view to_string(TypeGroup group);

/// Case-insensitive; ignores spaces, '-' and '_' so Jira spellings such as
/// "Sub-task" and "New Feature" are accepted.
std::optional<IssueType> parse_issue_type(std::string_view text);
std::optional<Priority> parse_priority(std::string_view text);
std::optional<Status> parse_status(std::string_view text);

/// Bug -> Bug; Task/SubTask/Test -> AllTasks; Wish/NewFeature/Improvement/
/// FeatureRequest/Enhancement -> FutureDev; Other -> none.
std::optional<TypeGroup> type_group(IssueType type);

/// 5 for Blocker down to 1 for Trivial.
int priority_rank(Priority priority);

struct Comment {
    std::string author;
    Timestamp created = 0;
    std::string body;

    friend bool operator==(const Comment&, const Comment&) = default;
};

struct IssueReport {
    std::string id;
    std::string project;
    IssueType issue_type = IssueType::Other;
    Priority priority = Priority::Major;
    Timestamp created = 0;
    std::optional<Timestamp> resolved;
    Status status = Status::Open;
    std::string reporter;
    std::optional<std::string> assignee;
    std::int64_t votes = 0;
    std::int64_t watchers = 0;
    std::int64_t change_count = 0;
    std::int64_t developer_count = 0;
    std::string title;
    std::string description;
    std::vector<Comment> comments;  // ascending by created
    std::map<std::string, double> external_features;

    /// resolved - created, when resolved.
    std::optional<double> resolution_seconds() const;

    friend bool operator==(const IssueReport&, const IssueReport&) = default;
};

/// Checks the IssueReport invariants; throws ValidationError.
void validate(const IssueReport& issue);

/// One rejected JSONL line.
struct LineError {
    std::size_t line = 0;
    std::string message;
};

/// Raised by load_corpus when any line is rejected; carries every line error.
class SchemaError : public Error {
public:
    explicit SchemaError(std::vector<LineError> errors);
    const std::vector<LineError>& errors() const noexcept { return errors_; }

private:
    std::vector<LineError> errors_;
};

struct CorpusLoad {
    std::vector<IssueReport> issues;
    std::vector<LineError> errors;
    std::size_t lines = 0;  // non-blank lines seen
};

/// Parses issue JSONL, collecting per-line errors instead of throwing.
/// Blank lines are skipped; out-of-order comments are sorted.
CorpusLoad read_corpus(std::istream& in);

/// Strict form: throws SchemaError if any line is rejected.
std::vector<IssueReport> load_corpus(std::istream& in);
std::vector<IssueReport> load_corpus_file(const std::filesystem::path& path);

/// One JSON object, no trailing newline.
std::string to_json_line(const IssueReport& issue);
void write_corpus(std::ostream& out, std::span<const IssueReport> issues);

/// Scores of the five issue elements. `all_comments` covers every comment
/// body (title and description excluded).
struct ElementScores {
    std::optional<VadScore> title;
    std::optional<VadScore> description;
    std::optional<VadScore> first_comment;
    std::optional<VadScore> last_comment;
    std::optional<VadScore> all_comments;
};

enum class Element { Title, Description, AllComments, FirstComment, LastComment };
inline constexpr std::array<Element, 5> kElements{Element::Title, Element::Description,
                                                  Element::AllComments, Element::FirstComment,
                                                  Element::LastComment};
std::string_view to_string(Element element);  // "Title", "Desc", "All", "First", "Last"

const std::optional<VadScore>& element_score(const ElementScores& scores, Element element);

/// An element is absent when the text is missing or has no lexicon match.
ElementScores score_elements(const IssueReport& issue, const Lexicon& lexicon);

/// Same as score_elements, additionally returning each comment's own score.
ElementScores score_elements(const IssueReport& issue, const Lexicon& lexicon,
                             std::vector<VadScore>& per_comment);

/// Assignee takes precedence over Reporter when one person is both.
Role role_of(const Comment& comment, const IssueReport& issue);

/// Experience counts derived from the corpus itself, per issue.
struct ParticipantHistory {
    std::int64_t assignee_prev_issues = 0;    // earlier issues with the same assignee
    std::int64_t reporter_prev_issues = 0;    // earlier issues with the same reporter
    std::int64_t assignee_prev_comments = 0;  // comments the assignee wrote before this issue opened
    std::int64_t reporter_prev_comments = 0;
};

/// "Earlier" means strictly smaller `created`. Issues without an assignee
/// get zero assignee counts. Result is aligned with `issues`.
std::vector<ParticipantHistory> participant_history(std::span<const IssueReport> issues);

} // namespace vadminer
