#pragma once

#include "vadminer/corpus.hpp"
#include "vadminer/lexicon.hpp"
#include "vadminer/models.hpp"
#include "vadminer/stats.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vadminer {

/// A corpus with every element and comment scored once up front.
class ScoredCorpus {
public:
    /// `jobs` = 0 uses all hardware threads. Results do not depend on `jobs`.
    ScoredCorpus(std::span<const IssueReport> issues, const Lexicon& lexicon, unsigned jobs = 0);

    std::size_t size() const noexcept { return issues_.size(); }
    std::span<const IssueReport> issues() const noexcept { return issues_; }
    const IssueReport& issue(std::size_t i) const { return issues_[i]; }
    const ElementScores& elements(std::size_t i) const { return elements_[i]; }
    /// One score per comment, aligned with issue(i).comments.
    const std::vector<VadScore>& comments(std::size_t i) const { return comments_[i]; }
    const std::vector<ParticipantHistory>& history() const noexcept { return history_; }

    /// Issues with at least one scored element.
    std::size_t scored_issues() const noexcept { return scored_; }

private:
    std::span<const IssueReport> issues_;
    std::vector<ElementScores> elements_;
    std::vector<std::vector<VadScore>> comments_;
    std::vector<ParticipantHistory> history_;
    std::size_t scored_ = 0;
};

struct AnalysisOptions {
    double alpha = 0.05;
    std::uint64_t seed = 0;
    unsigned jobs = 0;
    int folds = 10;
};

struct GroupRow {
    Element element = Element::Title;
    std::vector<std::optional<double>> means;  // per group; absent when the group is empty
    std::vector<std::size_t> counts;
    /// Group j against group j + 1; absent means insufficient data (< 2 scores on a side).
    std::vector<std::optional<ComparisonResult>> comparisons;
};

/// One dimension's element-by-group means with adjacent Welch comparisons.
struct GroupTable {
    std::string name;
    Dimension dimension = Dimension::Valence;
    std::vector<std::string> groups;
    std::vector<GroupRow> rows;
    int comparisons = 0;  // rows x adjacent pairs; the Bonferroni denominator
    double adjusted_alpha = 0.0;
    std::size_t included = 0;  // issues assigned to a group
    std::size_t skipped = 0;   // issues outside every group
    std::vector<std::string> notices;
};

/// Arousal by priority, Blocker to Trivial.
GroupTable rq1_priority_arousal(const ScoredCorpus& corpus, const AnalysisOptions& options = {});
/// Valence by type group: Future Dev, All Tasks, Bug. Type Other is skipped.
GroupTable rq1_type_valence(const ScoredCorpus& corpus, const AnalysisOptions& options = {});
/// Dominance for resolved issues split at the median resolution time
/// (interpolated for even counts): Short below it, High at or above it.
GroupTable rq1_dominance_time(const ScoredCorpus& corpus, const AnalysisOptions& options = {});

struct SummaryPoint {
    std::string id;
    double valence = 0.0;
    double arousal = 0.0;
    double dominance = 0.0;
};

struct Rq1Summary {
    std::vector<SummaryPoint> points;
    std::optional<FitResult> linear;     // arousal on valence
    std::optional<FitResult> quadratic;
    std::size_t skipped = 0;  // issues with no scored Title, Desc or All
    std::vector<std::string> notices;
};

/// Per issue, each dimension averages the present Title, Desc and All scores.
Rq1Summary rq1_summary(const ScoredCorpus& corpus, const AnalysisOptions& options = {});

enum class Scope { All, Assignee, Reporter, Other };
inline constexpr std::array<Scope, 4> kScopes{Scope::All, Scope::Assignee, Scope::Reporter,
                                              Scope::Other};
std::string_view to_string(Scope scope);  // "All", "Assignees'", "Reporters'", "Others'"

struct PairedCell {
    std::optional<ComparisonResult> result;  // absent: fewer than 2 pairs
    std::size_t pairs = 0;
};

/// First-vs-last comment deltas. cells[dimension][scope]; d and t are last - first.
struct PairedDeltaTable {
    std::array<std::array<PairedCell, 4>, 3> cells{};
    std::array<std::size_t, 4> included{};  // qualifying issues per scope
    std::array<std::size_t, 4> excluded{};
    int comparisons = 12;
    double adjusted_alpha = 0.0;
    std::vector<std::string> notices;
};

/// All: closed issues with >= 4 comments. Role scopes: closed issues with
/// >= 2 comments by that role, pairing the role's first and last comment.
PairedDeltaTable rq2_first_last(const ScoredCorpus& corpus, const AnalysisOptions& options = {});

struct StageReport {
    std::string name;
    std::vector<std::string> columns;  // features actually fitted
    std::optional<FittedModel> model;
    std::optional<CvReport> cv;
    bool skipped = false;
};

struct LrComparison {
    std::string reduced;
    std::string full;
    double p = 1.0;
    std::size_t df = 0;
};

/// Hierarchical logistic models of Long vs Short resolution time.
struct Rq3Report {
    std::size_t rows = 0;
    std::size_t skipped_unresolved = 0;
    std::size_t skipped_incomplete = 0;  // resolved but an element score is missing
    std::size_t long_count = 0;
    std::vector<StageReport> stages;  // Controls, Affective, VAD
    std::vector<LrComparison> lr_tests;
    std::vector<CorrelationDecision> correlation;
    std::optional<CvReport> zero_r;
    std::optional<FittedModel> final_model;  // last stage with p >= 0.01 metrics removed
    std::vector<std::string> pruned;
    std::vector<ImpactEntry> impacts;
    std::vector<std::string> notices;

    bool empty() const noexcept { return stages.empty(); }
};

Rq3Report rq3_resolution_model(const ScoredCorpus& corpus, const AnalysisOptions& options = {});

inline constexpr double kSignTableLevel = 0.001;

struct SignColumn {
    Role role = Role::Assignee;
    Dimension dimension = Dimension::Valence;
    std::size_t n = 0;
    std::optional<FittedModel> model;
};

/// cells[row][column] is '+', '-' or ' ' (blank: p >= 0.001 or no model).
struct SignTable {
    std::vector<std::string> rows;
    std::vector<SignColumn> columns;  // role-major: Assignee V/A/D, Reporter V/A/D, Other V/A/D
    std::vector<std::vector<char>> cells;
    std::vector<std::string> notices;
};

SignTable rq4_sign_tables(const ScoredCorpus& corpus, const AnalysisOptions& options = {});

enum class Analysis { Rq1, Rq2, Rq3, Rq4, Summary };
std::string_view to_string(Analysis analysis);
std::optional<Analysis> parse_analysis(std::string_view text);

struct AnalysisResults {
    std::size_t issues = 0;
    std::size_t scored_issues = 0;
    std::optional<GroupTable> priority_arousal;
    std::optional<GroupTable> type_valence;
    std::optional<GroupTable> dominance_time;
    std::optional<Rq1Summary> summary;
    std::optional<PairedDeltaTable> first_last;
    std::optional<Rq3Report> resolution_model;
    std::optional<SignTable> sign_table;
};

AnalysisResults run_analyses(const ScoredCorpus& corpus, std::span<const Analysis> selected,
                             const AnalysisOptions& options = {});

} // namespace vadminer
