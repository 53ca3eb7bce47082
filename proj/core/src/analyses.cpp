#include "vadminer/analyses.hpp"

#include "vadminer/errors.hpp"
#include "vadminer/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace vadminer {

ScoredCorpus::ScoredCorpus(std::span<const IssueReport> issues, const Lexicon& lexicon, unsigned jobs)
    : issues_(issues), elements_(issues.size()), comments_(issues.size()) {
    parallel_for(issues.size(), jobs, [&](std::size_t i) {
        elements_[i] = score_elements(issues[i], lexicon, comments_[i]);
    });
    history_ = participant_history(issues);
    for (const auto& e : elements_)
        if (e.title || e.description || e.all_comments) ++scored_;
}

namespace {

/// group_of[i] is the issue's group index, or absent when it belongs to none.
GroupTable group_table(std::string name, const ScoredCorpus& corpus, Dimension dim,
                       std::vector<std::string> groups,
                       const std::vector<std::optional<std::size_t>>& group_of, double alpha) {
    GroupTable table;
    table.name = std::move(name);
    table.dimension = dim;
    table.groups = std::move(groups);
    const std::size_t g = table.groups.size();
    table.comparisons = static_cast<int>(kElements.size() * (g - 1));
    table.adjusted_alpha = bonferroni_alpha(alpha, table.comparisons);

    for (const auto& group : group_of) {
        if (group) ++table.included;
        else ++table.skipped;
    }

    for (Element element : kElements) {
        std::vector<std::vector<double>> values(g);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (!group_of[i]) continue;
            const auto& score = element_score(corpus.elements(i), element);
            if (!score) continue;
            if (auto v = score->get(dim)) values[*group_of[i]].push_back(*v);
        }
        GroupRow row;
        row.element = element;
        for (const auto& v : values) {
            row.counts.push_back(v.size());
            row.means.push_back(v.empty() ? std::nullopt : std::optional<double>(mean(v)));
        }
        for (std::size_t j = 0; j + 1 < g; ++j) {
            if (values[j].size() < 2 || values[j + 1].size() < 2) {
                row.comparisons.emplace_back();
                table.notices.push_back(fmt::format("{}: {} vs {} has insufficient data", to_string(element),
                                                    table.groups[j], table.groups[j + 1]));
                continue;
            }
            const auto result = welch_t_test(values[j], values[j + 1], table.adjusted_alpha);
            if (result.degenerate_variance)
                table.notices.push_back(fmt::format("{}: {} vs {} has degenerate variance", to_string(element),
                                                    table.groups[j], table.groups[j + 1]));
            row.comparisons.push_back(result);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::optional<double> mean_of_present(std::initializer_list<const std::optional<VadScore>*> scores,
                                      Dimension dim) {
    double sum = 0.0;
    int count = 0;
    for (const auto* s : scores) {
        if (!*s) continue;
        if (auto v = (*s)->get(dim)) {
            sum += *v;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / count;
}

std::vector<std::size_t> role_comment_indices(const IssueReport& issue, Role role) {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < issue.comments.size(); ++c)
        if (role_of(issue.comments[c], issue) == role) out.push_back(c);
    return out;
}

const std::array<const char*, 4> kPriorityIndicators{"priority_critical", "priority_major", "priority_minor",
                                                     "priority_trivial"};

struct VadColumn {
    const char* name;
    Element element;
    Dimension dim;
};

const std::array<VadColumn, 11> kVadColumns{{
    {"title_V", Element::Title, Dimension::Valence},
    {"title_A", Element::Title, Dimension::Arousal},
    {"desc_V", Element::Description, Dimension::Valence},
    {"desc_A", Element::Description, Dimension::Arousal},
    {"all_V", Element::AllComments, Dimension::Valence},
    {"all_A", Element::AllComments, Dimension::Arousal},
    {"all_D", Element::AllComments, Dimension::Dominance},
    {"first_V", Element::FirstComment, Dimension::Valence},
    {"first_A", Element::FirstComment, Dimension::Arousal},
    {"last_V", Element::LastComment, Dimension::Valence},
    {"last_A", Element::LastComment, Dimension::Arousal},
}};

std::vector<std::string> keep_existing(const std::vector<std::string>& wanted, const DesignMatrix& design) {
    std::vector<std::string> out;
    for (const auto& name : wanted)
        if (design.index_of(name)) out.push_back(name);
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ", ";
        out += items[i];
    }
    return out;
}

} // namespace

GroupTable rq1_priority_arousal(const ScoredCorpus& corpus, const AnalysisOptions& options) {
    std::vector<std::string> groups;
    for (auto p : kPriorities) groups.emplace_back(to_string(p));
    std::vector<std::optional<std::size_t>> group_of(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i)
        group_of[i] = static_cast<std::size_t>(corpus.issue(i).priority);
    return group_table("priority_arousal", corpus, Dimension::Arousal, std::move(groups), group_of,
                       options.alpha);
}

GroupTable rq1_type_valence(const ScoredCorpus& corpus, const AnalysisOptions& options) {
    // Column order, left to right.
    constexpr std::array<TypeGroup, 3> order{TypeGroup::FutureDev, TypeGroup::AllTasks, TypeGroup::Bug};
    std::vector<std::string> groups;
    for (auto g : order) groups.emplace_back(to_string(g));
    std::vector<std::optional<std::size_t>> group_of(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto g = type_group(corpus.issue(i).issue_type);
        if (!g) continue;
        group_of[i] = static_cast<std::size_t>(std::find(order.begin(), order.end(), *g) - order.begin());
    }
    auto table = group_table("type_valence", corpus, Dimension::Valence, std::move(groups), group_of,
                             options.alpha);
    if (table.skipped > 0)
        table.notices.insert(table.notices.begin(),
                             fmt::format("{} issues of type Other excluded", table.skipped));
    return table;
}

GroupTable rq1_dominance_time(const ScoredCorpus& corpus, const AnalysisOptions& options) {
    std::vector<double> times;
    for (const auto& issue : corpus.issues())
        if (auto t = issue.resolution_seconds()) times.push_back(*t);
    std::vector<std::optional<std::size_t>> group_of(corpus.size());
    if (!times.empty()) {
        const double split = median(times);
        for (std::size_t i = 0; i < corpus.size(); ++i)
            if (auto t = corpus.issue(i).resolution_seconds()) group_of[i] = *t >= split ? 1 : 0;
    }
    auto table = group_table("dominance_time", corpus, Dimension::Dominance, {"Short time", "High time"},
                             group_of, options.alpha);
    if (table.skipped > 0)
        table.notices.insert(table.notices.begin(),
                             fmt::format("{} unresolved issues skipped", table.skipped));
    return table;
}

Rq1Summary rq1_summary(const ScoredCorpus& corpus, const AnalysisOptions&) {
    Rq1Summary summary;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& e = corpus.elements(i);
        const auto v = mean_of_present({&e.title, &e.description, &e.all_comments}, Dimension::Valence);
        const auto a = mean_of_present({&e.title, &e.description, &e.all_comments}, Dimension::Arousal);
        const auto d = mean_of_present({&e.title, &e.description, &e.all_comments}, Dimension::Dominance);
        if (!v || !a || !d) {
            ++summary.skipped;
            continue;
        }
        summary.points.push_back({corpus.issue(i).id, *v, *a, *d});
        x.push_back(*v);
        y.push_back(*a);
    }
    for (int degree : {1, 2}) {
        if (x.size() <= static_cast<std::size_t>(degree + 1)) {
            summary.notices.push_back(fmt::format("too few points for a degree-{} fit", degree));
            continue;
        }
        try {
            (degree == 1 ? summary.linear : summary.quadratic) = polyfit(x, y, degree);
        } catch (const SingularDesignError&) {
            summary.notices.push_back(fmt::format("degree-{} fit is rank deficient", degree));
        }
    }
    return summary;
}

std::string_view to_string(Scope scope) {
    switch (scope) {
    case Scope::All: return "All";
    case Scope::Assignee: return "Assignees'";
    case Scope::Reporter: return "Reporters'";
    case Scope::Other: return "Others'";
    }
    return "?";
}

PairedDeltaTable rq2_first_last(const ScoredCorpus& corpus, const AnalysisOptions& options) {
    PairedDeltaTable table;
    table.adjusted_alpha = bonferroni_alpha(options.alpha, table.comparisons);
    std::array<std::array<std::vector<double>, 4>, 3> before, after;

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& issue = corpus.issue(i);
        const bool closed = issue.status == Status::Closed;
        for (std::size_t s = 0; s < kScopes.size(); ++s) {
            std::optional<std::pair<std::size_t, std::size_t>> pair;
            if (closed) {
                if (kScopes[s] == Scope::All) {
                    if (issue.comments.size() >= 4) pair = {0, issue.comments.size() - 1};
                } else {
                    const Role role = kScopes[s] == Scope::Assignee   ? Role::Assignee
                                      : kScopes[s] == Scope::Reporter ? Role::Reporter
                                                                      : Role::Other;
                    const auto idx = role_comment_indices(issue, role);
                    if (idx.size() >= 2) pair = {idx.front(), idx.back()};
                }
            }
            if (!pair) {
                ++table.excluded[s];
                continue;
            }
            ++table.included[s];
            const auto& first = corpus.comments(i)[pair->first];
            const auto& last = corpus.comments(i)[pair->second];
            for (std::size_t d = 0; d < 3; ++d) {
                const auto f = first.get(kDimensions[d]);
                const auto l = last.get(kDimensions[d]);
                if (!f || !l) continue;
                before[d][s].push_back(*f);
                after[d][s].push_back(*l);
            }
        }
    }

    for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t s = 0; s < kScopes.size(); ++s) {
            auto& cell = table.cells[d][s];
            cell.pairs = before[d][s].size();
            if (cell.pairs < 2) {
                table.notices.push_back(fmt::format("{} {}: insufficient data", to_string(kScopes[s]),
                                                    dimension_letter(kDimensions[d])));
                continue;
            }
            cell.result = paired_t_test(before[d][s], after[d][s], table.adjusted_alpha);
        }
    }
    return table;
}

Rq3Report rq3_resolution_model(const ScoredCorpus& corpus, const AnalysisOptions& options) {
    Rq3Report report;

    std::vector<std::size_t> rows;
    std::vector<double> times;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto t = corpus.issue(i).resolution_seconds();
        if (!t) {
            ++report.skipped_unresolved;
            continue;
        }
        const auto& e = corpus.elements(i);
        if (!e.title || !e.description || !e.all_comments || !e.first_comment || !e.last_comment) {
            ++report.skipped_incomplete;
            continue;
        }
        rows.push_back(i);
        times.push_back(*t);
    }
    report.rows = rows.size();

    // External affective columns present in every row.
    std::vector<std::string> external;
    if (!rows.empty()) {
        for (const auto& [name, value] : corpus.issue(rows.front()).external_features) {
            (void)value;
            const bool everywhere = std::all_of(rows.begin(), rows.end(), [&](std::size_t i) {
                return corpus.issue(i).external_features.count(name) > 0;
            });
            if (everywhere) external.push_back(name);
        }
    }

    std::vector<std::string> names{"comments", "assignee_prev_comments", "reporter_prev_comments",
                                   "developers", "watchers", "changes"};
    for (const char* p : kPriorityIndicators) names.emplace_back(p);
    const std::size_t n_controls = names.size();
    for (const auto& e : external) names.push_back("ext_" + e);
    for (const auto& c : kVadColumns) names.emplace_back(c.name);

    const std::size_t n = rows.size();
    const std::size_t min_rows = std::max<std::size_t>(static_cast<std::size_t>(options.folds), names.size() + 2);
    if (n < min_rows) {
        report.notices.push_back(fmt::format("{} usable rows, at least {} needed; model skipped", n, min_rows));
        return report;
    }
    const auto labels = binarize_outcome(times);
    report.long_count = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Long));
    if (report.long_count < 2 || n - report.long_count < 2) {
        report.notices.push_back("one outcome class has fewer than 2 rows; model skipped");
        return report;
    }

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(names.size()));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const auto i = rows[r];
        const auto& issue = corpus.issue(i);
        const auto& h = corpus.history()[i];
        const auto ri = static_cast<Eigen::Index>(r);
        Eigen::Index c = 0;
        x(ri, c++) = static_cast<double>(issue.comments.size());
        x(ri, c++) = static_cast<double>(h.assignee_prev_comments);
        x(ri, c++) = static_cast<double>(h.reporter_prev_comments);
        x(ri, c++) = static_cast<double>(issue.developer_count);
        x(ri, c++) = static_cast<double>(issue.watchers);
        x(ri, c++) = static_cast<double>(issue.change_count);
        for (auto p : {Priority::Critical, Priority::Major, Priority::Minor, Priority::Trivial})
            x(ri, c++) = issue.priority == p ? 1.0 : 0.0;
        for (const auto& e : external) x(ri, c++) = issue.external_features.at(e);
        for (const auto& col : kVadColumns)
            x(ri, c++) = *element_score(corpus.elements(i), col.element)->get(col.dim);
        y(ri) = labels[r] == Label::Long ? 1.0 : 0.0;
    }
    DesignMatrix full(names, std::move(x), std::move(y));

    const std::vector<std::pair<std::string, std::string>> pairs{{"all_V", "all_D"}};
    auto filtered = correlation_filter(full, pairs, 0.7);
    report.correlation = filtered.decisions;
    for (const auto& d : filtered.decisions)
        if (d.dropped)
            report.notices.push_back(fmt::format("{} dropped: |r| = {:.3f} with {}", d.drop, std::fabs(d.r), d.keep));
    DesignMatrix design = std::move(filtered.design);

    const auto collinear = collinear_columns(design);
    if (!collinear.empty()) {
        report.notices.push_back(fmt::format("collinear or constant columns dropped: {}", join(collinear)));
        design = design.drop(collinear);
    }

    std::vector<std::string> control_names(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(n_controls));
    std::vector<std::string> affective_names = control_names;
    for (const auto& e : external) affective_names.push_back("ext_" + e);

    struct StagePlan {
        const char* name;
        std::vector<std::string> columns;
        bool skipped;
    };
    const bool no_affective = external.empty();
    std::vector<StagePlan> plans{
        {"Controls", keep_existing(control_names, design), false},
        {"Affective", keep_existing(affective_names, design), no_affective},
        {"VAD", design.names(), false},
    };
    if (no_affective) report.notices.push_back("no external affective columns; Affective stage skipped");

    std::optional<std::size_t> previous;
    for (auto& plan : plans) {
        StageReport stage;
        stage.name = plan.name;
        stage.skipped = plan.skipped;
        if (!plan.skipped) {
            stage.columns = plan.columns;
            const auto stage_design = design.select(plan.columns);
            stage.model = fit_logistic(stage_design);
            if (!stage.model->converged)
                report.notices.push_back(fmt::format("{} model did not converge{}", plan.name,
                                                     stage.model->separation ? " (separation)" : ""));
            try {
                stage.cv = crossval(stage_design, options.folds, options.seed, options.jobs);
            } catch (const Error& e) {
                report.notices.push_back(fmt::format("{} cross-validation failed: {}", plan.name, e.what()));
            }
        }
        report.stages.push_back(std::move(stage));
        const auto& current = report.stages.back();
        if (current.skipped) continue;
        if (previous) {
            const auto& before = report.stages[*previous];
            report.lr_tests.push_back({before.name, current.name, lr_test(*before.model, *current.model),
                                       current.columns.size() - before.columns.size()});
        }
        previous = report.stages.size() - 1;
    }
    report.zero_r = zero_r(labels);

    // Final model: drop metrics with p >= 0.01 and refit.
    const auto& last = *report.stages[*previous].model;
    std::vector<std::string> kept;
    for (std::size_t j = 1; j < last.names.size(); ++j) {
        if (last.p_values[j] < 0.01) kept.push_back(last.names[j]);
        else report.pruned.push_back(last.names[j]);
    }
    const auto final_design = design.select(kept);
    report.final_model = fit_logistic(final_design);
    try {
        report.impacts = impact_sizes(*report.final_model, final_design);
    } catch (const DegenerateVarianceError& e) {
        report.notices.push_back(fmt::format("impact sizes unavailable: {}", e.what()));
    }
    return report;
}

SignTable rq4_sign_tables(const ScoredCorpus& corpus, const AnalysisOptions& options) {
    SignTable table;
    table.rows = {"Priority", "Issue Type", "Resolution Time", "#votes",
                  "#comments", "#watchers", "assignee prev. issues", "reporter prev. issues"};
    const std::vector<std::string> predictors{"priority", "bug", "future_dev", "resolution_time", "votes",
                                              "comments", "watchers", "assignee_prev_issues",
                                              "reporter_prev_issues"};
    // Table row -> predictor; the Issue Type row shows the Bug indicator.
    const std::array<const char*, 8> row_predictor{"priority", "bug", "resolution_time", "votes",
                                                   "comments", "watchers", "assignee_prev_issues",
                                                   "reporter_prev_issues"};

    for (Role role : kRoles)
        for (Dimension dim : kDimensions) table.columns.push_back({role, dim, 0, std::nullopt});
    std::vector<std::vector<std::string>> notices(table.columns.size());

    parallel_for(table.columns.size(), options.jobs, [&](std::size_t col) {
        auto& column = table.columns[col];
        const auto label = fmt::format("{} {}", to_string(column.role), dimension_letter(column.dimension));
        std::vector<std::vector<double>> rows;
        std::vector<double> response;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto& issue = corpus.issue(i);
            const auto t = issue.resolution_seconds();
            if (!t) continue;
            double sum = 0.0;
            int count = 0;
            for (std::size_t c = 0; c < issue.comments.size(); ++c) {
                if (role_of(issue.comments[c], issue) != column.role) continue;
                if (auto v = corpus.comments(i)[c].get(column.dimension)) {
                    sum += *v;
                    ++count;
                }
            }
            if (count == 0) continue;
            const auto group = type_group(issue.issue_type);
            const auto& h = corpus.history()[i];
            rows.push_back({static_cast<double>(priority_rank(issue.priority)),
                            group == TypeGroup::Bug ? 1.0 : 0.0,
                            group == TypeGroup::FutureDev ? 1.0 : 0.0,
                            *t,
                            static_cast<double>(issue.votes),
                            static_cast<double>(issue.comments.size()),
                            static_cast<double>(issue.watchers),
                            static_cast<double>(h.assignee_prev_issues),
                            static_cast<double>(h.reporter_prev_issues)});
            response.push_back(sum / count);
        }
        column.n = rows.size();
        Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(predictors.size()));
        Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t j = 0; j < predictors.size(); ++j)
                x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = rows[r][j];
            y(static_cast<Eigen::Index>(r)) = response[r];
        }
        DesignMatrix design(predictors, std::move(x), std::move(y));
        if (design.rows() > 0) {
            const auto collinear = collinear_columns(design);
            if (!collinear.empty()) {
                notices[col].push_back(fmt::format("{}: constant or collinear predictors dropped: {}", label,
                                                   join(collinear)));
                design = design.drop(collinear);
            }
        }
        if (design.rows() < design.cols() + 2) {
            notices[col].push_back(fmt::format("{}: insufficient rows ({})", label, design.rows()));
            return;
        }
        try {
            column.model = fit_linear(design);
        } catch (const DegenerateVarianceError&) {
            notices[col].push_back(fmt::format("{}: degenerate variance", label));
        } catch (const SingularDesignError& e) {
            notices[col].push_back(fmt::format("{}: singular design ({})", label, join(e.columns())));
        }
    });
    for (const auto& n : notices) table.notices.insert(table.notices.end(), n.begin(), n.end());

    table.cells.assign(table.rows.size(), std::vector<char>(table.columns.size(), ' '));
    for (std::size_t col = 0; col < table.columns.size(); ++col) {
        const auto& model = table.columns[col].model;
        if (!model) continue;
        for (std::size_t r = 0; r < row_predictor.size(); ++r) {
            const auto j = model->index_of(row_predictor[r]);
            if (!j || !(model->p_values[*j] < kSignTableLevel)) continue;
            const double b = model->coefficients[*j];
            if (b > 0.0) table.cells[r][col] = '+';
            else if (b < 0.0) table.cells[r][col] = '-';
        }
    }
    return table;
}

std::string_view to_string(Analysis analysis) {
    switch (analysis) {
    case Analysis::Rq1: return "rq1";
    case Analysis::Rq2: return "rq2";
    case Analysis::Rq3: return "rq3";
    case Analysis::Rq4: return "rq4";
    case Analysis::Summary: return "summary";
    }
    return "?";
}

std::optional<Analysis> parse_analysis(std::string_view text) {
    std::string lower;
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (auto a : {Analysis::Rq1, Analysis::Rq2, Analysis::Rq3, Analysis::Rq4, Analysis::Summary})
        if (lower == to_string(a)) return a;
    return std::nullopt;
}

AnalysisResults run_analyses(const ScoredCorpus& corpus, std::span<const Analysis> selected,
                             const AnalysisOptions& options) {
    const std::set<Analysis> wanted(selected.begin(), selected.end());
    AnalysisResults results;
    results.issues = corpus.size();
    results.scored_issues = corpus.scored_issues();
    if (wanted.count(Analysis::Rq1)) {
        results.priority_arousal = rq1_priority_arousal(corpus, options);
        results.type_valence = rq1_type_valence(corpus, options);
        results.dominance_time = rq1_dominance_time(corpus, options);
    }
    if (wanted.count(Analysis::Summary)) results.summary = rq1_summary(corpus, options);
    if (wanted.count(Analysis::Rq2)) results.first_last = rq2_first_last(corpus, options);
    if (wanted.count(Analysis::Rq3)) results.resolution_model = rq3_resolution_model(corpus, options);
    if (wanted.count(Analysis::Rq4)) results.sign_table = rq4_sign_tables(corpus, options);
    return results;
}

} // namespace vadminer
