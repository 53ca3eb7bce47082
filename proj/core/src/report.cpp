#include "vadminer/report.hpp"

#include "vadminer/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

namespace vadminer {

namespace {

std::string num(double v) { return fmt::format("{:.10g}", v); }

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string flag(bool b) { return b ? "true" : "false"; }

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, std::vector<std::filesystem::path>& written)
        : out_(path, std::ios::binary) {
        if (!out_) throw Error(fmt::format("cannot write '{}'", path.string()));
        written.push_back(path);
    }

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cells, first = false), ...);
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

void write_group_table(const GroupTable& table, const std::filesystem::path& dir,
                       std::vector<std::filesystem::path>& written) {
    CsvFile csv(dir / fmt::format("rq1_{}.csv", table.name), written);
    csv.row("element", "group", "n", "mean", "vs_group", "t", "df", "p", "d", "d_label", "significant",
            "adjusted_alpha");
    for (const auto& row : table.rows) {
        for (std::size_t g = 0; g < table.groups.size(); ++g) {
            const std::string element(to_string(row.element));
            const auto n = std::to_string(row.counts[g]);
            if (g + 1 == table.groups.size()) {
                csv.row(element, table.groups[g], n, opt(row.means[g]), "", "", "", "", "", "", "",
                        num(table.adjusted_alpha));
                continue;
            }
            const auto& c = row.comparisons[g];
            if (!c) {
                csv.row(element, table.groups[g], n, opt(row.means[g]), table.groups[g + 1], "", "", "", "",
                        "insufficient", "", num(table.adjusted_alpha));
                continue;
            }
            csv.row(element, table.groups[g], n, opt(row.means[g]), table.groups[g + 1], num(c->t), num(c->df),
                    num(c->p), num(c->d), std::string(to_string(c->d_label)), flag(c->significant),
                    num(table.adjusted_alpha));
        }
    }
}

void write_summary(const Rq1Summary& summary, const std::filesystem::path& dir,
                   std::vector<std::filesystem::path>& written) {
    {
        CsvFile csv(dir / "rq1_summary_scatter.csv", written);
        csv.row("id", "valence", "arousal", "dominance", "linear_fit", "quadratic_fit");
        for (const auto& p : summary.points)
            csv.row(p.id, num(p.valence), num(p.arousal), num(p.dominance),
                    summary.linear ? num(summary.linear->predict(p.valence)) : std::string(),
                    summary.quadratic ? num(summary.quadratic->predict(p.valence)) : std::string());
    }
    CsvFile csv(dir / "rq1_summary_fit.csv", written);
    csv.row("model", "c0", "c1", "c2", "r_squared", "points", "skipped");
    for (const auto* fit : {&summary.linear, &summary.quadratic}) {
        const std::string name = fit == &summary.linear ? "linear" : "quadratic";
        if (!*fit) {
            csv.row(name, "", "", "", "", summary.points.size(), summary.skipped);
            continue;
        }
        const auto& c = (*fit)->coefficients;
        csv.row(name, num(c[0]), num(c[1]), c.size() > 2 ? num(c[2]) : std::string(), num((*fit)->r_squared),
                summary.points.size(), summary.skipped);
    }
}

void write_first_last(const PairedDeltaTable& table, const std::filesystem::path& dir,
                      std::vector<std::filesystem::path>& written) {
    CsvFile csv(dir / "rq2_first_last.csv", written);
    csv.row("dimension", "scope", "included", "excluded", "pairs", "mean_first", "mean_last", "t", "df", "p", "d",
            "d_label", "significant", "adjusted_alpha");
    for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t s = 0; s < kScopes.size(); ++s) {
            const auto& cell = table.cells[d][s];
            const std::string dim(1, dimension_letter(kDimensions[d]));
            const std::string scope(to_string(kScopes[s]));
            if (!cell.result) {
                csv.row(dim, scope, table.included[s], table.excluded[s], cell.pairs, "", "", "", "", "", "",
                        "insufficient", "", num(table.adjusted_alpha));
                continue;
            }
            const auto& r = *cell.result;
            csv.row(dim, scope, table.included[s], table.excluded[s], cell.pairs, num(r.mean_a), num(r.mean_b),
                    num(r.t), num(r.df), num(r.p), num(r.d), std::string(to_string(r.d_label)),
                    flag(r.significant), num(table.adjusted_alpha));
        }
    }
}

void write_metrics(CsvFile& csv, const std::string& model, const CvReport& cv) {
    csv.row(model, "Short", num(cv.short_class.precision), num(cv.short_class.recall), num(cv.short_class.f1),
            cv.short_class.support, num(cv.auc));
    csv.row(model, "Long", num(cv.long_class.precision), num(cv.long_class.recall), num(cv.long_class.f1),
            cv.long_class.support, num(cv.auc));
    csv.row(model, "Weighted", num(cv.weighted.precision), num(cv.weighted.recall), num(cv.weighted.f1),
            cv.weighted.support, num(cv.auc));
}

void write_coefficients(CsvFile& csv, const std::string& model, const FittedModel& m) {
    for (std::size_t j = 0; j < m.names.size(); ++j)
        csv.row(model, m.names[j], num(m.coefficients[j]), num(m.std_errors[j]), num(m.statistics[j]),
                num(m.p_values[j]), num(m.deviance), flag(m.converged));
}

void write_resolution_model(const Rq3Report& report, const std::filesystem::path& dir,
                            std::vector<std::filesystem::path>& written) {
    {
        CsvFile csv(dir / "rq3_overview.csv", written);
        csv.row("status", "rows", "long", "skipped_unresolved", "skipped_incomplete");
        csv.row(report.empty() ? "empty" : "fitted", report.rows, report.long_count, report.skipped_unresolved,
                report.skipped_incomplete);
    }
    {
        CsvFile csv(dir / "rq3_models.csv", written);
        csv.row("model", "term", "estimate", "std_error", "z", "p", "deviance", "converged");
        for (const auto& stage : report.stages)
            if (stage.model) write_coefficients(csv, stage.name, *stage.model);
        if (report.final_model) write_coefficients(csv, "Final", *report.final_model);
    }
    {
        CsvFile csv(dir / "rq3_performance.csv", written);
        csv.row("model", "class", "precision", "recall", "f1", "support", "auc");
        if (report.zero_r) write_metrics(csv, "ZeroR", *report.zero_r);
        for (const auto& stage : report.stages)
            if (stage.cv) write_metrics(csv, stage.name, *stage.cv);
    }
    {
        CsvFile csv(dir / "rq3_lr_tests.csv", written);
        csv.row("reduced", "full", "df", "p");
        for (const auto& t : report.lr_tests) csv.row(t.reduced, t.full, t.df, num(t.p));
    }
    {
        CsvFile csv(dir / "rq3_correlation.csv", written);
        csv.row("keep", "drop", "r", "dropped");
        for (const auto& d : report.correlation) csv.row(d.keep, d.drop, num(d.r), flag(d.dropped));
    }
    CsvFile csv(dir / "rq3_impacts.csv", written);
    csv.row("feature", "coefficient", "impact_percent");
    for (const auto& e : report.impacts) csv.row(e.feature, num(e.coefficient), num(e.impact));
}

std::string column_label(const SignColumn& c) {
    return fmt::format("{} {}", to_string(c.role), dimension_letter(c.dimension));
}

void write_sign_table(const SignTable& table, const std::filesystem::path& dir,
                      std::vector<std::filesystem::path>& written) {
    {
        CsvFile csv(dir / "rq4_sign_table.csv", written);
        std::string header = "characteristic";
        for (const auto& c : table.columns) header += "," + column_label(c);
        csv.row(header);
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            std::string line = table.rows[r];
            for (char cell : table.cells[r]) {
                line += ',';
                if (cell != ' ') line += cell;
            }
            csv.row(line);
        }
    }
    CsvFile csv(dir / "rq4_models.csv", written);
    csv.row("column", "n", "term", "estimate", "std_error", "t", "p", "r_squared");
    for (const auto& c : table.columns) {
        if (!c.model) continue;
        const auto& m = *c.model;
        for (std::size_t j = 0; j < m.names.size(); ++j)
            csv.row(column_label(c), c.n, m.names[j], num(m.coefficients[j]), num(m.std_errors[j]),
                    num(m.statistics[j]), num(m.p_values[j]), num(m.r_squared));
    }
}

std::string fixed(const std::optional<double>& v, int precision = 3) {
    return v ? fmt::format("{:.{}f}", *v, precision) : std::string("-");
}

void append_notices(std::string& out, const std::vector<std::string>& notices) {
    for (const auto& n : notices) out += fmt::format("  note: {}\n", n);
}

void append_group_table(std::string& out, const GroupTable& table, const std::string& title) {
    out += fmt::format("{} ({} means; {} comparisons, adjusted alpha {})\n", title,
                       dimension_name(table.dimension), table.comparisons, num(table.adjusted_alpha));
    out += fmt::format("  issues in groups: {}, skipped: {}\n", table.included, table.skipped);
    out += fmt::format("  {:<6}", "");
    for (const auto& g : table.groups) out += fmt::format(" | {:>12} {:>9} {:>7}", g, "p", "d");
    out += '\n';
    for (const auto& row : table.rows) {
        out += fmt::format("  {:<6}", to_string(row.element));
        for (std::size_t g = 0; g < table.groups.size(); ++g) {
            std::string p = "", d = "";
            if (g + 1 < table.groups.size()) {
                const auto& c = row.comparisons[g];
                if (c) {
                    p = fmt::format("{:.2e}{}", c->p, c->significant ? "*" : " ");
                    d = fmt::format("{:.3f}", c->d);
                } else {
                    p = "insuff.";
                }
            }
            out += fmt::format(" | {:>12} {:>9} {:>7}", fixed(row.means[g]), p, d);
        }
        out += '\n';
    }
    append_notices(out, table.notices);
    out += '\n';
}

} // namespace

std::vector<std::filesystem::path> write_report(const AnalysisResults& results, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    std::vector<std::filesystem::path> written;
    if (results.priority_arousal) write_group_table(*results.priority_arousal, dir, written);
    if (results.type_valence) write_group_table(*results.type_valence, dir, written);
    if (results.dominance_time) write_group_table(*results.dominance_time, dir, written);
    if (results.summary) write_summary(*results.summary, dir, written);
    if (results.first_last) write_first_last(*results.first_last, dir, written);
    if (results.resolution_model) write_resolution_model(*results.resolution_model, dir, written);
    if (results.sign_table) write_sign_table(*results.sign_table, dir, written);

    const auto text_path = dir / "report.txt";
    std::ofstream text(text_path, std::ios::binary);
    if (!text) throw Error(fmt::format("cannot write '{}'", text_path.string()));
    text << format_text_report(results);
    written.push_back(text_path);
    return written;
}

std::string format_text_report(const AnalysisResults& results) {
    std::string out;
    out += fmt::format("issues: {}, scored: {}, without any scored element: {}\n\n", results.issues,
                       results.scored_issues, results.issues - results.scored_issues);

    if (results.priority_arousal) append_group_table(out, *results.priority_arousal, "Priority vs Arousal");
    if (results.type_valence) append_group_table(out, *results.type_valence, "Issue type vs Valence");
    if (results.dominance_time) append_group_table(out, *results.dominance_time, "Resolution time vs Dominance");

    if (results.summary) {
        const auto& s = *results.summary;
        out += fmt::format("Per-issue average, Arousal on Valence ({} points, {} skipped)\n", s.points.size(),
                           s.skipped);
        if (s.linear) out += fmt::format("  linear    R^2 = {:.4f}\n", s.linear->r_squared);
        if (s.quadratic) out += fmt::format("  quadratic R^2 = {:.4f}\n", s.quadratic->r_squared);
        append_notices(out, s.notices);
        out += '\n';
    }

    if (results.first_last) {
        const auto& t = *results.first_last;
        out += fmt::format("First vs last comment (paired; {} comparisons, adjusted alpha {})\n", t.comparisons,
                           num(t.adjusted_alpha));
        out += fmt::format("  {:<3}", "");
        for (auto s : kScopes) out += fmt::format(" | {:>21}", to_string(s));
        out += '\n';
        for (std::size_t d = 0; d < 3; ++d) {
            out += fmt::format("  {:<3}", dimension_letter(kDimensions[d]));
            for (std::size_t s = 0; s < kScopes.size(); ++s) {
                const auto& cell = t.cells[d][s];
                if (!cell.result) {
                    out += fmt::format(" | {:>21}", "insufficient");
                    continue;
                }
                out += fmt::format(" | p {:.2e}{} d {:>6.3f}", cell.result->p, cell.result->significant ? "*" : " ",
                                   cell.result->d);
            }
            out += '\n';
        }
        out += "  issues included/excluded:";
        for (std::size_t s = 0; s < kScopes.size(); ++s)
            out += fmt::format(" {} {}/{}", to_string(kScopes[s]), t.included[s], t.excluded[s]);
        out += '\n';
        append_notices(out, t.notices);
        out += '\n';
    }

    if (results.resolution_model) {
        const auto& r = *results.resolution_model;
        out += fmt::format("Resolution time model: {} rows ({} Long), skipped {} unresolved, {} incomplete\n",
                           r.rows, r.long_count, r.skipped_unresolved, r.skipped_incomplete);
        if (r.empty()) out += "  empty\n";
        if (r.zero_r)
            out += fmt::format("  {:<10} Long P {:.3f} R {:.3f} F1 {:.3f}  AUC {:.3f}\n", "ZeroR",
                               r.zero_r->long_class.precision, r.zero_r->long_class.recall, r.zero_r->long_class.f1,
                               r.zero_r->auc);
        for (const auto& stage : r.stages) {
            if (stage.skipped) {
                out += fmt::format("  {:<10} skipped\n", stage.name);
                continue;
            }
            if (!stage.cv) continue;
            const auto& cv = *stage.cv;
            out += fmt::format("  {:<10} Long P {:.3f} R {:.3f} F1 {:.3f}  AUC {:.3f}  ({} features)\n", stage.name,
                               cv.long_class.precision, cv.long_class.recall, cv.long_class.f1, cv.auc,
                               stage.columns.size());
        }
        for (const auto& lr : r.lr_tests)
            out += fmt::format("  LR test {} -> {}: df {}, p {:.3e}\n", lr.reduced, lr.full, lr.df, lr.p);
        if (!r.impacts.empty()) out += "  impact sizes of the pruned model:\n";
        for (const auto& e : r.impacts) out += fmt::format("    {:<24} {:+8.2f}%\n", e.feature, e.impact);
        append_notices(out, r.notices);
        out += '\n';
    }

    if (results.sign_table) {
        const auto& t = *results.sign_table;
        out += fmt::format("Sign table (linear regressions, p < {})\n", num(kSignTableLevel));
        out += fmt::format("  {:<24}", "");
        for (const auto& c : t.columns) out += fmt::format(" {:>10}", column_label(c));
        out += '\n';
        for (std::size_t row = 0; row < t.rows.size(); ++row) {
            out += fmt::format("  {:<24}", t.rows[row]);
            for (char cell : t.cells[row]) out += fmt::format(" {:>10}", cell);
            out += '\n';
        }
        out += "  rows per column:";
        for (const auto& c : t.columns) out += fmt::format(" {}", c.n);
        out += '\n';
        append_notices(out, t.notices);
        out += '\n';
    }
    return out;
}

} // namespace vadminer
