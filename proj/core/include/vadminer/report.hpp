#pragma once

#include "vadminer/analyses.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace vadminer {

/// Writes one CSV per computed table into `dir` (created if needed) plus
/// report.txt. Output is a pure function of `results`. Returns the files written.
std::vector<std::filesystem::path> write_report(const AnalysisResults& results,
                                                const std::filesystem::path& dir);

/// Human-readable rendering of every computed table.
std::string format_text_report(const AnalysisResults& results);

} // namespace vadminer
