#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zsbench/experiment.hpp"

namespace zsbench {

enum class ReportFormat { json, markdown };

std::optional<ReportFormat> parse_report_format(std::string_view name);

/// Full-precision JSON. Throws Error on a result with no predictors.
std::string render_json(const ExperimentResult& result);
/// ACC / F1 / AUC table grouped into traditional ML and LLM rows; "-" marks
/// a metric the predictor cannot provide. Throws Error on an empty result.
std::string render_markdown(const ExperimentResult& result);
std::string render(const ExperimentResult& result, ReportFormat format);

/// Writes report.json or report.md into `dir` and returns the file written.
std::filesystem::path emit_report(const ExperimentResult& result, ReportFormat format,
                                  const std::filesystem::path& dir);

/// Reads report.json (and manifest.json when present) back from a run directory.
ExperimentResult load_run(const std::filesystem::path& run_dir);

}  // namespace zsbench
