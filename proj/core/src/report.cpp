#include "zsbench/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "zsbench/errors.hpp"
#include "zsbench/util.hpp"

namespace zsbench {

namespace fs = std::filesystem;

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  const std::string n = ascii_lower(trim(name));
  if (n == "json") return ReportFormat::json;
  if (n == "md" || n == "markdown") return ReportFormat::markdown;
  return std::nullopt;
}

namespace {

void require_content(const ExperimentResult& result) {
  if (result.predictors.empty()) throw Error("nothing to report: the result has no predictors");
}

std::string cell(const PredictorResult& r, std::string_view metric) {
  if (!r.ok) return "failed";
  const RunAggregate* a = r.aggregate(metric);
  return a ? a->format(4) : "-";
}

std::string escape_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += (c == '\n' ? ' ' : c);
  }
  return out;
}

void table_group(std::ostringstream& md, const ExperimentResult& result, PredictorCategory category,
                 std::string_view heading) {
  bool any = false;
  for (const auto& r : result.predictors) any = any || r.category == category;
  if (!any) return;
  md << "| **" << heading << "** | | | |\n";
  for (const auto& r : result.predictors) {
    if (r.category != category) continue;
    md << "| " << escape_cell(r.name) << " | " << cell(r, "acc") << " | " << cell(r, "macro_f1") << " | "
       << cell(r, "auc") << " |\n";
  }
}

void ablation_table(std::ostringstream& md, const ExperimentResult& result) {
  std::vector<std::string> models;
  for (const auto& r : result.predictors) {
    if (!r.variant.empty() && std::find(models.begin(), models.end(), r.predictor) == models.end()) {
      models.push_back(r.predictor);
    }
  }
  if (models.empty()) return;
  md << "\n## Original vs clean text (ACC)\n\n| Text |";
  for (const auto& m : models) md << ' ' << escape_cell(m) << " |";
  md << "\n|:--|";
  for (std::size_t i = 0; i < models.size(); ++i) md << ":-:|";
  md << '\n';
  for (const auto& [variant, title] : {std::pair{"original", "Original Text"}, std::pair{"clean", "Clean Text"}}) {
    md << "| " << title << " |";
    for (const auto& m : models) {
      std::string value = "-";
      for (const auto& r : result.predictors) {
        if (r.predictor == m && r.variant == variant) value = cell(r, "acc");
      }
      md << ' ' << value << " |";
    }
    md << '\n';
  }
}

}  // namespace

std::string render_json(const ExperimentResult& result) {
  require_content(result);
  return dump_json(to_json(result), 2) + "\n";
}

std::string render_markdown(const ExperimentResult& result) {
  require_content(result);
  const auto& labels = result.schema.labels();
  std::ostringstream md;
  md << "# " << result.experiment << "\n\n";
  md << "Task: " << result.schema.task_name() << ". Training documents: " << result.train_size
     << ". Test documents: " << result.test_ids.size();
  if (result.test_distribution.size() == labels.size()) {
    md << " (";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      md << (i ? ", " : "") << labels[i] << ": " << result.test_distribution[i];
    }
    md << ")";
  }
  md << ".\n\n";

  md << "| Model | ACC | F1 | AUC |\n|:--|:-:|:-:|:-:|\n";
  table_group(md, result, PredictorCategory::traditional_ml, "Traditional ML");
  table_group(md, result, PredictorCategory::llm, "LLM");

  if (result.ablation) ablation_table(md, result);

  md << "\n## MCC\n\n| Model | MCC | Runs | Invalid predictions |\n|:--|:-:|:-:|:-:|\n";
  for (const auto& r : result.predictors) {
    std::size_t invalid = 0;
    for (const auto& rep : r.runs) invalid += rep.n_invalid_predictions;
    md << "| " << escape_cell(r.name) << " | " << cell(r, "mcc") << " | " << r.runs.size() << " | " << invalid
       << " |\n";
  }

  bool failures = false;
  for (const auto& r : result.predictors) failures = failures || !r.ok;
  if (failures) {
    md << "\n## Failures\n\n";
    for (const auto& r : result.predictors) {
      if (!r.ok) md << "- " << r.name << ": " << escape_cell(r.error) << '\n';
    }
  }

  md << "\n## Confusion matrices\n\nRows are true labels, columns predicted labels";
  md << " (first run for repeated predictors).\n";
  for (const auto& r : result.predictors) {
    if (!r.ok || r.runs.empty()) continue;
    const auto& cm = r.runs.front().confusion;
    md << "\n### " << r.name << "\n\n| |";
    for (const auto& l : labels) md << ' ' << escape_cell(l) << " |";
    md << "\n|:--|";
    for (std::size_t i = 0; i < labels.size(); ++i) md << "--:|";
    md << '\n';
    for (std::size_t t = 0; t < cm.classes(); ++t) {
      md << "| " << escape_cell(labels[t]) << " |";
      for (std::size_t p = 0; p < cm.classes(); ++p) md << ' ' << cm.at(t, p) << " |";
      md << '\n';
    }
  }
  return md.str();
}

std::string render(const ExperimentResult& result, ReportFormat format) {
  return format == ReportFormat::json ? render_json(result) : render_markdown(result);
}

fs::path emit_report(const ExperimentResult& result, ReportFormat format, const fs::path& dir) {
  // Render first so an empty result never leaves a file behind.
  const std::string text = render(result, format);
  const fs::path path = dir / (format == ReportFormat::json ? "report.json" : "report.md");
  fs::create_directories(dir);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw Error("write failed for " + path.string());
  return path;
}

ExperimentResult load_run(const fs::path& run_dir) {
  const fs::path report = run_dir / "report.json";
  std::ifstream in(report, std::ios::binary);
  if (!in) throw Error("no report.json in " + run_dir.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(report.string() + ": " + e.what());
  }
  ExperimentResult result = experiment_result_from_json(j);
  result.run_dir = run_dir;
  std::ifstream manifest(run_dir / "manifest.json", std::ios::binary);
  if (manifest) {
    try {
      result.manifest = nlohmann::json::parse(manifest);
    } catch (const nlohmann::json::parse_error&) {
      // the report is still usable without it
    }
  }
  return result;
}

}  // namespace zsbench
