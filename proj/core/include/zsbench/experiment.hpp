#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsbench/config.hpp"
#include "zsbench/llm/chat_client.hpp"
#include "zsbench/metrics.hpp"

namespace zsbench {

enum class PredictorCategory { traditional_ml, llm };

std::string_view to_string(PredictorCategory category);

/// Outcome for one rostered predictor (or one ablation variant of an LLM predictor).
struct PredictorResult {
  /// Display name; ablation variants carry a " (original)" / " (clean)" suffix.
  std::string name;
  /// Roster entry this came from.
  std::string predictor;
  std::string type;
  PredictorCategory category = PredictorCategory::traditional_ml;
  /// "original" or "clean" for ablation runs, empty otherwise.
  std::string variant;

  bool ok = false;
  std::string error;

  /// One report per run: a single one for baselines, repeat_count for LLMs.
  std::vector<EvalReport> runs;
  /// acc / macro_f1 / mcc over runs (plus auc when every run has one).
  std::vector<RunAggregate> aggregates;
  /// Test document ids this predictor produced predictions for.
  std::vector<std::uint64_t> test_ids;
  nlohmann::json diagnostics = nlohmann::json::object();

  const RunAggregate* aggregate(std::string_view metric) const;
};

struct ExperimentResult {
  std::string experiment;
  LabelSchema schema;
  std::size_t train_size = 0;
  std::vector<std::uint64_t> test_ids;
  std::vector<std::size_t> test_distribution;
  bool ablation = false;
  std::vector<PredictorResult> predictors;

  /// Config hash, versions, timestamps. Kept out of report.json.
  nlohmann::json manifest = nlohmann::json::object();
  /// Where artifacts were written; empty when nothing was written.
  std::filesystem::path run_dir;
};

nlohmann::json to_json(const ExperimentResult& result);
ExperimentResult experiment_result_from_json(const nlohmann::json& j);

using TransportFactory =
    std::function<std::unique_ptr<llm::ChatTransport>(const PredictorSpec&, const LlmSpec&)>;

struct RunOptions {
  /// Overrides how chat transports are built (tests, offline runs). The
  /// default makes an HTTP client for openai and a keyword-rule mock for mock.
  TransportFactory transport_factory;
  llm::BackoffPolicy backoff;
  bool write_artifacts = true;
  /// Overrides config.output_dir when set.
  std::filesystem::path output_dir;
};

/// Default transport for a predictor's provider. The API key comes from the
/// environment variable the provider names.
std::unique_ptr<llm::ChatTransport> make_transport(const PredictorSpec& spec, const LlmSpec& llm);

/// Loads and splits the dataset once, then runs every predictor on the same
/// test ids. Predictor failures are recorded per predictor; dataset errors throw.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace zsbench
