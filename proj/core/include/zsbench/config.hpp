#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "zsbench/baselines.hpp"
#include "zsbench/dataset.hpp"
#include "zsbench/features.hpp"
#include "zsbench/llm/chat_client.hpp"
#include "zsbench/llm/mock_transport.hpp"
#include "zsbench/llm/prompt.hpp"
#include "zsbench/preprocess.hpp"

namespace zsbench {

struct DatasetSpec {
  std::string path;
  CorpusFormat format = CorpusFormat::csv;
  std::string text_field = "text";
  std::string label_field = "label";
  /// Label schema plus prompt wording.
  llm::TaskDescription task;

  const LabelSchema& schema() const noexcept { return task.schema; }
};

struct SplitSpec {
  std::size_t test_size = 150;
  std::uint64_t seed = 42;
};

struct MnbSpec {
  double alpha = 1.0;
};

struct KnnSpec {
  std::size_t k = 5;
};

enum class ProviderKind { openai, mock };

struct ProviderSpec {
  ProviderKind kind = ProviderKind::openai;
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  /// Name of the environment variable holding the bearer token.
  std::string api_key_env = "OPENAI_API_KEY";
  // mock only
  llm::KeywordRules rules;
  bool wrap_in_prose = false;
};

/// Which text an LLM predictor receives.
enum class TextInput { raw, clean };

struct LlmSpec {
  llm::LlmRunConfig run;
  ProviderSpec provider;
  TextInput input = TextInput::raw;
};

using PredictorParams = std::variant<MnbSpec, LogRegHyper, KnnSpec, TreeParams, ForestParams, LlmSpec>;

struct PredictorSpec {
  std::string name;
  PredictorParams params;

  bool is_llm() const noexcept { return std::holds_alternative<LlmSpec>(params); }
  /// "mnb", "logreg", "knn", "dt", "rf" or "llm".
  std::string_view type() const noexcept;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DatasetSpec dataset;
  SplitSpec split;
  /// Cleaning applied before the traditional baselines.
  CleaningPolicy preprocess;
  VectorizerParams features;
  /// Cleaning applied to LLM input when a predictor or the ablation asks for clean text.
  CleaningPolicy llm_clean_policy = CleaningPolicy::tweet_cleaning();
  /// Run every LLM predictor on both the original and the cleaned text.
  bool ablation = false;
  std::size_t repeat_count = 5;
  std::string output_dir = "runs";
  std::vector<PredictorSpec> predictors;

  /// Relative dataset/output paths resolve against this. Not serialized.
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& path) const;
};

/// Parses, fills defaults and validates. Errors are ConfigError with a JSON
/// pointer locating the problem.
ExperimentConfig validate_config(std::string_view text, const std::filesystem::path& base_dir = {});
/// Reads a config file; relative paths resolve against the file's directory.
ExperimentConfig load_config(const std::filesystem::path& file);

/// Full config with every default spelled out.
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace zsbench
