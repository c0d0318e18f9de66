#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "zsbench/baselines.hpp"
#include "zsbench/dataset.hpp"
#include "zsbench/llm/audit_log.hpp"
#include "zsbench/llm/chat_client.hpp"
#include "zsbench/llm/prompt.hpp"
#include "zsbench/llm/response_parser.hpp"

namespace zsbench::llm {

struct GatewayDiagnostics {
  std::size_t requests = 0;
  std::size_t reasks = 0;
  std::size_t transport_retries = 0;
  std::size_t invalid_predictions = 0;
  /// Documents with blank text, never sent to the model.
  std::size_t empty_inputs = 0;
  ParseDiagnostics parse;
};

nlohmann::json to_json(const GatewayDiagnostics& d);

struct LlmClassification {
  /// One per input document, in input order. Label-only: scores are one-hot.
  std::vector<ScoredPrediction> predictions;
  GatewayDiagnostics diagnostics;
};

/// Thrown when a provider error ends a run; carries what completed before it.
class ClassificationAborted : public ProviderError {
 public:
  ClassificationAborted(const ProviderError& cause, LlmClassification partial)
      : ProviderError(cause.kind(), cause.attempts(), cause.what()), partial_(std::move(partial)) {}

  const LlmClassification& partial() const noexcept { return partial_; }

 private:
  LlmClassification partial_;
};

struct ClassifyOptions {
  BackoffPolicy backoff;
  AuditLog* audit = nullptr;
};

/// Label used for an item the model never answered usably: the first schema
/// label that differs from the gold label, so it always scores as incorrect.
LabelId fallback_label(const Document& doc);

/// Batches documents (1-based indices within each batch), sends up to
/// `max_in_flight` requests at once, re-asks once for unresolved items, and
/// marks anything still unresolved invalid with the fallback label.
LlmClassification classify_corpus(std::span<const Document> docs, const TaskDescription& task,
                                  const LlmRunConfig& config, ChatTransport& transport,
                                  const ClassifyOptions& options = {});

}  // namespace zsbench::llm
