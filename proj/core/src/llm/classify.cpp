#include "zsbench/llm/classify.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "zsbench/util.hpp"

namespace zsbench::llm {

nlohmann::json to_json(const GatewayDiagnostics& d) {
  return {{"requests", d.requests},
          {"reasks", d.reasks},
          {"transport_retries", d.transport_retries},
          {"invalid_predictions", d.invalid_predictions},
          {"empty_inputs", d.empty_inputs},
          {"parse", to_json(d.parse)}};
}

LabelId fallback_label(const Document& doc) {
  if (!doc.gold) return 0;
  return *doc.gold == 0 ? 1 : 0;
}

namespace {

struct BatchOutcome {
  std::map<int, LabelId> resolved;  // by 1-based index within the batch
  GatewayDiagnostics diagnostics;
};

class BatchRunner {
 public:
  BatchRunner(std::span<const Document> docs, const TaskDescription& task, const LlmRunConfig& config,
              ChatTransport& transport, const ClassifyOptions& options)
      : docs_(docs), task_(task), config_(config), transport_(transport), options_(options) {}

  BatchOutcome run(std::size_t batch) {
    const std::size_t begin = batch * config_.batch_size;
    const std::size_t end = std::min(docs_.size(), begin + config_.batch_size);
    std::vector<BatchItem> items;
    BatchOutcome out;
    for (std::size_t i = begin; i < end; ++i) {
      // Text emptied by cleaning is never sent; it ends up invalid.
      if (trim(docs_[i].text).empty()) {
        ++out.diagnostics.empty_inputs;
        continue;
      }
      items.push_back({static_cast<int>(i - begin + 1), docs_[i].text});
    }
    if (items.empty()) return out;

    ParsedLabels parsed = ask(batch, begin, items, "initial", out.diagnostics);
    out.resolved = parsed.resolved;
    if (!parsed.missing.empty()) {
      std::vector<BatchItem> retry_items;
      for (int index : parsed.missing) {
        for (const auto& item : items) {
          if (item.index == index) retry_items.push_back(item);
        }
      }
      ++out.diagnostics.reasks;
      const ParsedLabels reparsed = ask(batch, begin, retry_items, "reask", out.diagnostics);
      out.resolved.insert(reparsed.resolved.begin(), reparsed.resolved.end());
    }
    return out;
  }

 private:
  ParsedLabels ask(std::size_t batch, std::size_t begin, const std::vector<BatchItem>& items,
                   const char* phase, GatewayDiagnostics& diag) {
    const PromptBundle bundle = build_prompt(task_, items, config_.batch_size);
    std::vector<std::uint64_t> doc_ids;
    for (const auto& item : items) doc_ids.push_back(docs_[begin + item.index - 1].id);
    nlohmann::json record = {{"batch", batch}, {"phase", phase}, {"model", config_.model},
                             {"batch_indices", bundle.batch_indices}, {"doc_ids", doc_ids}};
    ++diag.requests;
    LlmResponse response;
    try {
      response = complete_chat(bundle, config_, transport_, options_.backoff);
    } catch (const ProviderError& e) {
      if (options_.audit) {
        record["request"] = build_request_body(bundle, config_);
        record["error"] = e.what();
        record["attempts"] = e.attempts();
        options_.audit->append(record);
      }
      throw;
    }
    diag.transport_retries += static_cast<std::size_t>(response.retries);
    ParsedLabels parsed = parse_response(response.raw_text, bundle.batch_indices, task_.schema);
    diag.parse += parsed.diagnostics;
    if (options_.audit) {
      record["request"] = response.request_body;
      put_raw_text(record, "raw_response", response.raw_text);
      record["http_status"] = response.http_status;
      record["retries"] = response.retries;
      record["latency_ms"] = std::chrono::duration<double, std::milli>(response.latency).count();
      record["response_model"] = response.model;
      if (response.prompt_tokens) record["prompt_tokens"] = *response.prompt_tokens;
      if (response.completion_tokens) record["completion_tokens"] = *response.completion_tokens;
      record["parsed"] = to_json(parsed, task_.schema);
      options_.audit->append(record);
    }
    return parsed;
  }

  std::span<const Document> docs_;
  const TaskDescription& task_;
  const LlmRunConfig& config_;
  ChatTransport& transport_;
  const ClassifyOptions& options_;
};

LlmClassification assemble(std::span<const Document> docs, std::size_t num_classes,
                           std::size_t batch_size, const std::vector<std::optional<BatchOutcome>>& outcomes) {
  LlmClassification result;
  for (std::size_t b = 0; b < outcomes.size(); ++b) {
    if (!outcomes[b]) break;  // stop at the first batch that did not complete
    const auto& outcome = *outcomes[b];
    const auto& d = outcome.diagnostics;
    result.diagnostics.requests += d.requests;
    result.diagnostics.reasks += d.reasks;
    result.diagnostics.transport_retries += d.transport_retries;
    result.diagnostics.empty_inputs += d.empty_inputs;
    result.diagnostics.parse += d.parse;
    const std::size_t begin = b * batch_size;
    const std::size_t end = std::min(docs.size(), begin + batch_size);
    for (std::size_t i = begin; i < end; ++i) {
      ScoredPrediction p;
      p.doc_id = docs[i].id;
      const auto it = outcome.resolved.find(static_cast<int>(i - begin + 1));
      if (it != outcome.resolved.end()) {
        p.label = it->second;
      } else {
        p.label = fallback_label(docs[i]);
        p.valid = false;
        ++result.diagnostics.invalid_predictions;
      }
      p.scores.assign(num_classes, 0.0);
      p.scores[p.label] = 1.0;
      result.predictions.push_back(std::move(p));
    }
  }
  return result;
}

}  // namespace

LlmClassification classify_corpus(std::span<const Document> docs, const TaskDescription& task,
                                  const LlmRunConfig& config, ChatTransport& transport,
                                  const ClassifyOptions& options) {
  config.validate();
  const std::size_t batches = (docs.size() + config.batch_size - 1) / config.batch_size;
  std::vector<std::optional<BatchOutcome>> outcomes(batches);
  BatchRunner runner(docs, task, config, transport, options);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex failure_mutex;
  std::optional<ProviderError> failure;
  // Anything else a transport throws; rethrown unchanged after the workers stop.
  std::exception_ptr other_failure;
  std::size_t failed_batch = batches;

  const auto worker = [&] {
    for (std::size_t b = next++; b < batches && !stop; b = next++) {
      try {
        outcomes[b] = runner.run(b);
      } catch (const ProviderError& e) {
        std::lock_guard lock(failure_mutex);
        stop = true;
        if (b < failed_batch) {
          failed_batch = b;
          failure.emplace(e);
          other_failure = nullptr;
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        stop = true;
        if (b < failed_batch) {
          failed_batch = b;
          failure.reset();
          other_failure = std::current_exception();
        }
      }
    }
  };

  const std::size_t workers = std::min(config.max_in_flight, std::max<std::size_t>(batches, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  LlmClassification result = assemble(docs, task.schema.size(), config.batch_size, outcomes);
  if (other_failure) std::rethrow_exception(other_failure);
  if (failure) throw ClassificationAborted(*failure, std::move(result));
  return result;
}

}  // namespace zsbench::llm
