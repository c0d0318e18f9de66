#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "zsbench/errors.hpp"
#include "zsbench/llm/prompt.hpp"

namespace zsbench::llm {

/// Sampling and transport settings for one LLM predictor.
struct LlmRunConfig {
  std::string model;
  double temperature = 0.01;
  double top_p = 0.9;
  std::size_t batch_size = 25;
  int max_retries = 5;
  double timeout_seconds = 120.0;
  std::size_t repeat_count = 5;
  /// Concurrent requests per classification run.
  std::size_t max_in_flight = 4;
  /// Sent as the request "seed" field when set.
  std::optional<std::int64_t> seed;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

void to_json(nlohmann::json& j, const LlmRunConfig& c);
/// Missing keys keep their defaults; unknown keys and out-of-range values throw.
void from_json(const nlohmann::json& j, LlmRunConfig& c);

/// Result of one HTTP exchange as seen by the retry loop.
struct HttpReply {
  enum class Transport { ok, network_error, timeout };
  Transport transport = Transport::ok;
  int status = 0;
  std::string body;
  std::string error;
};

/// Something that can POST a chat-completions request body. Implementations
/// must be safe to call from several threads at once.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual HttpReply post(const std::string& request_body) = 0;
  virtual std::string describe() const = 0;
};

class ProviderError : public Error {
 public:
  enum class Kind { authentication, client, exhausted, timeout, bad_response };

  ProviderError(Kind kind, int attempts, const std::string& message)
      : Error(message), kind_(kind), attempts_(attempts) {}

  Kind kind() const noexcept { return kind_; }
  int attempts() const noexcept { return attempts_; }
  bool retryable() const noexcept { return kind_ == Kind::exhausted || kind_ == Kind::timeout; }

 private:
  Kind kind_;
  int attempts_;
};

/// Exponential backoff: delay(n) = base * factor^(n-1) * (1 + jitter * u),
/// u uniform in [0, 1), capped at max_delay. `sleep` is injectable for tests.
struct BackoffPolicy {
  double base_seconds = 1.0;
  double factor = 2.0;
  double jitter = 0.25;
  double max_delay_seconds = 60.0;
  std::uint64_t jitter_seed = 0;
  std::function<void(std::chrono::duration<double>)> sleep;

  /// Delay before retry number `retry` (1-based) given a uniform draw `u`.
  double delay_seconds(int retry, double u) const;
};

struct LlmResponse {
  std::string raw_text;
  std::chrono::duration<double> latency{};
  std::string model;
  std::optional<std::int64_t> prompt_tokens;
  std::optional<std::int64_t> completion_tokens;
  int retries = 0;
  int http_status = 0;
  std::string request_body;
};

/// {model, messages: [system, user], temperature, top_p[, seed]}, serialized
/// with sorted keys so identical prompts give identical bytes.
std::string build_request_body(const PromptBundle& bundle, const LlmRunConfig& config);

/// Sends the request, retrying transport failures, HTTP 429 and 5xx with
/// exponential backoff. 401/403 fail immediately as authentication errors;
/// other 4xx fail immediately as client errors.
LlmResponse complete_chat(const PromptBundle& bundle, const LlmRunConfig& config,
                          ChatTransport& transport, const BackoffPolicy& backoff = {});

}  // namespace zsbench::llm
