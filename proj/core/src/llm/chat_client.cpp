#include "zsbench/llm/chat_client.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "zsbench/util.hpp"

namespace zsbench::llm {

void LlmRunConfig::validate() const {
  if (model.empty()) throw std::invalid_argument("model name must not be empty");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw std::invalid_argument("top_p must be in (0, 1]");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be positive");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (!(timeout_seconds > 0.0)) throw std::invalid_argument("timeout_seconds must be positive");
  if (repeat_count < 1) throw std::invalid_argument("repeat_count must be positive");
  if (max_in_flight < 1) throw std::invalid_argument("max_in_flight must be positive");
}

void to_json(nlohmann::json& j, const LlmRunConfig& c) {
  j = {{"model", c.model},
       {"temperature", c.temperature},
       {"top_p", c.top_p},
       {"batch_size", c.batch_size},
       {"max_retries", c.max_retries},
       {"timeout_seconds", c.timeout_seconds},
       {"repeat_count", c.repeat_count},
       {"max_in_flight", c.max_in_flight},
       {"seed", c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr)}};
}

void from_json(const nlohmann::json& j, LlmRunConfig& c) {
  if (!j.is_object()) throw std::invalid_argument("LLM run config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "model") {
      c.model = value.get<std::string>();
    } else if (key == "temperature") {
      c.temperature = value.get<double>();
    } else if (key == "top_p") {
      c.top_p = value.get<double>();
    } else if (key == "batch_size") {
      c.batch_size = value.get<std::size_t>();
    } else if (key == "max_retries") {
      c.max_retries = value.get<int>();
    } else if (key == "timeout_seconds") {
      c.timeout_seconds = value.get<double>();
    } else if (key == "repeat_count") {
      c.repeat_count = value.get<std::size_t>();
    } else if (key == "max_in_flight") {
      c.max_in_flight = value.get<std::size_t>();
    } else if (key == "seed") {
      if (value.is_null()) {
        c.seed.reset();
      } else {
        c.seed = value.get<std::int64_t>();
      }
    } else {
      throw std::invalid_argument("unknown LLM setting '" + key + "'");
    }
  }
  c.validate();
}

double BackoffPolicy::delay_seconds(int retry, double u) const {
  const double raw = base_seconds * std::pow(factor, retry - 1) * (1.0 + jitter * u);
  return std::min(raw, max_delay_seconds);
}

std::string build_request_body(const PromptBundle& bundle, const LlmRunConfig& config) {
  nlohmann::json body = {
      {"model", config.model},
      {"messages",
       {{{"role", "system"}, {"content", bundle.system_instruction}},
        {{"role", "user"}, {"content", bundle.user_payload}}}},
      {"temperature", config.temperature},
      {"top_p", config.top_p},
  };
  if (config.seed) body["seed"] = *config.seed;
  return dump_json(body);
}

namespace {

LlmResponse decode_success(const HttpReply& reply, int attempts) {
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(reply.body);
  } catch (const nlohmann::json::exception& e) {
    throw ProviderError(ProviderError::Kind::bad_response, attempts,
                        std::string("response body is not JSON: ") + e.what());
  }
  LlmResponse out;
  try {
    const auto& message = body.at("choices").at(0).at("message");
    const auto& content = message.at("content");
    out.raw_text = content.is_string() ? content.get<std::string>() : content.dump();
  } catch (const nlohmann::json::exception&) {
    throw ProviderError(ProviderError::Kind::bad_response, attempts,
                        "response has no choices[0].message.content");
  }
  out.model = body.value("model", std::string{});
  if (const auto usage = body.find("usage"); usage != body.end() && usage->is_object()) {
    if (usage->contains("prompt_tokens") && (*usage)["prompt_tokens"].is_number_integer()) {
      out.prompt_tokens = (*usage)["prompt_tokens"].get<std::int64_t>();
    }
    if (usage->contains("completion_tokens") && (*usage)["completion_tokens"].is_number_integer()) {
      out.completion_tokens = (*usage)["completion_tokens"].get<std::int64_t>();
    }
  }
  return out;
}

std::string describe_failure(const HttpReply& reply) {
  switch (reply.transport) {
    case HttpReply::Transport::network_error:
      return "network error: " + reply.error;
    case HttpReply::Transport::timeout:
      return "timeout: " + reply.error;
    case HttpReply::Transport::ok:
      break;
  }
  std::string body = reply.body.substr(0, 200);
  return "HTTP " + std::to_string(reply.status) + (body.empty() ? "" : ": " + body);
}

}  // namespace

LlmResponse complete_chat(const PromptBundle& bundle, const LlmRunConfig& config,
                          ChatTransport& transport, const BackoffPolicy& backoff) {
  const std::string request = build_request_body(bundle, config);
  std::mt19937_64 jitter_rng(splitmix64(backoff.jitter_seed ^ std::hash<std::string>{}(request)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto started = std::chrono::steady_clock::now();
  HttpReply last;
  for (int attempt = 0;; ++attempt) {
    last = transport.post(request);
    if (last.transport == HttpReply::Transport::ok) {
      if (last.status >= 200 && last.status < 300) {
        LlmResponse out = decode_success(last, attempt + 1);
        out.latency = std::chrono::steady_clock::now() - started;
        out.retries = attempt;
        out.http_status = last.status;
        out.request_body = request;
        return out;
      }
      if (last.status == 401 || last.status == 403) {
        throw ProviderError(ProviderError::Kind::authentication, attempt + 1,
                            "authentication failed (" + describe_failure(last) + ")");
      }
      const bool retryable = last.status == 429 || last.status >= 500;
      if (!retryable) {
        throw ProviderError(ProviderError::Kind::client, attempt + 1,
                            "request rejected (" + describe_failure(last) + ")");
      }
    }
    if (attempt >= config.max_retries) break;
    const double delay = backoff.delay_seconds(attempt + 1, unit(jitter_rng));
    if (backoff.sleep) {
      backoff.sleep(std::chrono::duration<double>(delay));
    } else {
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
  }
  const auto kind = last.transport == HttpReply::Transport::timeout ? ProviderError::Kind::timeout
                                                                    : ProviderError::Kind::exhausted;
  throw ProviderError(kind, config.max_retries + 1,
                      "gave up after " + std::to_string(config.max_retries + 1) + " attempts (" +
                          describe_failure(last) + ")");
}

}  // namespace zsbench::llm
