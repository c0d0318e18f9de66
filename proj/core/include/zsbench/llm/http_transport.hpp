#pragma once

#include <string>

#include "zsbench/llm/chat_client.hpp"

namespace zsbench::llm {

/// OpenAI-compatible chat-completions endpoint over HTTP(S) with bearer auth.
class HttpChatTransport final : public ChatTransport {
 public:
  /// `base_url` like "https://api.openai.com"; `path` like "/v1/chat/completions".
  HttpChatTransport(std::string base_url, std::string path, std::string api_key,
                    double timeout_seconds);

  /// Reads the key from `env_var`. Throws ProviderError(authentication) when unset.
  static HttpChatTransport from_environment(std::string base_url, std::string path,
                                            const std::string& env_var, double timeout_seconds);

  HttpReply post(const std::string& request_body) override;
  std::string describe() const override { return base_url_ + path_; }

 private:
  std::string base_url_;
  std::string path_;
  std::string api_key_;
  double timeout_seconds_;
};

}  // namespace zsbench::llm
