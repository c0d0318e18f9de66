#pragma once

#include <deque>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "zsbench/dataset.hpp"
#include "zsbench/llm/chat_client.hpp"

namespace zsbench::llm {

/// Wraps assistant text in an OpenAI-style chat-completions response body.
std::string make_completion_body(std::string_view content, std::string_view model = "mock");

/// Pulls (index, text) items back out of a request body's "i. text" lines.
std::vector<BatchItem> parse_user_payload(std::string_view payload);

/// Replays a fixed sequence of replies and records every request.
class ScriptedTransport final : public ChatTransport {
 public:
  explicit ScriptedTransport(std::vector<HttpReply> replies) : replies_(replies.begin(), replies.end()) {}

  /// A transport that answers every request with `content`, status 200.
  static ScriptedTransport canned(std::string_view content, std::size_t times = 1);

  HttpReply post(const std::string& request_body) override;
  std::string describe() const override { return "scripted"; }

  std::vector<std::string> requests() const;

 private:
  mutable std::mutex mutex_;
  std::deque<HttpReply> replies_;
  std::vector<std::string> requests_;
};

struct KeywordRule {
  std::string label;
  std::vector<std::string> keywords;
};

/// Offline deterministic classifier: the first rule (in order) with a keyword
/// occurring in the lowercased text wins, otherwise `default_label`.
struct KeywordRules {
  std::vector<KeywordRule> rules;
  std::string default_label;

  const std::string& classify(std::string_view text) const;
};

/// Mock chat endpoint answering with KeywordRules, optionally wrapping the JSON
/// in conversational prose.
class KeywordRuleTransport final : public ChatTransport {
 public:
  explicit KeywordRuleTransport(KeywordRules rules, bool wrap_in_prose = false)
      : rules_(std::move(rules)), wrap_in_prose_(wrap_in_prose) {}

  HttpReply post(const std::string& request_body) override;
  std::string describe() const override { return "mock:keyword-rules"; }

 private:
  KeywordRules rules_;
  bool wrap_in_prose_;
};

}  // namespace zsbench::llm
