#include "zsbench/llm/mock_transport.hpp"

#include <charconv>

#include "zsbench/util.hpp"

namespace zsbench::llm {

std::string make_completion_body(std::string_view content, std::string_view model) {
  const nlohmann::json body = {
      {"id", "mock-completion"},
      {"object", "chat.completion"},
      {"model", model},
      {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}, {"finish_reason", "stop"}}}},
  };
  return dump_json(body);
}

std::vector<BatchItem> parse_user_payload(std::string_view payload) {
  std::vector<BatchItem> items;
  std::size_t pos = 0;
  while (pos < payload.size()) {
    std::size_t end = payload.find('\n', pos);
    if (end == std::string_view::npos) end = payload.size();
    const std::string_view line = payload.substr(pos, end - pos);
    const std::size_t dot = line.find(". ");
    int index = 0;
    if (dot != std::string_view::npos) {
      const auto [ptr, ec] = std::from_chars(line.data(), line.data() + dot, index);
      if (ec == std::errc() && ptr == line.data() + dot) {
        items.push_back({index, std::string(line.substr(dot + 2))});
      }
    }
    pos = end + 1;
  }
  return items;
}

ScriptedTransport ScriptedTransport::canned(std::string_view content, std::size_t times) {
  std::vector<HttpReply> replies(times, HttpReply{HttpReply::Transport::ok, 200, make_completion_body(content), {}});
  return ScriptedTransport(std::move(replies));
}

HttpReply ScriptedTransport::post(const std::string& request_body) {
  std::lock_guard lock(mutex_);
  requests_.push_back(request_body);
  if (replies_.empty()) return {HttpReply::Transport::network_error, 0, {}, "script exhausted"};
  HttpReply reply = std::move(replies_.front());
  replies_.pop_front();
  return reply;
}

std::vector<std::string> ScriptedTransport::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

const std::string& KeywordRules::classify(std::string_view text) const {
  const std::string lowered = ascii_lower(text);
  for (const auto& rule : rules) {
    for (const auto& keyword : rule.keywords) {
      if (!keyword.empty() && lowered.find(ascii_lower(keyword)) != std::string::npos) return rule.label;
    }
  }
  return default_label;
}

HttpReply KeywordRuleTransport::post(const std::string& request_body) {
  std::string payload;
  try {
    const auto body = nlohmann::json::parse(request_body);
    payload = body.at("messages").at(1).at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    return {HttpReply::Transport::ok, 400, std::string("bad request: ") + e.what(), {}};
  }
  nlohmann::json answer = nlohmann::json::object();
  for (const auto& item : parse_user_payload(payload)) {
    answer[std::to_string(item.index)] = rules_.classify(item.text);
  }
  std::string content = dump_json(answer);
  if (wrap_in_prose_) content = "Sure! Here are the categories:\n" + content + "\nLet me know if you need anything else.";
  return {HttpReply::Transport::ok, 200, make_completion_body(content, "mock-keyword"), {}};
}

}  // namespace zsbench::llm
