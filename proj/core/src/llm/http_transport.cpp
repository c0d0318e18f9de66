#include "zsbench/llm/http_transport.hpp"

#include <chrono>
#include <cstdlib>

#include <httplib.h>

namespace zsbench::llm {

HttpChatTransport::HttpChatTransport(std::string base_url, std::string path, std::string api_key,
                                     double timeout_seconds)
    : base_url_(std::move(base_url)),
      path_(std::move(path)),
      api_key_(std::move(api_key)),
      timeout_seconds_(timeout_seconds) {}

HttpChatTransport HttpChatTransport::from_environment(std::string base_url, std::string path,
                                                      const std::string& env_var,
                                                      double timeout_seconds) {
  const char* key = std::getenv(env_var.c_str());
  if (key == nullptr || *key == '\0') {
    throw ProviderError(ProviderError::Kind::authentication, 0,
                        "API key environment variable " + env_var + " is not set");
  }
  return HttpChatTransport(std::move(base_url), std::move(path), key, timeout_seconds);
}

HttpReply HttpChatTransport::post(const std::string& request_body) {
  // One client per request: httplib clients are not meant to be shared across threads.
  httplib::Client client(base_url_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(timeout_seconds_));
  const auto secs = static_cast<time_t>(timeout.count() / 1000000);
  const auto usecs = static_cast<time_t>(timeout.count() % 1000000);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  client.set_bearer_token_auth(api_key_);

  const auto started = std::chrono::steady_clock::now();
  auto result = client.Post(path_, request_body, "application/json");
  HttpReply reply;
  if (!result) {
    const auto err = result.error();
    const bool timed_out =
        err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read &&
         std::chrono::steady_clock::now() - started >= std::chrono::duration<double>(timeout_seconds_));
    reply.transport = timed_out ? HttpReply::Transport::timeout : HttpReply::Transport::network_error;
    reply.error = httplib::to_string(err);
    return reply;
  }
  reply.status = result->status;
  reply.body = result->body;
  return reply;
}

}  // namespace zsbench::llm
