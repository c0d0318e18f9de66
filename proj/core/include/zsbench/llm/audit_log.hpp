#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <vector>

#include <json.hpp>

#include "zsbench/dataset.hpp"

namespace zsbench::llm {

/// Append-only JSONL record of every request/response. Appends are
/// serialized; each line is flushed as it is written.
class AuditLog {
 public:
  explicit AuditLog(const std::filesystem::path& path);

  void append(const nlohmann::json& record);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
  std::ofstream out_;
};

/// Stores `raw` under `key`, or base64 under `key + "_base64"` when it is not UTF-8.
void put_raw_text(nlohmann::json& record, const std::string& key, const std::string& raw);
/// Inverse of put_raw_text.
std::string get_raw_text(const nlohmann::json& record, const std::string& key);

std::vector<nlohmann::json> read_audit_log(const std::filesystem::path& path);

struct ReplaySummary {
  std::size_t responses = 0;
  std::size_t mismatches = 0;
};

/// Re-parses every logged raw response and compares with the logged parse.
ReplaySummary replay_audit_log(const std::filesystem::path& path, const LabelSchema& schema);

}  // namespace zsbench::llm
