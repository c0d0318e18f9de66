#include "zsbench/llm/audit_log.hpp"

#include <stdexcept>
#include <string>

#include "zsbench/errors.hpp"
#include "zsbench/llm/response_parser.hpp"
#include "zsbench/util.hpp"

namespace zsbench::llm {

AuditLog::AuditLog(const std::filesystem::path& path) : path_(path) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw Error("cannot open audit log " + path_.string());
}

void AuditLog::append(const nlohmann::json& record) {
  const std::string line = dump_json(record);
  std::lock_guard lock(mutex_);
  out_ << line << '\n';
  out_.flush();
}

void put_raw_text(nlohmann::json& record, const std::string& key, const std::string& raw) {
  if (is_valid_utf8(raw)) {
    record[key] = raw;
  } else {
    record[key + "_base64"] = base64_encode(raw);
  }
}

std::string get_raw_text(const nlohmann::json& record, const std::string& key) {
  if (const auto it = record.find(key); it != record.end()) return it->get<std::string>();
  if (const auto it = record.find(key + "_base64"); it != record.end()) {
    return base64_decode(it->get<std::string>());
  }
  throw Error("audit record has no '" + key + "'");
}

std::vector<nlohmann::json> read_audit_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open audit log " + path.string());
  std::vector<nlohmann::json> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(nlohmann::json::parse(line));
  }
  return records;
}

ReplaySummary replay_audit_log(const std::filesystem::path& path, const LabelSchema& schema) {
  ReplaySummary summary;
  for (const auto& record : read_audit_log(path)) {
    if (!record.contains("parsed")) continue;
    ++summary.responses;
    const auto indices = record.at("batch_indices").get<std::vector<int>>();
    const auto replayed = parse_response(get_raw_text(record, "raw_response"), indices, schema);
    // Round-trip through the same serializer the log used.
    if (nlohmann::json::parse(dump_json(to_json(replayed, schema))) != record.at("parsed")) {
      ++summary.mismatches;
    }
  }
  return summary;
}

}  // namespace zsbench::llm
