#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace zsbench {

std::string trim(std::string_view s);
std::string ascii_lower(std::string_view s);

/// Trim, then lowercase. Used wherever labels are compared loosely.
std::string fold_label(std::string_view s);

bool is_valid_utf8(std::string_view s);
std::string base64_encode(std::string_view bytes);
/// Throws std::invalid_argument on malformed input.
std::string base64_decode(std::string_view text);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

/// Deterministic 64-bit mixer, used to derive independent RNG seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Serializes with invalid UTF-8 replaced instead of throwing.
std::string dump_json(const nlohmann::json& j, int indent = -1);

/// UTC timestamp, ISO-8601 with seconds precision ("2024-01-31T12:00:00Z").
std::string utc_timestamp();

}  // namespace zsbench
