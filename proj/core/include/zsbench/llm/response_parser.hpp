#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zsbench/dataset.hpp"

namespace zsbench::llm {

/// Counters describing what had to be tolerated or repaired in a response.
struct ParseDiagnostics {
  std::size_t extraneous_text_stripped = 0;
  /// Batch indices absent from the payload.
  std::size_t missing_index = 0;
  /// Entries whose key is not a batch index (including non-integer keys and
  /// repeated keys).
  std::size_t extra_index = 0;
  /// Entries for a batch index whose label matches no schema label.
  std::size_t unknown_label = 0;
  /// Labels matched only after trim + case-fold.
  std::size_t repaired_by_case_fold = 0;

  ParseDiagnostics& operator+=(const ParseDiagnostics& o);
  friend bool operator==(const ParseDiagnostics&, const ParseDiagnostics&) = default;
};

nlohmann::json to_json(const ParseDiagnostics& d);

enum class ParseStatus {
  ok,
  no_json_object,         // no balanced {...} region in the response
  not_an_object,          // the region is not a key/value object
  no_resolvable_entries,  // an object, but nothing resolved to a schema label
};

std::string_view to_string(ParseStatus status);

struct ExtractedPayload {
  std::string text;
  bool stripped_prose = false;
};

/// First balanced top-level {...} region, honouring quoted strings and
/// escapes. nullopt when none exists (e.g. a truncated object).
std::optional<ExtractedPayload> extract_json_payload(std::string_view raw);

struct ParsedLabels {
  ParseStatus status = ParseStatus::ok;
  /// batch index -> schema label
  std::map<int, LabelId> resolved;
  /// Batch indices without a resolved label, for any reason. Always
  /// |resolved| + |missing| == |batch_indices|.
  std::vector<int> missing;
  ParseDiagnostics diagnostics;
  /// Raw label text for entries that named no schema label.
  std::map<int, std::string> unknown_labels;

  friend bool operator==(const ParsedLabels&, const ParsedLabels&) = default;
};

/// Accepts strict JSON as well as the loose forms models produce: unquoted
/// or single-quoted keys and values ({1: Household}), integer values quoted
/// or not, trailing commas. Labels are matched by trim + case-fold and never
/// guessed beyond that.
ParsedLabels resolve_labels(std::string_view payload, std::span<const int> batch_indices,
                            const LabelSchema& schema);

/// extract_json_payload followed by resolve_labels. Total: never throws on any input.
ParsedLabels parse_response(std::string_view raw, std::span<const int> batch_indices,
                            const LabelSchema& schema);

nlohmann::json to_json(const ParsedLabels& parsed, const LabelSchema& schema);

}  // namespace zsbench::llm
