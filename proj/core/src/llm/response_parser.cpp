#include "zsbench/llm/response_parser.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "zsbench/util.hpp"

namespace zsbench::llm {

ParseDiagnostics& ParseDiagnostics::operator+=(const ParseDiagnostics& o) {
  extraneous_text_stripped += o.extraneous_text_stripped;
  missing_index += o.missing_index;
  extra_index += o.extra_index;
  unknown_label += o.unknown_label;
  repaired_by_case_fold += o.repaired_by_case_fold;
  return *this;
}

nlohmann::json to_json(const ParseDiagnostics& d) {
  return {{"extraneous_text_stripped", d.extraneous_text_stripped},
          {"missing_index", d.missing_index},
          {"extra_index", d.extra_index},
          {"unknown_label", d.unknown_label},
          {"repaired_by_case_fold", d.repaired_by_case_fold}};
}

std::string_view to_string(ParseStatus status) {
  switch (status) {
    case ParseStatus::ok:
      return "ok";
    case ParseStatus::no_json_object:
      return "no_json_object";
    case ParseStatus::not_an_object:
      return "not_an_object";
    case ParseStatus::no_resolvable_entries:
      return "no_resolvable_entries";
  }
  return "unknown";
}

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool only_blank(std::string_view s) { return std::all_of(s.begin(), s.end(), is_blank); }

// End (one past '}') of the balanced object opening at `start`, or npos.
std::size_t balanced_end(std::string_view s, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

struct Entry {
  std::string key;
  std::string value;
  bool value_is_text = true;  // false for nested objects/arrays/literals
};

// Recursive-descent reader for the loose object grammar.
class LooseObjectReader {
 public:
  explicit LooseObjectReader(std::string_view s) : s_(s) {}

  std::optional<std::vector<Entry>> read() {
    skip_blank();
    if (!eat('{')) return std::nullopt;
    std::vector<Entry> entries;
    skip_blank();
    if (eat('}')) return finish(entries);
    for (;;) {
      skip_blank();
      if (peek() == '}') {  // trailing comma
        ++pos_;
        return finish(entries);
      }
      Entry e;
      auto key = read_token(":");
      if (!key) return std::nullopt;
      e.key = std::move(key->first);
      skip_blank();
      if (!eat(':')) return std::nullopt;
      skip_blank();
      if (peek() == '{' || peek() == '[') {
        auto nested = read_nested();
        if (!nested) return std::nullopt;
        e.value = std::move(*nested);
        e.value_is_text = false;
      } else {
        auto value = read_token(",}");
        if (!value) return std::nullopt;
        e.value = std::move(value->first);
        e.value_is_text = value->second || !is_literal(e.value);
      }
      entries.push_back(std::move(e));
      skip_blank();
      if (eat(',')) continue;
      if (eat('}')) return finish(entries);
      return std::nullopt;
    }
  }

 private:
  std::optional<std::vector<Entry>> finish(std::vector<Entry>& entries) {
    skip_blank();
    if (pos_ != s_.size()) return std::nullopt;
    return std::move(entries);
  }

  static bool is_literal(std::string_view v) {
    if (v == "true" || v == "false" || v == "null") return true;
    double d = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    return ec == std::errc() && ptr == v.data() + v.size() && !v.empty();
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool eat(char c) {
    if (peek() != c || pos_ >= s_.size()) return false;
    ++pos_;
    return true;
  }
  void skip_blank() {
    while (pos_ < s_.size() && is_blank(s_[pos_])) ++pos_;
  }

  // Quoted string (double or single) or bare text up to one of `stops`.
  // Returns the text and whether it was quoted.
  std::optional<std::pair<std::string, bool>> read_token(std::string_view stops) {
    const char q = peek();
    if (q == '"' || q == '\'') {
      const std::size_t begin = pos_;
      std::string raw;
      ++pos_;
      for (;;) {
        if (pos_ >= s_.size()) return std::nullopt;
        const char c = s_[pos_++];
        if (c == '\\' && pos_ < s_.size()) {
          raw += c;
          raw += s_[pos_++];
        } else if (c == q) {
          break;
        } else {
          raw += c;
        }
      }
      if (q == '"') {
        try {
          return std::pair{nlohmann::json::parse(s_.substr(begin, pos_ - begin)).get<std::string>(), true};
        } catch (const nlohmann::json::exception&) {
          return std::pair{raw, true};
        }
      }
      std::string unescaped;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '\\' && i + 1 < raw.size()) ++i;
        unescaped += raw[i];
      }
      return std::pair{unescaped, true};
    }
    const std::size_t begin = pos_;
    while (pos_ < s_.size() && stops.find(s_[pos_]) == std::string_view::npos && s_[pos_] != '{' &&
           s_[pos_] != '[') {
      ++pos_;
    }
    std::string bare = trim(s_.substr(begin, pos_ - begin));
    if (bare.empty()) return std::nullopt;
    return std::pair{bare, false};
  }

  std::optional<std::string> read_nested() {
    const std::size_t begin = pos_;
    int depth = 0;
    bool in_string = false;
    for (; pos_ < s_.size(); ++pos_) {
      const char c = s_[pos_];
      if (in_string) {
        if (c == '\\') {
          ++pos_;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{' || c == '[') {
        ++depth;
      } else if (c == '}' || c == ']') {
        if (--depth == 0) {
          ++pos_;
          return std::string(s_.substr(begin, pos_ - begin));
        }
      }
    }
    return std::nullopt;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<int> parse_index(std::string_view key) {
  const std::string k = trim(key);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), value);
  if (ec != std::errc() || ptr != k.data() + k.size() || k.empty()) return std::nullopt;
  return value;
}

ParsedLabels all_missing(ParseStatus status, std::span<const int> batch_indices) {
  ParsedLabels out;
  out.status = status;
  out.missing.assign(batch_indices.begin(), batch_indices.end());
  out.diagnostics.missing_index = batch_indices.size();
  return out;
}

}  // namespace

std::optional<ExtractedPayload> extract_json_payload(std::string_view raw) {
  for (std::size_t start = raw.find('{'); start != std::string_view::npos; start = raw.find('{', start + 1)) {
    const std::size_t end = balanced_end(raw, start);
    if (end == std::string_view::npos) continue;
    ExtractedPayload out;
    out.text = std::string(raw.substr(start, end - start));
    out.stripped_prose = !only_blank(raw.substr(0, start)) || !only_blank(raw.substr(end));
    return out;
  }
  return std::nullopt;
}

ParsedLabels resolve_labels(std::string_view payload, std::span<const int> batch_indices,
                            const LabelSchema& schema) {
  auto entries = LooseObjectReader(payload).read();
  if (!entries) return all_missing(ParseStatus::not_an_object, batch_indices);

  ParsedLabels out;
  const std::set<int> batch(batch_indices.begin(), batch_indices.end());
  std::set<int> seen;
  for (const auto& entry : *entries) {
    const auto index = parse_index(entry.key);
    if (!index || !batch.contains(*index) || !seen.insert(*index).second) {
      ++out.diagnostics.extra_index;
      continue;
    }
    std::optional<LabelId> label;
    if (entry.value_is_text) {
      label = schema.find_exact(entry.value);
      if (!label) {
        label = schema.find(entry.value);
        if (label) ++out.diagnostics.repaired_by_case_fold;
      }
    }
    if (label) {
      out.resolved.emplace(*index, *label);
    } else {
      ++out.diagnostics.unknown_label;
      out.unknown_labels.emplace(*index, entry.value);
    }
  }
  for (int index : batch_indices) {
    if (!out.resolved.contains(index)) out.missing.push_back(index);
    if (!seen.contains(index)) ++out.diagnostics.missing_index;
  }
  if (out.resolved.empty()) out.status = ParseStatus::no_resolvable_entries;
  return out;
}

ParsedLabels parse_response(std::string_view raw, std::span<const int> batch_indices,
                            const LabelSchema& schema) {
  const auto extracted = extract_json_payload(raw);
  if (!extracted) return all_missing(ParseStatus::no_json_object, batch_indices);
  ParsedLabels out = resolve_labels(extracted->text, batch_indices, schema);
  if (extracted->stripped_prose) out.diagnostics.extraneous_text_stripped = 1;
  return out;
}

nlohmann::json to_json(const ParsedLabels& parsed, const LabelSchema& schema) {
  nlohmann::json resolved = nlohmann::json::object();
  for (const auto& [index, label] : parsed.resolved) resolved[std::to_string(index)] = schema.name(label);
  nlohmann::json unknown = nlohmann::json::object();
  for (const auto& [index, text] : parsed.unknown_labels) unknown[std::to_string(index)] = text;
  return {{"status", to_string(parsed.status)},
          {"resolved", resolved},
          {"missing", parsed.missing},
          {"unknown_labels", unknown},
          {"diagnostics", to_json(parsed.diagnostics)}};
}

}  // namespace zsbench::llm
