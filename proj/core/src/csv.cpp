#include "csv.hpp"

#include "zsbench/errors.hpp"

namespace zsbench::detail {

std::optional<std::vector<std::string>> CsvReader::next() {
  int ch = in_.get();
  if (ch == std::char_traits<char>::eof()) return std::nullopt;

  record_line_ = line_;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;

  for (;; ch = in_.get()) {
    if (ch == std::char_traits<char>::eof()) {
      if (in_quotes) {
        throw DatasetError("line " + std::to_string(record_line_) +
                           ": unterminated quoted field");
      }
      fields.push_back(std::move(field));
      return fields;
    }
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line_;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_was_quoted) {
          in_quotes = true;
          field_was_quoted = true;
        } else {
          field += c;  // stray quote inside an unquoted field, kept verbatim
        }
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        break;
      case '\r':
        if (in_.peek() == '\n') break;
        [[fallthrough]];
      case '\n':
        ++line_;
        fields.push_back(std::move(field));
        return fields;
      default:
        field += c;
    }
  }
}

}  // namespace zsbench::detail
