#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace zsbench::detail {

/// RFC-4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Reads the next record. Returns nullopt at end of input. Throws
  /// DatasetError on an unterminated quoted field.
  std::optional<std::vector<std::string>> next();

  /// 1-based line on which the last returned record started.
  std::size_t record_line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

}  // namespace zsbench::detail
