#pragma once

#include <stdexcept>
#include <string>

namespace zsbench {

/// Base class for every error raised by the harness.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Corpus ingestion, schema validation and splitting failures.
class DatasetError : public Error {
 public:
  using Error::Error;
};

/// Vectorizer fitting and classifier training failures.
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Invalid inputs to a metric (length mismatch, unknown label, empty matrix).
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration errors. `where` is a JSON pointer into the config.
class ConfigError : public Error {
 public:
  ConfigError(std::string where, const std::string& message)
      : Error(where.empty() ? message : where + ": " + message), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace zsbench
