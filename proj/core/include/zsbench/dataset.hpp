#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zsbench {

/// Position of a label inside its LabelSchema.
using LabelId = std::size_t;

/// The closed, ordered label set of a task. Order defines report row order.
class LabelSchema {
 public:
  LabelSchema() = default;
  /// Throws DatasetError on fewer than two labels, empty labels, or labels
  /// that collide after trim + case-fold.
  LabelSchema(std::string task_name, std::vector<std::string> labels);

  const std::string& task_name() const noexcept { return task_name_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& name(LabelId id) const { return labels_.at(id); }

  /// Exact match against the schema spelling.
  std::optional<LabelId> find_exact(std::string_view label) const;
  /// Match after trim + case-fold on both sides.
  std::optional<LabelId> find(std::string_view label) const;

  friend bool operator==(const LabelSchema&, const LabelSchema&) = default;

 private:
  std::string task_name_;
  std::vector<std::string> labels_;
};

struct Document {
  std::uint64_t id = 0;
  std::string text;
  std::optional<LabelId> gold;
};

struct LabeledCorpus {
  LabelSchema schema;
  std::vector<Document> documents;

  std::size_t size() const noexcept { return documents.size(); }
  bool empty() const noexcept { return documents.empty(); }
};

enum class CorpusFormat { csv, jsonl };

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);
std::string_view to_string(CorpusFormat format);

/// Loads a corpus, assigning ids 0..N-1 in file order. Labels are matched to
/// the schema after trim + case-fold. An empty `label_field` loads an
/// unlabeled corpus.
LabeledCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                          std::string_view text_field, std::string_view label_field,
                          const LabelSchema& schema);

struct CorpusSplit {
  LabeledCorpus train;
  LabeledCorpus test;
};

/// Fixed-size, class-proportional test split. Per-class quotas use
/// largest-remainder rounding with schema-order tie-breaks; members inside a
/// class are drawn by a seeded shuffle. Both halves are returned in id order.
CorpusSplit stratified_split(const LabeledCorpus& corpus, std::size_t test_size,
                             std::uint64_t seed);

/// Per-class quotas used by stratified_split, exposed for diagnostics.
std::vector<std::size_t> stratified_quotas(const std::vector<std::size_t>& class_counts,
                                           std::size_t test_size);

/// Count of documents per schema label, in schema order. Unlabeled documents
/// are not counted.
std::vector<std::size_t> class_distribution(const LabeledCorpus& corpus);

}  // namespace zsbench
