#include "zsbench/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_set>

#include <json.hpp>

#include "csv.hpp"
#include "zsbench/errors.hpp"
#include "zsbench/util.hpp"

namespace zsbench {

LabelSchema::LabelSchema(std::string task_name, std::vector<std::string> labels)
    : task_name_(std::move(task_name)), labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw DatasetError("label schema '" + task_name_ + "' needs at least 2 labels");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    const std::string folded = fold_label(label);
    if (folded.empty()) throw DatasetError("label schema contains an empty label");
    if (!seen.insert(folded).second) {
      throw DatasetError("duplicate label after case-folding: '" + label + "'");
    }
  }
}

std::optional<LabelId> LabelSchema::find_exact(std::string_view label) const {
  for (LabelId i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::optional<LabelId> LabelSchema::find(std::string_view label) const {
  const std::string folded = fold_label(label);
  for (LabelId i = 0; i < labels_.size(); ++i) {
    if (fold_label(labels_[i]) == folded) return i;
  }
  return std::nullopt;
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) {
  if (name == "csv") return CorpusFormat::csv;
  if (name == "jsonl") return CorpusFormat::jsonl;
  return std::nullopt;
}

std::string_view to_string(CorpusFormat format) {
  return format == CorpusFormat::csv ? "csv" : "jsonl";
}

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

void add_document(LabeledCorpus& corpus, std::size_t line, std::string text,
                  const std::optional<std::string>& raw_label) {
  if (trim(text).empty()) throw DatasetError(at_line(line) + "malformed record: empty text");
  Document doc;
  doc.id = corpus.documents.size();
  doc.text = std::move(text);
  if (raw_label) {
    doc.gold = corpus.schema.find(*raw_label);
    if (!doc.gold) {
      throw DatasetError(at_line(line) + "unknown label '" + *raw_label + "'");
    }
  }
  corpus.documents.push_back(std::move(doc));
}

void load_csv(std::istream& in, LabeledCorpus& corpus, std::string_view text_field,
              std::string_view label_field) {
  detail::CsvReader reader(in);
  auto header = reader.next();
  if (!header) throw DatasetError("line 1: malformed record: missing CSV header");
  if (!header->empty() && header->front().starts_with("\xEF\xBB\xBF")) {
    header->front().erase(0, 3);
  }
  const auto column = [&](std::string_view field) -> std::size_t {
    const auto it = std::find_if(header->begin(), header->end(),
                                 [&](const std::string& h) { return trim(h) == field; });
    if (it == header->end()) {
      throw DatasetError(at_line(1) + "malformed record: header has no field '" +
                         std::string(field) + "'");
    }
    return static_cast<std::size_t>(it - header->begin());
  };
  const std::size_t text_col = column(text_field);
  const std::optional<std::size_t> label_col =
      label_field.empty() ? std::nullopt : std::optional(column(label_field));

  while (auto record = reader.next()) {
    const std::size_t line = reader.record_line();
    if (record->size() == 1 && record->front().empty()) continue;  // blank line
    if (record->size() != header->size()) {
      throw DatasetError(at_line(line) + "malformed record: expected " +
                         std::to_string(header->size()) + " fields, found " +
                         std::to_string(record->size()));
    }
    std::optional<std::string> label;
    if (label_col) label = (*record)[*label_col];
    add_document(corpus, line, std::move((*record)[text_col]), label);
  }
}

void load_jsonl(std::istream& in, LabeledCorpus& corpus, std::string_view text_field,
                std::string_view label_field) {
  std::string line_text;
  std::size_t line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    if (!line_text.empty() && line_text.back() == '\r') line_text.pop_back();
    if (trim(line_text).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError(at_line(line) + "malformed record: " + e.what());
    }
    if (!record.is_object()) throw DatasetError(at_line(line) + "malformed record: not an object");
    const auto string_field = [&](std::string_view field) {
      const auto it = record.find(std::string(field));
      if (it == record.end() || !it->is_string()) {
        throw DatasetError(at_line(line) + "malformed record: missing string field '" +
                           std::string(field) + "'");
      }
      return it->get<std::string>();
    };
    std::string text = string_field(text_field);
    std::optional<std::string> label;
    if (!label_field.empty()) label = string_field(label_field);
    add_document(corpus, line, std::move(text), label);
  }
}

}  // namespace

LabeledCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                          std::string_view text_field, std::string_view label_field,
                          const LabelSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("file not found: " + path.string());
  LabeledCorpus corpus{schema, {}};
  try {
    if (format == CorpusFormat::csv) {
      load_csv(in, corpus, text_field, label_field);
    } else {
      load_jsonl(in, corpus, text_field, label_field);
    }
  } catch (const DatasetError& e) {
    throw DatasetError(path.string() + ": " + e.what());
  }
  return corpus;
}

__extension__ typedef unsigned __int128 u128;

std::vector<std::size_t> stratified_quotas(const std::vector<std::size_t>& class_counts,
                                           std::size_t test_size) {
  const std::size_t total = std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0});
  if (total == 0) throw DatasetError("cannot split an empty corpus");
  if (test_size > total) {
    throw DatasetError("test_size " + std::to_string(test_size) + " exceeds corpus size " +
                       std::to_string(total));
  }
  std::vector<std::size_t> quotas(class_counts.size());
  std::vector<std::size_t> remainders(class_counts.size());
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < class_counts.size(); ++c) {
    // Exact integer arithmetic: quota = floor(t * n_c / N), remainder kept for ranking.
    const u128 scaled = static_cast<u128>(test_size) * class_counts[c];
    quotas[c] = static_cast<std::size_t>(scaled / total);
    remainders[c] = static_cast<std::size_t>(scaled % total);
    assigned += quotas[c];
  }
  std::vector<std::size_t> order(class_counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < test_size; ++k) {
    ++quotas[order[k]];
    ++assigned;
  }
  for (std::size_t c = 0; c < quotas.size(); ++c) {
    if (quotas[c] > class_counts[c]) {
      throw DatasetError("class " + std::to_string(c) + " has too few documents for its quota");
    }
  }
  return quotas;
}

CorpusSplit stratified_split(const LabeledCorpus& corpus, std::size_t test_size,
                             std::uint64_t seed) {
  if (test_size == 0) throw DatasetError("test_size must be positive");
  const std::size_t k = corpus.schema.size();
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& gold = corpus.documents[i].gold;
    if (!gold) {
      throw DatasetError("document " + std::to_string(corpus.documents[i].id) +
                         " has no label; stratified split needs a labeled corpus");
    }
    members[*gold].push_back(i);
  }
  std::vector<std::size_t> counts(k);
  for (std::size_t c = 0; c < k; ++c) {
    if (members[c].empty()) {
      throw DatasetError("class '" + corpus.schema.name(c) + "' has zero documents");
    }
    counts[c] = members[c].size();
  }
  const auto quotas = stratified_quotas(counts, test_size);

  std::vector<bool> in_test(corpus.documents.size(), false);
  for (std::size_t c = 0; c < k; ++c) {
    // Per-class stream so adding documents to one class leaves the others' draws unchanged.
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(c + 1)));
    auto& m = members[c];
    // Partial Fisher-Yates: the first quota slots become the test members.
    for (std::size_t i = 0; i < quotas[c]; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (m.size() - i));
      std::swap(m[i], m[j]);
      in_test[m[i]] = true;
    }
  }

  CorpusSplit split{{corpus.schema, {}}, {corpus.schema, {}}};
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    (in_test[i] ? split.test : split.train).documents.push_back(corpus.documents[i]);
  }
  return split;
}

std::vector<std::size_t> class_distribution(const LabeledCorpus& corpus) {
  std::vector<std::size_t> counts(corpus.schema.size(), 0);
  for (const auto& doc : corpus.documents) {
    if (doc.gold) ++counts.at(*doc.gold);
  }
  return counts;
}

}  // namespace zsbench
