#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsbench/dataset.hpp"

namespace zsbench::llm {

/// What the prompt says about the task. Only the wording slots vary between
/// datasets; the sentence structure is fixed.
struct TaskDescription {
  LabelSchema schema;
  /// "doing {domain} classification", e.g. "e-commerce products".
  std::string domain;
  /// Singular and plural noun for one item, e.g. "product" / "products".
  std::string item = "text";
  std::string items = "texts";
  /// Where the items come from, e.g. "the e-commerce website".
  std::string source = "the dataset";
  /// Label shown in the output example; empty means the first schema label.
  std::string example_label;

  /// The four-category product task with its canonical wording.
  static TaskDescription ecommerce();

  const std::string& example() const {
    return example_label.empty() ? schema.labels().front() : example_label;
  }
};

void to_json(nlohmann::json& j, const TaskDescription& t);
/// Schema is supplied by the caller; only wording fields are read from `j`.
TaskDescription task_from_json(const nlohmann::json& j, LabelSchema schema);

struct BatchItem {
  int index = 0;
  std::string text;
};

struct PromptBundle {
  std::string system_instruction;
  /// One "index. text" line per batch item.
  std::string user_payload;
  std::vector<int> batch_indices;
};

/// The instruction text alone. Pure function of the task.
std::string build_instruction(const TaskDescription& task);

/// Newlines inside item text are folded to spaces so each item stays on its
/// own payload line. Throws std::invalid_argument on an empty batch, an
/// empty text, or a batch larger than `max_batch_size` (0 = unlimited).
PromptBundle build_prompt(const TaskDescription& task, std::span<const BatchItem> batch,
                          std::size_t max_batch_size = 0);

}  // namespace zsbench::llm
