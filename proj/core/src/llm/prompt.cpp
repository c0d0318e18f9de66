#include "zsbench/llm/prompt.hpp"

#include <stdexcept>

namespace zsbench::llm {

TaskDescription TaskDescription::ecommerce() {
  TaskDescription t;
  t.schema = LabelSchema("e-commerce", {"Household", "Books", "Clothing & Accessories", "Electronics"});
  t.domain = "e-commerce products";
  t.item = "product";
  t.items = "products";
  t.source = "the e-commerce website";
  return t;
}

void to_json(nlohmann::json& j, const TaskDescription& t) {
  j = {{"domain", t.domain}, {"item", t.item},           {"items", t.items},
       {"source", t.source}, {"example_label", t.example()}};
}

TaskDescription task_from_json(const nlohmann::json& j, LabelSchema schema) {
  TaskDescription t;
  t.domain = schema.task_name();
  t.schema = std::move(schema);
  if (j.is_null()) return t;
  t.domain = j.value("domain", t.domain);
  t.item = j.value("item", t.item);
  t.items = j.value("items", t.items);
  t.source = j.value("source", t.source);
  t.example_label = j.value("example_label", std::string{});
  if (!t.example_label.empty() && !t.schema.find_exact(t.example_label)) {
    throw std::invalid_argument("example_label '" + t.example_label + "' is not a schema label");
  }
  return t;
}

std::string build_instruction(const TaskDescription& task) {
  const std::string count = std::to_string(task.schema.size());
  std::string labels;
  for (const auto& label : task.schema.labels()) {
    if (!labels.empty()) labels += ", ";
    labels += label;
  }
  std::string s;
  s += "You are an AI assistant and you are very good at doing " + task.domain + " classification. ";
  s += "You are going to help a customer to classify the " + task.items + " in " + task.source + ". ";
  s += "You are only allowed to choose one of the following " + count + " categories: " + labels + ". ";
  s += "Please provide only one category for each " + task.item +
       " in JSON format where the key is the index for each " + task.item +
       " and the value is one of the " + count + " categories. ";
  s += "For example: {1: " + task.example() + "}. ";
  s += "Please do not repeat or return the content back again, just provide the category in the "
       "defined format.";
  return s;
}

PromptBundle build_prompt(const TaskDescription& task, std::span<const BatchItem> batch,
                          std::size_t max_batch_size) {
  if (batch.empty()) throw std::invalid_argument("cannot build a prompt for an empty batch");
  if (max_batch_size != 0 && batch.size() > max_batch_size) {
    throw std::invalid_argument("batch of " + std::to_string(batch.size()) +
                                " exceeds batch_size " + std::to_string(max_batch_size));
  }
  PromptBundle bundle;
  bundle.system_instruction = build_instruction(task);
  for (const auto& item : batch) {
    if (item.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw std::invalid_argument("batch item " + std::to_string(item.index) + " has empty text");
    }
    std::string text = item.text;
    for (char& c : text) {
      if (c == '\n' || c == '\r') c = ' ';
    }
    if (!bundle.user_payload.empty()) bundle.user_payload += '\n';
    bundle.user_payload += std::to_string(item.index) + ". " + text;
    bundle.batch_indices.push_back(item.index);
  }
  return bundle;
}

}  // namespace zsbench::llm
