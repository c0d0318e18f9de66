#include <doctest.h>

#include "test_support.hpp"
#include "zsbench/config.hpp"
#include "zsbench/errors.hpp"

using namespace zsbench;

namespace {

const char* kMinimal = R"({
  "dataset": {"path": "data.csv", "labels": ["spam", "ham"]},
  "predictors": [{"name": "MNB"}]
})";

std::string where_of(const std::string& text) {
  try {
    validate_config(text);
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "<accepted>";
}

std::string with_predictor(const std::string& predictor) {
  return R"({"dataset": {"path": "d.csv", "labels": ["spam", "ham"]}, "predictors": [)" + predictor + "]}";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = validate_config(kMinimal);
  CHECK(c.split.test_size == 150);
  CHECK(c.split.seed == 42);
  CHECK(c.repeat_count == 5);
  CHECK_FALSE(c.ablation);
  REQUIRE(c.predictors.size() == 1);
  CHECK(c.predictors[0].name == "MNB");
  CHECK(c.predictors[0].type() == "mnb");
  CHECK(std::get<MnbSpec>(c.predictors[0].params).alpha == doctest::Approx(1.0));
  CHECK(c.dataset.schema().labels() == std::vector<std::string>{"spam", "ham"});
}

TEST_CASE("unknown predictor is located") {
  CHECK(where_of(with_predictor(R"({"name": "SVM"})")) == "/predictors/0/name");
  CHECK(where_of(with_predictor(R"({"name": "x", "type": "svm"})")) == "/predictors/0/type");
  try {
    validate_config(with_predictor(R"({"name": "SVM"})"));
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unknown predictor 'SVM'") != std::string::npos);
  }
}

TEST_CASE("llm settings") {
  const auto c = validate_config(with_predictor(R"({"name": "GPT-3.5", "type": "llm", "model": "gpt-3.5-turbo",
                                                     "temperature": 0.01, "top_p": 0.9})"));
  const auto& llm = std::get<LlmSpec>(c.predictors[0].params);
  CHECK(llm.run.temperature == doctest::Approx(0.01));
  CHECK(llm.run.top_p == doctest::Approx(0.9));
  CHECK(llm.run.repeat_count == 5);
  CHECK(llm.provider.kind == ProviderKind::openai);
  CHECK(llm.provider.api_key_env == "OPENAI_API_KEY");

  CHECK(where_of(with_predictor(R"({"type": "llm", "model": "m", "top_p": 1.5})")) == "/predictors/0/top_p");
  CHECK(where_of(with_predictor(R"({"type": "llm"})")) == "/predictors/0/model");
}

TEST_CASE("inline api keys are refused") {
  CHECK(where_of(with_predictor(R"({"type": "llm", "model": "m", "provider": {"api_key": "sk-123"}})")) ==
        "/predictors/0/provider/api_key");
  CHECK(where_of(R"({"api_key": "x", "dataset": {"path": "d", "labels": ["a", "b"]}, "predictors": []})") ==
        "/api_key");
}

TEST_CASE("mock labels must match the dataset") {
  CHECK(where_of(with_predictor(
            R"({"type": "llm", "model": "m", "provider": {"kind": "mock", "default_label": "Spam"}})")) ==
        "/predictors/0/provider/default_label");
  CHECK(where_of(with_predictor(
            R"({"type": "llm", "model": "m", "provider": {"kind": "mock", "rules": [{"label": "eggs", "keywords": ["x"]}]}})")) ==
        "/predictors/0/provider/rules/0/label");
}

TEST_CASE("structural errors") {
  CHECK(where_of(R"({"dataset": {"labels": ["a", "b"]}, "predictors": []})") == "/dataset/path");
  CHECK(where_of(R"({"predictors": []})") == "/dataset");
  CHECK(where_of(R"({"dataset": {"path": "d", "labels": ["a", "b"]}, "predictors": [], "colour": 1})") == "/colour");
  CHECK(where_of(R"({"dataset": {"path": "d", "labels": ["a", "a"]}, "predictors": []})") == "/dataset/labels");
  CHECK(where_of(with_predictor(R"({"name": "MNB"}, {"name": "MNB"})")) == "/predictors/1/name");
  CHECK(where_of(with_predictor(R"({"type": "knn", "k": 0})")) == "/predictors/0/k");
  CHECK(where_of("{not json") == "");
}

TEST_CASE("serialized config round-trips") {
  const auto first = validate_config(testsupport::read_file(testsupport::data_dir() / "ecommerce_experiment.json"));
  const auto j = to_json(first);
  const auto second = validate_config(j.dump());
  CHECK(to_json(second) == j);
  CHECK(second.predictors.size() == 6);
  CHECK(std::get<ForestParams>(second.predictors[4].params).n_trees == 100);
}

TEST_CASE("load_config resolves paths next to the file") {
  const auto c = load_config(testsupport::data_dir() / "ecommerce_experiment.json");
  CHECK(c.resolve(c.dataset.path) == testsupport::data_dir() / "ecommerce_200.csv");
  CHECK_THROWS_AS(load_config(testsupport::data_dir() / "does_not_exist.json"), Error);
}
