#include "zsbench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "zsbench/errors.hpp"
#include "zsbench/util.hpp"

namespace zsbench {

using nlohmann::json;

namespace {

std::string child(const std::string& ptr, std::string_view key) {
  // JSON pointer escaping
  std::string out = ptr + "/";
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

const char* type_name(const json& j) { return j.type_name(); }

/// Typed access to one JSON object with located errors.
class Obj {
 public:
  Obj(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {
    if (!j_.is_object()) throw ConfigError(ptr_.empty() ? "/" : ptr_, std::string("expected an object, got ") + type_name(j_));
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : j_.items()) {
      bool known = false;
      for (auto k : keys) known = known || k == key;
      if (!known) throw ConfigError(child(ptr_, key), "unknown setting '" + key + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const { return j_.at(key); }
  std::string at(const char* key) const { return child(ptr_, key); }
  const std::string& ptr() const noexcept { return ptr_; }

  std::string str(const char* key, std::string fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(at(key), std::string("expected a string, got ") + type_name(v));
    return v.get<std::string>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(at(key), std::string("expected true or false, got ") + type_name(v));
    return v.get<bool>();
  }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at(key), std::string("expected a number, got ") + type_name(v));
    return v.get<double>();
  }

  std::uint64_t count(const char* key, std::uint64_t fallback, std::uint64_t min = 0) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      const auto n = v.get<std::uint64_t>();
      if (n < min) throw ConfigError(at(key), "must be at least " + std::to_string(min));
      return n;
    }
    throw ConfigError(at(key), "expected a non-negative integer");
  }

 private:
  const json& j_;
  std::string ptr_;
};

/// Keys are never allowed to carry credentials.
void reject_inline_keys(const json& j, const std::string& ptr) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      const std::string folded = ascii_lower(key);
      if (folded == "api_key" || folded == "apikey" || folded == "authorization") {
        throw ConfigError(child(ptr, key),
                          "API keys are read from the environment only; name the variable with api_key_env");
      }
      reject_inline_keys(value, child(ptr, key));
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) reject_inline_keys(j[i], child(ptr, i));
  }
}

CleaningPolicy read_policy(const json& j, const std::string& ptr, CleaningPolicy base) {
  Obj o(j, ptr);
  o.allow({"remove_urls", "remove_html_tags", "remove_digits", "remove_hashtags", "remove_mentions",
           "remove_punctuation", "remove_stopwords", "apply_stemming"});
  base.remove_urls = o.boolean("remove_urls", base.remove_urls);
  base.remove_html_tags = o.boolean("remove_html_tags", base.remove_html_tags);
  base.remove_digits = o.boolean("remove_digits", base.remove_digits);
  base.remove_hashtags = o.boolean("remove_hashtags", base.remove_hashtags);
  base.remove_mentions = o.boolean("remove_mentions", base.remove_mentions);
  base.remove_punctuation = o.boolean("remove_punctuation", base.remove_punctuation);
  base.remove_stopwords = o.boolean("remove_stopwords", base.remove_stopwords);
  base.apply_stemming = o.boolean("apply_stemming", base.apply_stemming);
  return base;
}

DatasetSpec read_dataset(const json& j, const std::string& ptr, const std::string& experiment) {
  Obj o(j, ptr);
  o.allow({"path", "format", "text_field", "label_field", "task_name", "labels", "prompt"});
  DatasetSpec d;
  if (!o.has("path")) throw ConfigError(o.at("path"), "missing dataset path");
  d.path = o.str("path", "");
  if (trim(d.path).empty()) throw ConfigError(o.at("path"), "missing dataset path");

  const std::string format = o.str("format", "csv");
  const auto parsed = parse_corpus_format(format);
  if (!parsed) throw ConfigError(o.at("format"), "unknown format '" + format + "' (expected csv or jsonl)");
  d.format = *parsed;
  d.text_field = o.str("text_field", d.text_field);
  d.label_field = o.str("label_field", d.label_field);
  if (d.text_field.empty()) throw ConfigError(o.at("text_field"), "must not be empty");
  if (d.label_field.empty()) throw ConfigError(o.at("label_field"), "a labeled corpus is required");

  if (!o.has("labels")) throw ConfigError(o.at("labels"), "missing label list");
  const json& labels = o.raw("labels");
  if (!labels.is_array()) throw ConfigError(o.at("labels"), "expected an array of label names");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string()) throw ConfigError(child(o.at("labels"), i), "expected a string");
    names.push_back(labels[i].get<std::string>());
  }
  LabelSchema schema;
  try {
    schema = LabelSchema(o.str("task_name", experiment), std::move(names));
  } catch (const DatasetError& e) {
    throw ConfigError(o.at("labels"), e.what());
  }

  json prompt = json::object();
  if (o.has("prompt")) {
    Obj p(o.raw("prompt"), o.at("prompt"));
    p.allow({"domain", "item", "items", "source", "example_label"});
    for (const char* key : {"domain", "item", "items", "source", "example_label"}) {
      if (p.has(key)) prompt[key] = p.str(key, "");
    }
  }
  try {
    d.task = llm::task_from_json(prompt, std::move(schema));
  } catch (const std::exception& e) {
    throw ConfigError(child(o.at("prompt"), "example_label"), std::string("label mismatch: ") + e.what());
  }
  return d;
}

std::string canonical_type(std::string_view raw) {
  const std::string t = ascii_lower(trim(raw));
  if (t == "mnb" || t == "nb" || t == "naive_bayes" || t == "multinomial_nb") return "mnb";
  if (t == "logreg" || t == "lr" || t == "lg" || t == "logistic_regression") return "logreg";
  if (t == "knn") return "knn";
  if (t == "dt" || t == "decision_tree") return "dt";
  if (t == "rf" || t == "random_forest") return "rf";
  if (t == "llm") return "llm";
  return {};
}

std::string default_display_name(const std::string& type) {
  if (type == "logreg") return "LG";
  std::string upper = type;
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return upper;
}

void check_label(const LabelSchema& schema, const std::string& label, const std::string& where) {
  if (!schema.find_exact(label)) {
    throw ConfigError(where, "label mismatch: '" + label + "' is not one of the dataset labels");
  }
}

ProviderSpec read_provider(const json& j, const std::string& ptr, const LabelSchema& schema) {
  Obj o(j, ptr);
  ProviderSpec p;
  const std::string kind = o.str("kind", "openai");
  if (kind == "openai") {
    o.allow({"kind", "base_url", "path", "api_key_env"});
    p.kind = ProviderKind::openai;
    p.base_url = o.str("base_url", p.base_url);
    p.path = o.str("path", p.path);
    p.api_key_env = o.str("api_key_env", p.api_key_env);
    if (p.base_url.empty()) throw ConfigError(o.at("base_url"), "must not be empty");
    if (p.api_key_env.empty()) throw ConfigError(o.at("api_key_env"), "must name an environment variable");
    return p;
  }
  if (kind != "mock") throw ConfigError(o.at("kind"), "unknown provider '" + kind + "' (expected openai or mock)");
  o.allow({"kind", "rules", "default_label", "wrap_in_prose"});
  p.kind = ProviderKind::mock;
  p.api_key_env.clear();
  p.base_url.clear();
  p.path.clear();
  p.wrap_in_prose = o.boolean("wrap_in_prose", false);
  p.rules.default_label = o.str("default_label", schema.labels().front());
  check_label(schema, p.rules.default_label, o.at("default_label"));
  if (o.has("rules")) {
    const json& rules = o.raw("rules");
    if (!rules.is_array()) throw ConfigError(o.at("rules"), "expected an array of rules");
    for (std::size_t i = 0; i < rules.size(); ++i) {
      Obj r(rules[i], child(o.at("rules"), i));
      r.allow({"label", "keywords"});
      llm::KeywordRule rule;
      if (!r.has("label")) throw ConfigError(r.at("label"), "missing label");
      rule.label = r.str("label", "");
      check_label(schema, rule.label, r.at("label"));
      if (!r.has("keywords") || !r.raw("keywords").is_array()) {
        throw ConfigError(r.at("keywords"), "expected an array of keywords");
      }
      const json& kws = r.raw("keywords");
      for (std::size_t k = 0; k < kws.size(); ++k) {
        if (!kws[k].is_string() || kws[k].get<std::string>().empty()) {
          throw ConfigError(child(r.at("keywords"), k), "expected a non-empty string");
        }
        rule.keywords.push_back(kws[k].get<std::string>());
      }
      p.rules.rules.push_back(std::move(rule));
    }
  }
  return p;
}

PredictorSpec read_predictor(const json& j, const std::string& ptr, const LabelSchema& schema,
                             std::size_t repeat_count) {
  Obj o(j, ptr);
  PredictorSpec spec;
  std::string type;
  if (o.has("type")) {
    const std::string raw = o.str("type", "");
    type = canonical_type(raw);
    if (type.empty()) throw ConfigError(o.at("type"), "unknown predictor '" + raw + "'");
  } else if (o.has("name")) {
    const std::string raw = o.str("name", "");
    type = canonical_type(raw);
    if (type.empty()) throw ConfigError(o.at("name"), "unknown predictor '" + raw + "'");
  } else {
    throw ConfigError(o.at("type"), "predictor needs a type or a name");
  }
  spec.name = o.str("name", default_display_name(type));
  if (trim(spec.name).empty()) throw ConfigError(o.at("name"), "must not be empty");

  if (type == "mnb") {
    o.allow({"name", "type", "alpha"});
    MnbSpec p;
    p.alpha = o.number("alpha", p.alpha);
    if (!(p.alpha > 0.0)) throw ConfigError(o.at("alpha"), "must be positive");
    spec.params = p;
  } else if (type == "logreg") {
    o.allow({"name", "type", "learning_rate", "l2_lambda", "epochs", "batch_size", "seed"});
    LogRegHyper p;
    p.learning_rate = o.number("learning_rate", p.learning_rate);
    p.l2_lambda = o.number("l2_lambda", p.l2_lambda);
    p.epochs = o.count("epochs", p.epochs);
    p.batch_size = o.count("batch_size", p.batch_size);
    p.seed = o.count("seed", p.seed);
    if (!(p.learning_rate > 0.0)) throw ConfigError(o.at("learning_rate"), "must be positive");
    if (!(p.l2_lambda >= 0.0)) throw ConfigError(o.at("l2_lambda"), "must be non-negative");
    spec.params = p;
  } else if (type == "knn") {
    o.allow({"name", "type", "k"});
    KnnSpec p;
    p.k = o.count("k", p.k, 1);
    if (p.k % 2 == 0) throw ConfigError(o.at("k"), "must be odd");
    spec.params = p;
  } else if (type == "dt") {
    o.allow({"name", "type", "max_depth", "min_leaf"});
    TreeParams p;
    p.max_depth = o.count("max_depth", p.max_depth, 1);
    p.min_leaf = o.count("min_leaf", p.min_leaf, 1);
    spec.params = p;
  } else if (type == "rf") {
    o.allow({"name", "type", "n_trees", "max_depth", "min_leaf", "feature_subsample", "bootstrap", "seed",
             "threads"});
    ForestParams p;
    p.threads = 0;
    p.n_trees = o.count("n_trees", p.n_trees, 1);
    p.max_depth = o.count("max_depth", p.max_depth, 1);
    p.min_leaf = o.count("min_leaf", p.min_leaf, 1);
    const std::string sub = o.str("feature_subsample", "sqrt");
    if (sub == "sqrt") {
      p.feature_subsample = FeatureSubsample::sqrt;
    } else if (sub == "all") {
      p.feature_subsample = FeatureSubsample::all;
    } else {
      throw ConfigError(o.at("feature_subsample"), "expected sqrt or all");
    }
    p.bootstrap = o.boolean("bootstrap", p.bootstrap);
    p.seed = o.count("seed", p.seed);
    p.threads = o.count("threads", p.threads);
    spec.params = p;
  } else {
    o.allow({"name", "type", "model", "temperature", "top_p", "batch_size", "max_retries", "timeout_seconds",
             "repeat_count", "max_in_flight", "seed", "provider", "input"});
    LlmSpec p;
    p.run.repeat_count = repeat_count;
    json run = json::object();
    for (const char* key : {"model", "temperature", "top_p", "batch_size", "max_retries", "timeout_seconds",
                            "repeat_count", "max_in_flight", "seed"}) {
      if (o.has(key)) run[key] = o.raw(key);
    }
    if (!run.contains("model")) throw ConfigError(o.at("model"), "LLM predictor needs a model name");
    try {
      llm::from_json(run, p.run);
    } catch (const std::exception& e) {
      // Point at the offending key when the message names one.
      std::string where = o.ptr();
      for (const auto& [key, value] : run.items()) {
        if (std::string(e.what()).find(key) != std::string::npos) {
          where = o.at(key.c_str());
          break;
        }
      }
      throw ConfigError(where, e.what());
    }
    if (p.run.model.empty()) throw ConfigError(o.at("model"), "must not be empty");
    p.provider = o.has("provider") ? read_provider(o.raw("provider"), o.at("provider"), schema) : ProviderSpec{};
    const std::string input = o.str("input", "raw");
    if (input == "raw") {
      p.input = TextInput::raw;
    } else if (input == "clean") {
      p.input = TextInput::clean;
    } else {
      throw ConfigError(o.at("input"), "expected raw or clean");
    }
    spec.params = p;
  }
  return spec;
}

json provider_to_json(const ProviderSpec& p) {
  if (p.kind == ProviderKind::openai) {
    return {{"kind", "openai"}, {"base_url", p.base_url}, {"path", p.path}, {"api_key_env", p.api_key_env}};
  }
  json rules = json::array();
  for (const auto& r : p.rules.rules) rules.push_back({{"label", r.label}, {"keywords", r.keywords}});
  return {{"kind", "mock"},
          {"rules", rules},
          {"default_label", p.rules.default_label},
          {"wrap_in_prose", p.wrap_in_prose}};
}

json predictor_to_json(const PredictorSpec& spec) {
  json j = {{"name", spec.name}, {"type", std::string(spec.type())}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MnbSpec>) {
          j["alpha"] = p.alpha;
        } else if constexpr (std::is_same_v<T, LogRegHyper>) {
          j["learning_rate"] = p.learning_rate;
          j["l2_lambda"] = p.l2_lambda;
          j["epochs"] = p.epochs;
          j["batch_size"] = p.batch_size;
          j["seed"] = p.seed;
        } else if constexpr (std::is_same_v<T, KnnSpec>) {
          j["k"] = p.k;
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          j["max_depth"] = p.max_depth;
          j["min_leaf"] = p.min_leaf;
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          j["n_trees"] = p.n_trees;
          j["max_depth"] = p.max_depth;
          j["min_leaf"] = p.min_leaf;
          j["feature_subsample"] = p.feature_subsample == FeatureSubsample::sqrt ? "sqrt" : "all";
          j["bootstrap"] = p.bootstrap;
          j["seed"] = p.seed;
          j["threads"] = p.threads;
        } else {
          json run = p.run;
          j.update(run);
          j["provider"] = provider_to_json(p.provider);
          j["input"] = p.input == TextInput::raw ? "raw" : "clean";
        }
      },
      spec.params);
  return j;
}

}  // namespace

std::string_view PredictorSpec::type() const noexcept {
  switch (params.index()) {
    case 0: return "mnb";
    case 1: return "logreg";
    case 2: return "knn";
    case 3: return "dt";
    case 4: return "rf";
    default: return "llm";
  }
}

std::filesystem::path ExperimentConfig::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

ExperimentConfig validate_config(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("not valid JSON: ") + e.what());
  }
  reject_inline_keys(root, "");
  Obj o(root, "");
  o.allow({"name", "dataset", "split", "preprocess", "features", "llm_clean_policy", "ablation", "repeat_count",
           "output_dir", "predictors"});

  ExperimentConfig c;
  c.base_dir = base_dir;
  c.name = o.str("name", c.name);
  if (trim(c.name).empty()) throw ConfigError("/name", "must not be empty");
  if (!o.has("dataset")) throw ConfigError("/dataset", "missing dataset section");
  c.dataset = read_dataset(o.raw("dataset"), "/dataset", c.name);

  if (o.has("split")) {
    Obj s(o.raw("split"), "/split");
    s.allow({"test_size", "seed"});
    c.split.test_size = s.count("test_size", c.split.test_size, 1);
    c.split.seed = s.count("seed", c.split.seed);
  }
  if (o.has("preprocess")) c.preprocess = read_policy(o.raw("preprocess"), "/preprocess", c.preprocess);
  if (o.has("llm_clean_policy")) {
    c.llm_clean_policy = read_policy(o.raw("llm_clean_policy"), "/llm_clean_policy", c.llm_clean_policy);
  }
  if (o.has("features")) {
    Obj f(o.raw("features"), "/features");
    f.allow({"min_df", "max_ngram", "l2_normalize"});
    c.features.min_df = f.count("min_df", c.features.min_df, 1);
    c.features.max_ngram = f.count("max_ngram", c.features.max_ngram, 1);
    c.features.l2_normalize = f.boolean("l2_normalize", c.features.l2_normalize);
  }
  c.ablation = o.boolean("ablation", c.ablation);
  c.repeat_count = o.count("repeat_count", c.repeat_count, 1);
  c.output_dir = o.str("output_dir", c.output_dir);
  if (c.output_dir.empty()) throw ConfigError("/output_dir", "must not be empty");

  if (!o.has("predictors") || !o.raw("predictors").is_array() || o.raw("predictors").empty()) {
    throw ConfigError("/predictors", "at least one predictor is required");
  }
  const json& roster = o.raw("predictors");
  std::set<std::string> names;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const std::string ptr = child("/predictors", i);
    PredictorSpec spec = read_predictor(roster[i], ptr, c.dataset.schema(), c.repeat_count);
    if (!names.insert(spec.name).second) {
      throw ConfigError(child(ptr, "name"), "duplicate predictor name '" + spec.name + "'");
    }
    c.predictors.push_back(std::move(spec));
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return validate_config(ss.str(), file.parent_path());
}

json to_json(const ExperimentConfig& c) {
  json dataset = {{"path", c.dataset.path},
                  {"format", std::string(to_string(c.dataset.format))},
                  {"text_field", c.dataset.text_field},
                  {"label_field", c.dataset.label_field},
                  {"task_name", c.dataset.schema().task_name()},
                  {"labels", c.dataset.schema().labels()},
                  {"prompt", c.dataset.task}};
  json predictors = json::array();
  for (const auto& p : c.predictors) predictors.push_back(predictor_to_json(p));
  return {{"name", c.name},
          {"dataset", dataset},
          {"split", {{"test_size", c.split.test_size}, {"seed", c.split.seed}}},
          {"preprocess", c.preprocess},
          {"features", c.features},
          {"llm_clean_policy", c.llm_clean_policy},
          {"ablation", c.ablation},
          {"repeat_count", c.repeat_count},
          {"output_dir", c.output_dir},
          {"predictors", predictors}};
}

}  // namespace zsbench
