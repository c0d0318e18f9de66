#include "zsbench/experiment.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "zsbench/baselines.hpp"
#include "zsbench/errors.hpp"
#include "zsbench/features.hpp"
#include "zsbench/llm/audit_log.hpp"
#include "zsbench/llm/classify.hpp"
#include "zsbench/llm/http_transport.hpp"
#include "zsbench/llm/mock_transport.hpp"
#include "zsbench/preprocess.hpp"
#include "zsbench/report.hpp"
#include "zsbench/util.hpp"

#ifndef ZSBENCH_VERSION
#define ZSBENCH_VERSION "unknown"
#endif

namespace zsbench {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(PredictorCategory category) {
  return category == PredictorCategory::llm ? "llm" : "traditional_ml";
}

const RunAggregate* PredictorResult::aggregate(std::string_view metric) const {
  for (const auto& a : aggregates) {
    if (a.metric == metric) return &a;
  }
  return nullptr;
}

namespace {

std::string slug(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (keep) {
      out += c;
    } else if (out.empty() || out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "predictor" : out;
}

std::string compact_timestamp() {
  std::string t = utc_timestamp();  // 2024-01-31T12:00:00Z
  std::string out;
  for (char c : t) {
    if (c != '-' && c != ':') out += c;
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!content.empty() && content.back() != '\n') out << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

std::string file_sha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

fs::path make_run_dir(const fs::path& root, const std::string& name) {
  const std::string stem = slug(name) + "-" + compact_timestamp();
  fs::create_directories(root);
  fs::path dir = root / stem;
  for (int n = 2; fs::exists(dir); ++n) dir = root / (stem + "-" + std::to_string(n));
  fs::create_directory(dir);
  return dir;
}

json predictions_to_json(std::span<const ScoredPrediction> preds, std::span<const Document> docs,
                         const LabelSchema& schema) {
  json arr = json::array();
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& p = preds[i];
    arr.push_back({{"doc_id", p.doc_id},
                   {"gold", docs[i].gold ? json(schema.name(*docs[i].gold)) : json(nullptr)},
                   {"label", schema.name(p.label)},
                   {"valid", p.valid},
                   {"scores", p.scores}});
  }
  return arr;
}

std::vector<std::uint64_t> ids_of(std::span<const ScoredPrediction> preds) {
  std::vector<std::uint64_t> ids;
  ids.reserve(preds.size());
  for (const auto& p : preds) ids.push_back(p.doc_id);
  return ids;
}

void fill_aggregates(PredictorResult& r) {
  r.aggregates.clear();
  std::vector<double> acc, f1, mc, auc;
  bool all_auc = true;
  for (const auto& rep : r.runs) {
    acc.push_back(rep.acc);
    f1.push_back(rep.macro_f1);
    mc.push_back(rep.mcc);
    if (rep.auc) {
      auc.push_back(*rep.auc);
    } else {
      all_auc = false;
    }
  }
  r.aggregates.push_back(aggregate_runs("acc", acc));
  r.aggregates.push_back(aggregate_runs("macro_f1", f1));
  r.aggregates.push_back(aggregate_runs("mcc", mc));
  if (all_auc && !auc.empty()) r.aggregates.push_back(aggregate_runs("auc", auc));
}

class Runner {
 public:
  Runner(const ExperimentConfig& config, const RunOptions& options) : config_(config), options_(options) {}

  ExperimentResult run() {
    const std::string started = utc_timestamp();
    const fs::path data_path = config_.resolve(config_.dataset.path);
    const LabeledCorpus corpus = load_corpus(data_path, config_.dataset.format, config_.dataset.text_field,
                                             config_.dataset.label_field, config_.dataset.schema());
    split_ = stratified_split(corpus, config_.split.test_size, config_.split.seed);

    result_.experiment = config_.name;
    result_.schema = config_.dataset.schema();
    result_.train_size = split_.train.size();
    result_.ablation = config_.ablation;
    for (const auto& d : split_.test.documents) {
      result_.test_ids.push_back(d.id);
      truth_.push_back(*d.gold);
    }
    result_.test_distribution = class_distribution(split_.test);

    if (options_.write_artifacts) {
      const fs::path root = options_.output_dir.empty() ? config_.resolve(config_.output_dir) : options_.output_dir;
      run_dir_ = make_run_dir(root, config_.name);
      result_.run_dir = run_dir_;
      write_file(run_dir_ / "config.json", dump_json(to_json(config_), 2));
      std::vector<std::uint64_t> train_ids;
      for (const auto& d : split_.train.documents) train_ids.push_back(d.id);
      write_file(run_dir_ / "split.json", dump_json(json{{"seed", config_.split.seed},
                                                         {"test_size", config_.split.test_size},
                                                         {"train_ids", train_ids},
                                                         {"test_ids", result_.test_ids},
                                                         {"test_distribution", result_.test_distribution}},
                                                    2));
    }

    run_baselines();
    for (const auto& spec : config_.predictors) {
      if (spec.is_llm()) run_llm(spec);
    }
    enforce_shared_split();

    result_.manifest = {{"zsbench_version", ZSBENCH_VERSION},
                        {"compiler", __VERSION__},
                        {"json_library", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                             std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                             std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                        {"config_sha256", sha256_hex(dump_json(to_json(config_)))},
                        {"dataset_path", data_path.string()},
                        {"dataset_sha256", file_sha256(data_path)},
                        {"started_at", started},
                        {"finished_at", utc_timestamp()}};
    if (options_.write_artifacts) {
      result_.manifest["run_dir"] = run_dir_.string();
      write_file(run_dir_ / "manifest.json", dump_json(result_.manifest, 2));
      emit_report(result_, ReportFormat::json, run_dir_);
      emit_report(result_, ReportFormat::markdown, run_dir_);
    }
    return std::move(result_);
  }

 private:
  PredictorResult blank(const PredictorSpec& spec, PredictorCategory category) const {
    PredictorResult r;
    r.name = spec.name;
    r.predictor = spec.name;
    r.type = std::string(spec.type());
    r.category = category;
    return r;
  }

  std::unique_ptr<Classifier> train(const PredictorSpec& spec, const TrainingSet& data) const {
    return std::visit(
        [&](const auto& p) -> std::unique_ptr<Classifier> {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, MnbSpec>) {
            return std::make_unique<MnbModel>(train_mnb(data, p.alpha));
          } else if constexpr (std::is_same_v<T, LogRegHyper>) {
            return std::make_unique<LogRegModel>(train_logreg(data, p));
          } else if constexpr (std::is_same_v<T, KnnSpec>) {
            return std::make_unique<KnnModel>(train_knn(data, p.k));
          } else if constexpr (std::is_same_v<T, TreeParams>) {
            return std::make_unique<TreeModel>(train_dt(data, p));
          } else if constexpr (std::is_same_v<T, ForestParams>) {
            ForestParams q = p;
            if (q.threads == 0) q.threads = std::max(1u, std::thread::hardware_concurrency());
            return std::make_unique<ForestModel>(train_rf(data, q));
          } else {
            throw Error("not a baseline predictor");
          }
        },
        spec.params);
  }

  void run_baselines() {
    std::vector<const PredictorSpec*> roster;
    for (const auto& spec : config_.predictors) {
      if (!spec.is_llm()) roster.push_back(&spec);
    }
    if (roster.empty()) return;

    // Shared features. A failure here is recorded against every baseline.
    std::vector<FeatureVector> train_x, test_x;
    std::vector<LabelId> train_y;
    std::size_t dimension = 0;
    json feature_info;
    try {
      const PreprocessedCorpus train_clean = preprocess_corpus(split_.train, config_.preprocess);
      const PreprocessedCorpus test_clean = preprocess_corpus(split_.test, config_.preprocess);
      const TfidfVectorizer vec = TfidfVectorizer::fit(train_clean.documents, config_.features);
      train_x = vec.transform(train_clean.documents);
      test_x = vec.transform(test_clean.documents);
      dimension = vec.dimension();
      for (const auto& d : split_.train.documents) train_y.push_back(*d.gold);
      feature_info = {{"vocabulary_size", dimension},
                      {"empty_train_documents", train_clean.empty_documents},
                      {"empty_test_documents", test_clean.empty_documents}};
      if (!run_dir_.empty()) write_file(run_dir_ / "vectorizer.json", dump_json(vec.to_json()));
    } catch (const std::exception& e) {
      for (const auto* spec : roster) {
        PredictorResult r = blank(*spec, PredictorCategory::traditional_ml);
        r.error = std::string("feature extraction failed: ") + e.what();
        result_.predictors.push_back(std::move(r));
      }
      return;
    }

    const TrainingSet data{train_x, train_y, result_.schema.size(), dimension};
    for (const auto* spec : roster) {
      PredictorResult r = blank(*spec, PredictorCategory::traditional_ml);
      r.diagnostics = feature_info;
      try {
        const auto model = train(*spec, data);
        std::vector<ScoredPrediction> preds;
        preds.reserve(test_x.size());
        for (std::size_t i = 0; i < test_x.size(); ++i) {
          preds.push_back(predict_scores(*model, test_x[i], split_.test.documents[i].id));
        }
        r.runs.push_back(evaluate(truth_, preds, result_.schema.size(), false));
        r.test_ids = ids_of(preds);
        r.ok = true;
        if (!run_dir_.empty()) {
          const std::string file = slug(spec->name) + ".json";
          write_file(run_dir_ / "models" / file, dump_json(model->to_json()));
          write_file(run_dir_ / "predictions" / file,
                     dump_json(predictions_to_json(preds, split_.test.documents, result_.schema), 1));
        }
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
        r.runs.clear();
      }
      if (r.ok) fill_aggregates(r);
      result_.predictors.push_back(std::move(r));
    }
  }

  void run_llm(const PredictorSpec& spec) {
    const auto& llm_spec = std::get<LlmSpec>(spec.params);
    struct Variant {
      std::string suffix;
      bool clean;
    };
    std::vector<Variant> variants;
    if (config_.ablation) {
      variants = {{"original", false}, {"clean", true}};
    } else {
      variants = {{"", llm_spec.input == TextInput::clean}};
    }
    for (const auto& v : variants) {
      PredictorResult r = blank(spec, PredictorCategory::llm);
      r.variant = v.suffix;
      if (!v.suffix.empty()) r.name = spec.name + " (" + v.suffix + ")";
      try {
        run_llm_variant(spec, llm_spec, v.clean, r);
        r.ok = true;
        fill_aggregates(r);
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
        r.aggregates.clear();
      }
      result_.predictors.push_back(std::move(r));
    }
  }

  void run_llm_variant(const PredictorSpec& spec, const LlmSpec& llm_spec, bool clean, PredictorResult& r) {
    std::vector<Document> docs = split_.test.documents;
    if (clean) {
      for (auto& d : docs) d.text = clean_for_display(d.text, config_.llm_clean_policy);
    }
    std::set<std::uint64_t> blank_ids;
    for (const auto& d : docs) {
      if (trim(d.text).empty()) blank_ids.insert(d.id);
    }

    auto transport = options_.transport_factory ? options_.transport_factory(spec, llm_spec)
                                                : make_transport(spec, llm_spec);
    if (!transport) throw Error("no transport for predictor '" + spec.name + "'");

    llm::TaskDescription task = config_.dataset.task;
    json runs = json::array();
    for (std::size_t rep = 0; rep < llm_spec.run.repeat_count; ++rep) {
      std::unique_ptr<llm::AuditLog> audit;
      fs::path audit_path;
      if (!run_dir_.empty()) {
        audit_path = run_dir_ / "audit" / (slug(r.name) + "-run" + std::to_string(rep + 1) + ".jsonl");
        fs::create_directories(audit_path.parent_path());
        audit = std::make_unique<llm::AuditLog>(audit_path);
      }
      llm::ClassifyOptions opts{options_.backoff, audit.get()};
      llm::LlmClassification out;
      try {
        out = llm::classify_corpus(docs, task, llm_spec.run, *transport, opts);
      } catch (const llm::ClassificationAborted& e) {
        throw Error("run " + std::to_string(rep + 1) + " aborted: " + e.what());
      }
      r.runs.push_back(evaluate(truth_, out.predictions, result_.schema.size(), true));
      const auto ids = ids_of(out.predictions);
      if (rep == 0) {
        r.test_ids = ids;
      } else if (ids != r.test_ids) {
        throw Error("run " + std::to_string(rep + 1) + " covered different test ids");
      }
      json d = llm::to_json(out.diagnostics);
      d["run"] = rep + 1;
      if (audit) {
        audit.reset();  // flush and close before reading back
        check_audit_coverage(audit_path, blank_ids, rep + 1);
        d["audit_log"] = fs::relative(audit_path, run_dir_).generic_string();
        write_file(run_dir_ / "predictions" / (slug(r.name) + "-run" + std::to_string(rep + 1) + ".json"),
                   dump_json(predictions_to_json(out.predictions, docs, result_.schema), 1));
      }
      runs.push_back(std::move(d));
    }
    r.diagnostics = {{"transport", transport->describe()},
                     {"input", clean ? "clean" : "raw"},
                     {"model", llm_spec.run.model},
                     {"runs", runs}};
  }

  /// The documents sent to the model (plus those skipped as blank) must be
  /// exactly the shared test set.
  void check_audit_coverage(const fs::path& path, const std::set<std::uint64_t>& blank_ids, std::size_t run) {
    std::set<std::uint64_t> seen(blank_ids);
    for (const auto& rec : llm::read_audit_log(path)) {
      if (rec.value("phase", "") != "initial") continue;
      for (const auto& id : rec.at("doc_ids")) seen.insert(id.get<std::uint64_t>());
    }
    const std::set<std::uint64_t> expected(result_.test_ids.begin(), result_.test_ids.end());
    if (seen != expected) {
      throw Error("audit log of run " + std::to_string(run) + " does not cover the shared test set");
    }
  }

  void enforce_shared_split() {
    for (auto& r : result_.predictors) {
      if (r.ok && r.test_ids != result_.test_ids) {
        r.ok = false;
        r.error = "predictions do not cover the shared test ids";
        r.aggregates.clear();
      }
    }
  }

  const ExperimentConfig& config_;
  const RunOptions& options_;
  CorpusSplit split_;
  std::vector<LabelId> truth_;
  fs::path run_dir_;
  ExperimentResult result_;
};

}  // namespace

std::unique_ptr<llm::ChatTransport> make_transport(const PredictorSpec&, const LlmSpec& llm) {
  if (llm.provider.kind == ProviderKind::mock) {
    return std::make_unique<llm::KeywordRuleTransport>(llm.provider.rules, llm.provider.wrap_in_prose);
  }
  return std::make_unique<llm::HttpChatTransport>(llm::HttpChatTransport::from_environment(
      llm.provider.base_url, llm.provider.path, llm.provider.api_key_env, llm.run.timeout_seconds));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  if (config.predictors.empty()) throw ConfigError("/predictors", "at least one predictor is required");
  return Runner(config, options).run();
}

json to_json(const ExperimentResult& result) {
  json predictors = json::array();
  for (const auto& r : result.predictors) {
    json runs = json::array();
    for (const auto& rep : r.runs) runs.push_back(to_json(rep, result.schema));
    json aggs = json::array();
    for (const auto& a : r.aggregates) aggs.push_back(to_json(a));
    json p = {{"name", r.name},
              {"predictor", r.predictor},
              {"type", r.type},
              {"category", std::string(to_string(r.category))},
              {"variant", r.variant},
              {"ok", r.ok},
              {"runs", runs},
              {"aggregates", aggs},
              {"test_ids", r.test_ids},
              {"diagnostics", r.diagnostics}};
    if (!r.ok) p["error"] = r.error;
    predictors.push_back(std::move(p));
  }
  return {{"experiment", result.experiment},
          {"task_name", result.schema.task_name()},
          {"labels", result.schema.labels()},
          {"train_size", result.train_size},
          {"test_size", result.test_ids.size()},
          {"test_ids", result.test_ids},
          {"test_distribution", result.test_distribution},
          {"ablation", result.ablation},
          {"predictors", predictors}};
}

ExperimentResult experiment_result_from_json(const json& j) {
  ExperimentResult out;
  try {
    out.experiment = j.at("experiment").get<std::string>();
    out.schema = LabelSchema(j.at("task_name").get<std::string>(), j.at("labels").get<std::vector<std::string>>());
    out.train_size = j.at("train_size").get<std::size_t>();
    out.test_ids = j.at("test_ids").get<std::vector<std::uint64_t>>();
    out.test_distribution = j.at("test_distribution").get<std::vector<std::size_t>>();
    out.ablation = j.value("ablation", false);
    for (const auto& p : j.at("predictors")) {
      PredictorResult r;
      r.name = p.at("name").get<std::string>();
      r.predictor = p.value("predictor", r.name);
      r.type = p.at("type").get<std::string>();
      r.category = p.at("category").get<std::string>() == "llm" ? PredictorCategory::llm
                                                                : PredictorCategory::traditional_ml;
      r.variant = p.value("variant", "");
      r.ok = p.at("ok").get<bool>();
      r.error = p.value("error", "");
      for (const auto& rep : p.at("runs")) r.runs.push_back(eval_report_from_json(rep));
      for (const auto& a : p.at("aggregates")) r.aggregates.push_back(run_aggregate_from_json(a));
      r.test_ids = p.at("test_ids").get<std::vector<std::uint64_t>>();
      r.diagnostics = p.value("diagnostics", json::object());
      out.predictors.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed result document: ") + e.what());
  } catch (const DatasetError& e) {
    throw Error(std::string("malformed result document: ") + e.what());
  }
  return out;
}

}  // namespace zsbench
