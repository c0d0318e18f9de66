// zsbench: run, validate and report zero-shot classification experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zsbench/config.hpp"
#include "zsbench/errors.hpp"
#include "zsbench/experiment.hpp"
#include "zsbench/report.hpp"
#include "zsbench/util.hpp"

namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw zsbench::Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

zsbench::ExperimentConfig load(const fs::path& path) {
  return zsbench::validate_config(read_text(path), path.parent_path());
}

int cmd_validate(const fs::path& path, bool print) {
  const auto config = load(path);
  if (print) {
    std::cout << zsbench::dump_json(zsbench::to_json(config), 2) << '\n';
  } else {
    std::cout << path.string() << ": ok (" << config.predictors.size() << " predictors, test_size "
              << config.split.test_size << ")\n";
  }
  return 0;
}

int cmd_run(const fs::path& path, const std::string& output_dir) {
  const auto config = load(path);
  zsbench::RunOptions options;
  if (!output_dir.empty()) options.output_dir = output_dir;
  const auto result = zsbench::run_experiment(config, options);
  std::cout << zsbench::render_markdown(result);
  std::cerr << "run directory: " << result.run_dir.string() << '\n';
  int failed = 0;
  for (const auto& p : result.predictors) {
    if (!p.ok) {
      std::cerr << "predictor " << p.name << " failed: " << p.error << '\n';
      ++failed;
    }
  }
  // Partial results are still written; a failed predictor makes the exit code nonzero.
  return failed == 0 ? 0 : 3;
}

int cmd_report(const fs::path& run_dir, const std::string& format) {
  const auto fmt = zsbench::parse_report_format(format);
  if (!fmt) throw zsbench::Error("unknown report format '" + format + "' (expected md or json)");
  std::cout << zsbench::render(zsbench::load_run(run_dir), *fmt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot text classification benchmark harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ZSBENCH_VERSION));

  std::string config_path, run_dir, format = "md", output_dir;
  bool print = false;

  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--output-dir", output_dir, "Override the config's output directory");

  auto* validate = app.add_subcommand("validate", "Check a config and fill in defaults");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();
  validate->add_flag("--print", print, "Print the resolved config");

  auto* report = app.add_subcommand("report", "Render the report of a finished run");
  report->add_option("run_dir", run_dir, "Run directory")->required();
  report->add_option("--format", format, "md or json")->check(CLI::IsMember({"md", "markdown", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, output_dir);
    if (*validate) return cmd_validate(config_path, print);
    if (*report) return cmd_report(run_dir, format);
  } catch (const zsbench::ConfigError& e) {
    std::cerr << config_path << ":" << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
