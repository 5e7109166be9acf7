// crtlab command line: run one statistical experiment and write its report,
// or merge previously written reports into a combined verdict.
//
// Exit codes: 0 all required (non-advisory) tests pass, 1 at least one
// failed, 2 configuration or usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crtlab/config.hpp"
#include "crtlab/experiments.hpp"
#include "crtlab/report.hpp"
#include "json.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<uint64_t> replicates;
  std::optional<double> h;
  std::optional<std::string> out_dir;
  std::optional<size_t> threads;
  bool json = false;
};

void add_common_options(CLI::App* sub, CliOverrides& o) {
  // Long-only help: `-h` must stay free for the lattice step flag `--h`.
  sub->set_help_flag("--help", "Print this help message and exit");
  sub->add_option("--config", o.config_path,
                  "Config file with [run], [tolerance] and [settings] sections")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "Base RNG seed (default 1)");
  sub->add_option("--replicates", o.replicates,
                  "Replicates for the main phase (experiment-specific default)");
  sub->add_option("--h", o.h, "Lattice space step, 1/h integral");
  sub->add_option("--out", o.out_dir,
                  "Output directory for reports and CSVs (default: $CRTLAB_OUT "
                  "or ./out)");
  sub->add_option("--threads", o.threads,
                  "Worker threads, 0 = hardware concurrency");
  sub->add_flag("--json", o.json,
                "Print the report as JSON on stdout instead of a table");
}

crtlab::ExperimentConfig build_config(const std::string& experiment,
                                      const CliOverrides& o) {
  crtlab::ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = crtlab::parse_config_file(o.config_path);
  cfg.experiment = experiment;
  if (o.seed) cfg.seed = *o.seed;
  if (o.replicates) cfg.replicates = *o.replicates;
  if (o.h) cfg.h = *o.h;
  if (o.threads) cfg.threads = *o.threads;
  if (o.json) cfg.json_stdout = true;
  if (o.out_dir) {
    cfg.out_dir = *o.out_dir;
  } else if (cfg.out_dir == "out") {
    if (const char* env = std::getenv("CRTLAB_OUT")) cfg.out_dir = env;
  }
  cfg.validate();
  return cfg;
}

int run_one(const std::string& experiment, const CliOverrides& o) {
  const auto cfg = build_config(experiment, o);
  const auto report = crtlab::run_experiment(cfg);
  const std::string path = crtlab::write_report_json(report, cfg.out_dir);
  if (cfg.json_stdout) {
    std::cout << report.to_json() << "\n";
  } else {
    crtlab::print_report_table(report, std::cout);
    std::cout << "report: " << path << "\n";
  }
  return report.required_pass() ? 0 : 1;
}

int run_report(std::vector<std::string> inputs, const CliOverrides& o) {
  std::string out = "out";
  if (o.out_dir) {
    out = *o.out_dir;
  } else if (const char* env = std::getenv("CRTLAB_OUT")) {
    out = env;
  }
  if (inputs.empty() && std::filesystem::is_directory(out)) {
    for (const auto& entry : std::filesystem::directory_iterator(out)) {
      const auto name = entry.path().filename().string();
      if (name.size() > 12 && name.ends_with("_report.json") &&
          name != "combined_report.json") {
        inputs.push_back(entry.path().string());
      }
    }
    std::sort(inputs.begin(), inputs.end());
  }
  if (inputs.empty()) {
    std::cerr << "report: no *_report.json files given or found under " << out
              << "\n";
    return 2;
  }
  const std::string merged = crtlab::merge_reports(inputs, out);
  std::ifstream in(merged);
  nlohmann::json j;
  in >> j;
  const bool ok = j.at("summary").at("required_pass").get<bool>();
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "merged " << inputs.size() << " reports, "
              << j.at("summary").at("passed").get<size_t>() << "/"
              << j.at("summary").at("records").get<size_t>()
              << " records passed -> " << merged << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "crtlab: lattice simulation lab for Brownian-tree level sets.\n"
      "Samples excursion-coded random trees, decomposes level sets into\n"
      "metric balls, and checks the closed-form laws and bounds."};
  app.require_subcommand(1);

  CliOverrides o;
  std::vector<std::string> report_inputs;

  const struct {
    const char* name;
    const char* help;
  } kExperiments[] = {
      {"laws", "Marginal laws: level mass, ball counts and masses, height "
               "tails, durations, ring-mass and transition samplers"},
      {"rayknight", "Level-mass flow across levels vs the branching kernel, "
                    "with hitting bounds"},
      {"bismut", "Ring masses around a mass-weighted marked point"},
      {"census", "Heavy-mass densities, small-count and fourth-moment "
                 "bounds, branching counts, level-grid sweeps"},
      {"hausdorff", "Covering-ratio scans and mass/gauge density profiles "
                    "across dyadic radii"},
  };
  for (const auto& e : kExperiments) {
    add_common_options(app.add_subcommand(e.name, e.help), o);
  }
  auto* rep = app.add_subcommand(
      "report", "Merge experiment reports into combined_report.json");
  rep->add_option("inputs", report_inputs,
                  "Report files (default: all *_report.json under --out)");
  rep->add_option("--out", o.out_dir, "Directory to scan and write into");
  rep->add_flag("--json", o.json, "Print the combined report as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto* sub = app.get_subcommands().front();
    if (sub->get_name() == "report") return run_report(report_inputs, o);
    return run_one(sub->get_name(), o);
  } catch (const crtlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
