/*
Copyright 2026 The Impact Market Simulator Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "impact/config.hpp"
#include "impact/error.hpp"
#include "impact/experiments.hpp"

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  int threads = 0;
  bool quiet = false;
  std::string input;
};

impact::ExperimentConfig load(const GlobalFlags& g, bool need_config) {
  impact::ExperimentConfig cfg;
  if (!g.config.empty()) {
    cfg = impact::load_experiment(g.config);
  } else if (need_config) {
    throw impact::ConfigError("--config is required for this command");
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.trials) {
    if (*g.trials < 1) throw impact::ConfigError("--trials must be >= 1");
    cfg.trials = *g.trials;
  }
  if (!g.out.empty()) cfg.output_dir = g.out;
  cfg.propagate();
  return cfg;
}

impact::RunOptions options(const GlobalFlags& g) {
  impact::RunOptions opt;
  opt.threads = g.threads > 0 ? g.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  opt.quiet = g.quiet;
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Impact Market peer-review simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "Scenario config file (YAML)");
  app.add_option("--seed", g.seed, "Override the config seed");
  app.add_option("--trials", g.trials, "Override the number of trials or runs");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads (default: all cores)");
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  auto* simulate = app.add_subcommand("simulate", "Run every scenario of a config; writes recall.csv");
  auto* ablate = app.add_subcommand("ablate", "Pick-size ablation grid; writes ablation.csv");
  auto* calibrate = app.add_subcommand("calibrate", "Multi-cycle IR calibration; writes cycles.csv");
  auto* collusion = app.add_subcommand("collusion", "Planted-ring detection; writes detection.csv");
  auto* load_cmd = app.add_subcommand("load", "Reviewer-load comparison table; writes load.csv");
  auto* longtail = app.add_subcommand("longtail", "Citation concentration; writes longtail.csv");
  longtail->add_option("--input", g.input, "Citation CSV (venue,paper,citations)");
  auto* plot_data = app.add_subcommand("plot-data", "Plot-ready CSVs (IR densities, cumulative citations)");
  plot_data->add_option("--input", g.input, "Citation CSV for cumulative curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto opt = options(g);
    if (simulate->parsed()) {
      impact::run_simulate(load(g, true), opt);
    } else if (ablate->parsed()) {
      impact::run_ablation(load(g, false), opt);
    } else if (calibrate->parsed()) {
      impact::run_calibration(load(g, false), opt);
    } else if (collusion->parsed()) {
      impact::run_collusion(load(g, false), opt);
    } else if (load_cmd->parsed()) {
      impact::run_load(load(g, false), opt);
    } else if (longtail->parsed()) {
      impact::run_longtail(load(g, false), g.input, opt);
    } else if (plot_data->parsed()) {
      const auto cfg = load(g, false);
      std::filesystem::create_directories(cfg.output_dir);
      impact::write_ir_density_csv((std::filesystem::path(cfg.output_dir) / "ir_density.csv").string());
      if (!g.input.empty() || (cfg.longtail && !cfg.longtail->input.empty())) {
        impact::run_longtail(cfg, g.input, opt);
      }
    }
  } catch (const impact::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
