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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "impact/calibration.hpp"
#include "impact/collusion.hpp"
#include "impact/config.hpp"

namespace impact {

struct RunOptions {
  int threads = 1;
  bool quiet = true;
  bool write = true;  // false keeps everything in memory
};

/// Runs fn(i) for i in [0, n) on a pool of worker threads. fn must only
/// write to slot i of its output.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

/// Stable 64-bit key for a scenario name, used to derive its RNG stream.
std::uint64_t name_key(const std::string& name);

struct TrialOutcome {
  double recall = 0.0;
  double gems_found = 0.0;
  std::optional<double> spearman_nis_vtrue;  // no NIS under CP
};

/// One trial with its RNG substream derived from (seed, scenario name, trial).
TrialOutcome run_trial(const ScenarioConfig& sc, int trial);

struct TrialRow {
  std::string scenario;
  Protocol protocol = Protocol::kImRebel;
  int trial = 0;
  TrialOutcome outcome;
};

struct ScenarioSummary {
  std::string name;
  Protocol protocol = Protocol::kImRebel;
  int trials = 0;
  double mean_recall = 0.0;
  double sd_recall = 0.0;
  double mean_gems = 0.0;
};

struct SimulateResult {
  std::vector<TrialRow> rows;  // scenario order, then trial order
  std::vector<ScenarioSummary> summaries;
};

/// Every scenario of the config; writes recall.csv and summary.json.
SimulateResult run_simulate(const ExperimentConfig& cfg, const RunOptions& opt);

struct AblationCell {
  int pick = 0;
  std::string pool;
  std::vector<double> gems;  // per trial
  double mean() const;
};

struct AblationResult {
  std::vector<int> picks;
  std::vector<std::string> pools;
  std::vector<AblationCell> cells;  // pick-major
  const AblationCell& cell(int pick, const std::string& pool) const;
};

/// Grid over picks x pools at a fixed scan size; writes ablation.csv
/// (pick,<pool>...) and ablation_trials.csv (pick,pool,trial,gems).
AblationResult run_ablation(const ExperimentConfig& cfg, const RunOptions& opt);

struct CalibrationResult {
  std::vector<std::vector<CycleResult>> runs;
  std::vector<CycleResult> mean_by_cycle;  // ir_snapshot left empty
};

/// trials independent runs; writes cycles.csv (mean over runs),
/// cycles_runs.csv (run,...) and ir_trajectory.csv for run 0.
CalibrationResult run_calibration(const ExperimentConfig& cfg, const RunOptions& opt);

struct CollusionResult {
  std::vector<DetectionResult> planted;
  std::vector<DetectionResult> null_runs;
  double detection_rate = 0.0;   // Jaccard >= 0.9
  double false_flag_rate = 0.0;  // any flag on a null run
};

/// trials planted runs followed by null_runs ring-free runs; writes
/// detection.csv.
CollusionResult run_collusion(const ExperimentConfig& cfg, const RunOptions& opt);

/// load.csv plus the text table on stdout unless quiet.
void run_load(const ExperimentConfig& cfg, const RunOptions& opt);

/// longtail.csv and cumulative.csv from the configured (or given) input.
void run_longtail(const ExperimentConfig& cfg, const std::string& input, const RunOptions& opt);

/// ir_density.csv (x,crisis,normal,desired) for the density figure.
void write_ir_density_csv(const std::string& path, int n_points = 199);

std::string git_hash();

}  // namespace impact
