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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "impact/collusion.hpp"
#include "impact/investor_pool.hpp"
#include "impact/protocol_im_rebel.hpp"
#include "impact/rng.hpp"
#include "impact/scoring.hpp"
#include "impact/universe.hpp"

namespace impact {

struct MvisModel {
  double sigma_mvis = 1.0;

  void validate() const;
};

enum class ThresholdMode {
  kAbsolute,        // reward iff alignment >= alignment_threshold
  kCohortQuantile,  // reward iff alignment >= that quantile of the cycle's alignments
};

struct CalibrationRule {
  double up_factor = 1.1;
  double down_factor = 0.9;
  double decay_lambda = 0.05;
  double ir_floor = 0.05;
  double ir_cap = 2.0;
  double alignment_threshold = 0.5;
  ThresholdMode threshold_mode = ThresholdMode::kCohortQuantile;

  void validate() const;
};

/// mvis_p = v_true_p + Normal(0, sigma), indexed by paper id.
std::vector<double> simulate_mvis(std::span<const Paper> papers, const MvisModel& model, Rng& rng);

/// (ascending average rank - 1) / (n - 1): best paper 1, worst 0.
std::vector<double> mvis_percentiles(std::span<const double> mvis);

/// Token-weighted mean MVIS percentile of the investor's ledger rows;
/// nullopt when the investor has no tokens in the ledger.
std::optional<double> portfolio_alignment(int investor_id, const InvestmentLedger& ledger,
                                          std::span<const double> percentiles);

/// Same, for every investor in one pass (index = position in investors).
std::vector<std::optional<double>> portfolio_alignments(std::span<const Investor> investors,
                                                        const InvestmentLedger& ledger,
                                                        std::span<const double> percentiles);

/// Multiplicative reward or penalty against threshold, clamp to
/// [floor, cap], then decay toward 1. No alignment means decay only.
double update_ir(double ir, std::optional<double> alignment, const CalibrationRule& rule,
                 double threshold);
double update_ir(double ir, std::optional<double> alignment, const CalibrationRule& rule);

/// Threshold actually applied in a cycle, given the rule and the cohort's
/// alignment scores.
double effective_threshold(const CalibrationRule& rule,
                           std::span<const std::optional<double>> alignments);

struct CycleResult {
  int cycle = 0;  // 1-based
  double recall = 0.0;
  std::vector<double> ir_snapshot;  // after this cycle's update, by pool index
  double spearman_ir_skill = 0.0;
  std::optional<double> ring_mean_ir;
  double top_decile_mean_ir = 0.0;  // honest investors in the top skill decile
  double nis_mvis_spearman = 0.0;
};

struct CalibrationConfig {
  int n_cycles = 10;
  int lag = 1;
  int top_slots = 120;
  UniverseConfig universe;
  PoolConfig pool;
  RebelConfig rebel;
  CalibrationRule rule;
  MvisModel mvis;
  bool ring_enabled = false;
  RingConfig ring;

  void validate() const;
};

/// Multi-cycle loop: fresh universe each cycle, rebel investment with the
/// current IRs as weights and fixed skills as behavior, lagged MVIS
/// feedback, IR updates.
std::vector<CycleResult> run_cycles(const CalibrationConfig& cfg, Rng& rng);

/// cycles.csv: cycle,recall,spearman_ir_skill,ring_mean_ir,nis_mvis_spearman
void write_cycles_csv(const std::string& path, std::span<const CycleResult> cycles);

}  // namespace impact
