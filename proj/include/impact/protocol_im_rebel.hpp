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
#include <vector>

#include "impact/investor_pool.hpp"
#include "impact/rng.hpp"
#include "impact/scoring.hpp"
#include "impact/universe.hpp"

namespace impact {

enum class ScanMode {
  kIndependent,  // each investor samples its scan on its own
  kBalanced,     // scans cut from concatenated random permutations
};

struct RebelConfig {
  int n_scan = 50;
  int n_pick = 20;
  double wallet_size = 100.0;
  double tau = 1.0;
  double noise_sigma0 = 2.0;
  std::optional<double> cap_per_paper;
  ScanMode scan_mode = ScanMode::kBalanced;

  void validate(int n_papers) const;
};

/// skill * v_true + (1 - skill) * hype
double attractiveness(const Investor& investor, const Paper& paper);

/// The n_pick most attractive of the scanned papers; ties go to the lower
/// paper id. Returned in that order.
std::vector<int> select_portfolio(const Investor& investor, std::span<const Paper> papers,
                                  std::span<const int> scanned_ids, int n_pick);

/// Independent scan of n_scan papers followed by select_portfolio.
std::vector<int> discover(const Investor& investor, std::span<const Paper> papers,
                          const RebelConfig& cfg, Rng& rng);

/// One scan list per investor. Every paper appears in at least
/// floor(n_investors * n_scan / n_papers) lists and no list repeats a paper.
std::vector<std::vector<int>> balanced_scan_design(std::span<const Paper> papers, int n_investors,
                                                   int n_scan, Rng& rng);

/// v_true + Normal(0, sigma0 * (1 - skill))
double evaluate(const Investor& investor, const Paper& paper, const RebelConfig& cfg, Rng& rng);

/// Softmax over v_obs / tau scaled to the wallet, with the optional cap.
std::vector<double> allocate_softmax(std::span<const double> v_obs, const RebelConfig& cfg);
std::vector<double> allocate_softmax(std::span<const double> v_obs, const RebelConfig& cfg,
                                     double budget);

/// Tokens committed before discovery (coordinated ring money). The rest of
/// the investor's wallet goes through honest discovery and betting.
struct Pledge {
  int investor_id = 0;
  int paper_id = 0;
  double tokens = 0.0;
};

InvestmentLedger run_rebel_im(std::span<const Paper> papers, std::span<const Investor> investors,
                              const RebelConfig& cfg, Rng& rng,
                              std::span<const Pledge> pledges = {});

}  // namespace impact
