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

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "impact/investor_pool.hpp"
#include "impact/rng.hpp"
#include "impact/scoring.hpp"
#include "impact/universe.hpp"

namespace impact {

enum class Misclassification {
  kUniform,   // either wrong class with probability 1/2
  kAdjacent,  // always the neighbouring class; Mid splits evenly
};

struct PassiveImConfig {
  int reviews_per_paper = 10;
  std::array<double, 3> class_weights{2.5, 1.5, 1.0};  // indexed by TrueClass
  double wallet_size = 100.0;
  Misclassification misclassification = Misclassification::kUniform;
  std::optional<double> cap_per_paper;  // off by default

  void validate() const;
};

/// Regular bipartite investor x paper assignment.
struct Assignment {
  // papers_of[i] lists paper ids reviewed by the i-th investor of the pool.
  std::vector<std::vector<int>> papers_of;

  std::vector<std::pair<int, int>> edges(std::span<const Investor> investors) const;
  std::size_t edge_count() const;
};

/// Seeded stub matching: every paper gets exactly k reviewers and every
/// investor |papers|*k/|investors| papers. Duplicate and self-author edges
/// are repaired by random edge swaps.
Assignment build_fixed_graph(std::span<const Paper> papers, std::span<const Investor> investors,
                             const PassiveImConfig& cfg, Rng& rng);

/// Correct with probability equal to the investor's skill; otherwise a
/// wrong class.
TrueClass classify(const Paper& paper, const Investor& investor, Rng& rng,
                   Misclassification mode = Misclassification::kUniform);

/// tokens_p = wallet * w(class_p) / sum_q w(class_q), then the optional cap.
std::vector<double> allocate_passive(std::span<const TrueClass> classifications,
                                     const PassiveImConfig& cfg);

InvestmentLedger run_passive_im(std::span<const Paper> papers, std::span<const Investor> investors,
                                const PassiveImConfig& cfg, Rng& rng);

/// Clamps entries at cap and hands the excess to the unclamped ones in
/// proportion to their size until nothing exceeds cap. When cap * n < total
/// every entry ends at cap.
void clamp_and_renormalize(std::vector<double>& tokens, double cap, double total);

}  // namespace impact
