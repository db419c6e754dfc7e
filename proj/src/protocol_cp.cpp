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

#include "impact/protocol_cp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "impact/error.hpp"

namespace impact {

void CpConfig::validate(int n_papers) const {
  require(select_fraction > 0.0 && select_fraction <= 1.0,
          "cp.select_fraction must lie in (0, 1]");
  require(accept_target >= 0, "cp.accept_target must be >= 0");
  require(accept_target <= n_papers, "cp.accept_target exceeds the number of papers");
  const int selected = static_cast<int>(std::lround(select_fraction * n_papers));
  require(accept_target <= selected,
          "cp.accept_target (" + std::to_string(accept_target) +
              ") exceeds the lazily selected count (" + std::to_string(selected) +
              "); the protocol only rejects");
}

std::vector<int> run_cp(std::span<const Paper> papers, const CpConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(papers.size());
  cfg.validate(n);
  const int selected_count = static_cast<int>(std::lround(cfg.select_fraction * n));

  std::vector<int> picks = rng.sample_without_replacement(n, selected_count);
  int to_reject = selected_count - cfg.accept_target;

  if (cfg.rejection == RejectionRule::kProportional) {
    // Removing uniformly at random from the selected set.
    for (int r = 0; r < to_reject; ++r) {
      const int j = rng.uniform_int(0, static_cast<int>(picks.size()) - 1);
      picks[static_cast<std::size_t>(j)] = picks.back();
      picks.pop_back();
    }
  } else {
    std::array<std::vector<int>, 3> bins;
    for (int idx : picks) {
      const Paper& p = papers[static_cast<std::size_t>(idx)];
      bins[index_of(p.true_class)].push_back(p.id);
    }
    // Random starting class; the cycle order itself is fixed.
    std::size_t turn = static_cast<std::size_t>(rng.uniform_int(0, 2));
    while (to_reject > 0) {
      // Exhausted bins pass their turn to the next non-empty one.
      std::size_t tries = 0;
      while (bins[turn % 3].empty() && tries < 3) {
        ++turn;
        ++tries;
      }
      auto& bin = bins[turn % 3];
      const int j = rng.uniform_int(0, static_cast<int>(bin.size()) - 1);
      bin[static_cast<std::size_t>(j)] = bin.back();
      bin.pop_back();
      --to_reject;
      ++turn;
    }
    picks.clear();
    for (const auto& bin : bins) picks.insert(picks.end(), bin.begin(), bin.end());
    std::sort(picks.begin(), picks.end());
    return picks;
  }

  for (int& idx : picks) idx = papers[static_cast<std::size_t>(idx)].id;
  std::sort(picks.begin(), picks.end());
  return picks;
}

}  // namespace impact
