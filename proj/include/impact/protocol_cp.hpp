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

#include <span>
#include <vector>

#include "impact/rng.hpp"
#include "impact/universe.hpp"

namespace impact {

/// How the committee trims the lazily selected set down to the target.
enum class RejectionRule {
  kEven,          // round-robin over class bins, one random member per turn
  kProportional,  // uniform removals, i.e. proportional to class share
};

struct CpConfig {
  double select_fraction = 0.40;
  int accept_target = 200;
  RejectionRule rejection = RejectionRule::kEven;

  void validate(int n_papers) const;
};

/// Lottery selection followed by turf-war rejections. Returns accepted
/// paper ids in ascending order; exactly accept_target of them.
std::vector<int> run_cp(std::span<const Paper> papers, const CpConfig& cfg, Rng& rng);

}  // namespace impact
