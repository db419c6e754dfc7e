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
#include <string_view>
#include <vector>

#include "impact/rng.hpp"

namespace impact {

/// Skill distribution of an investor community.
struct IRDistribution {
  enum class Kind { kCrisis, kNormal, kDesired, kPerfect, kCustom };

  Kind kind = Kind::kNormal;
  double alpha = 2.0;
  double beta = 2.0;

  static IRDistribution crisis() { return {Kind::kCrisis, 1.0, 3.0}; }
  static IRDistribution normal() { return {Kind::kNormal, 2.0, 2.0}; }
  static IRDistribution desired() { return {Kind::kDesired, 5.0, 1.0}; }
  static IRDistribution perfect() { return {Kind::kPerfect, 1.0, 1.0}; }
  static IRDistribution custom(double alpha, double beta);

  /// Accepts crisis | normal | desired | perfect | beta(a,b).
  static IRDistribution parse(std::string_view text);

  std::string name() const;
  double mean() const;
  void validate() const;
};

/// Beta density on each grid point. Perfect has no density and is rejected.
std::vector<double> distribution_density(const IRDistribution& dist, std::span<const double> x_grid);

struct Investor {
  int id = 0;
  double skill = 1.0;  // latent accuracy; drives behavior
  double ir = 1.0;     // influence weight on NIS
  double wallet = 100.0;
  double scrutiny_fraction = 0.40;
  std::optional<int> ring_id;
};

enum class IrInit {
  kFromSkill,  // single-cycle experiments: ir = skill
  kUnit,       // calibration experiments: ir starts at 1.0
};

struct PoolConfig {
  int n_investors = 200;
  IRDistribution distribution = IRDistribution::normal();
  double wallet_size = 100.0;
  double scrutiny_fraction = 0.40;
  double ir_floor = 0.05;
  double ir_cap = 2.0;
  IrInit ir_init = IrInit::kFromSkill;

  void validate() const;
};

std::vector<Investor> generate_pool(const PoolConfig& cfg, Rng& rng);

/// investors.csv: id,skill,ir,ring_id (ring_id empty when unset)
void write_investors_csv(const std::string& path, std::span<const Investor> investors);

}  // namespace impact
