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
#include <optional>
#include <string>
#include <vector>

#include "impact/calibration.hpp"
#include "impact/collusion.hpp"
#include "impact/investor_pool.hpp"
#include "impact/load_model.hpp"
#include "impact/longtail.hpp"
#include "impact/protocol_cp.hpp"
#include "impact/protocol_im_passive.hpp"
#include "impact/protocol_im_rebel.hpp"
#include "impact/universe.hpp"

namespace impact {

enum class Protocol { kCp, kImPassive, kImRebel };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

struct ScenarioConfig {
  std::string name = "scenario";
  UniverseConfig universe;
  PoolConfig pool;
  Protocol protocol = Protocol::kImRebel;
  CpConfig cp;
  PassiveImConfig passive;
  RebelConfig rebel;
  int trials = 200;
  std::uint64_t seed = 1;
  int top_slots = 120;
  std::string output_dir = "out";

  void validate() const;
};

struct AblationConfig {
  int n_scan = 25;
  std::vector<int> picks{5, 10, 20};
  std::vector<IRDistribution> pools{IRDistribution::crisis(), IRDistribution::normal(),
                                    IRDistribution::desired(), IRDistribution::perfect()};
};

struct CalibrationSection {
  CalibrationRule rule;
  MvisModel mvis;
  int n_cycles = 10;
  int lag = 1;
  bool ring_enabled = false;
  RingConfig ring;
};

struct CollusionSection {
  RingConfig ring;
  CitationConfig citations;
  DetectParams detect;
  int null_runs = 0;
};

struct LongtailSection {
  std::string input;
  LongtailStats stats;
};

/// One config file: shared settings, a base scenario, optional scenario
/// overrides and per-experiment sections.
struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 1;
  int trials = 200;
  int top_slots = 120;
  std::string output_dir = "out";

  ScenarioConfig base;
  bool has_protocol = false;
  std::vector<ScenarioConfig> scenarios;  // base alone when no list is given

  std::optional<AblationConfig> ablation;
  std::optional<CalibrationSection> calibration;
  std::optional<CollusionSection> collusion;
  std::optional<LoadConfig> load;
  std::optional<LongtailSection> longtail;

  std::string source;  // verbatim file text, echoed into run metadata

  /// Pushes seed / trials / top_slots / output_dir down into every scenario.
  void propagate();
};

/// Parses YAML text. Unknown fields and bad values raise ConfigError naming
/// the dotted field path.
ExperimentConfig parse_experiment(const std::string& text);
ExperimentConfig load_experiment(const std::string& path);

CalibrationConfig make_calibration_config(const ExperimentConfig& cfg);
CollusionScenario make_collusion_scenario(const ExperimentConfig& cfg);

}  // namespace impact
