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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "impact/rng.hpp"

namespace impact {

/// Ground-truth merit bin. Declaration order is best-first.
enum class TrueClass : std::uint8_t { kTop20 = 0, kMid60 = 1, kBot20 = 2 };

inline constexpr std::array<TrueClass, 3> kAllClasses{TrueClass::kTop20, TrueClass::kMid60,
                                                      TrueClass::kBot20};

constexpr std::size_t index_of(TrueClass c) { return static_cast<std::size_t>(c); }

/// Ordinal comparison: kTop20 > kMid60 > kBot20.
constexpr bool better_than(TrueClass a, TrueClass b) { return index_of(a) < index_of(b); }

/// True score attached to each bin (10 / 6 / 4).
double true_score(TrueClass c);

std::string_view to_string(TrueClass c);
TrueClass class_from_string(std::string_view name);

struct Paper {
  int id = 0;
  TrueClass true_class = TrueClass::kMid60;
  double v_true = 6.0;
  double hype = 0.0;
  std::vector<int> authors;

  bool is_gem() const { return true_class == TrueClass::kTop20; }
  bool authored_by(int actor_id) const;
};

struct HypeRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct UniverseConfig {
  int n_submissions = 1000;  // only the load model reads this
  int market_size = 600;
  double frac_top = 0.20;
  double frac_mid = 0.60;
  double frac_bot = 0.20;
  // Indexed by TrueClass.
  std::array<HypeRange, 3> hype_ranges{{{4.0, 10.0}, {7.0, 10.0}, {3.0, 8.0}}};
  int authors_per_paper = 2;
  int author_pool_size = 200;
  // Share of the author pool that coincides with investor ids [0, pool).
  // 0 keeps authors and investors disjoint.
  double author_overlap = 0.0;

  void validate() const;
  /// Class sizes after rounding; the remainder goes to kMid60.
  std::array<int, 3> target_counts() const;
  /// First actor id of the author pool.
  int author_id_base() const;
};

/// Draws one conference cycle's papers. Ids are 0..market_size-1 and are a
/// random permutation over classes.
std::vector<Paper> generate_universe(const UniverseConfig& cfg, Rng& rng);

/// (|Top20|, |Mid60|, |Bot20|)
std::array<int, 3> class_counts(std::span<const Paper> papers);

/// Writes papers.csv: id,true_class,v_true,hype,authors (authors ';'-joined).
void write_papers_csv(const std::string& path, std::span<const Paper> papers);

}  // namespace impact
