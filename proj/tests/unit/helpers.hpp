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

#include <cmath>
#include <vector>

#include "impact/investor_pool.hpp"
#include "impact/universe.hpp"

namespace impact::test {

inline Paper make_paper(int id, TrueClass c, double hype = 5.0) {
  Paper p;
  p.id = id;
  p.true_class = c;
  p.v_true = true_score(c);
  p.hype = hype;
  return p;
}

inline Investor make_investor(int id, double skill, double ir = -1.0) {
  Investor inv;
  inv.id = id;
  inv.skill = skill;
  inv.ir = ir < 0.0 ? skill : ir;
  return inv;
}

inline double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
  const double m = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace impact::test
