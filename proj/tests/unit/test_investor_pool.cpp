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

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "impact/error.hpp"
#include "impact/investor_pool.hpp"

using namespace impact;

TEST_CASE("perfect pool is all ones") {
  PoolConfig cfg;
  cfg.distribution = IRDistribution::perfect();
  Rng rng(1);
  const auto pool = generate_pool(cfg, rng);
  CHECK(pool.size() == 200);
  for (const auto& inv : pool) {
    CHECK(inv.skill == 1.0);
    CHECK(inv.ir == 1.0);
  }
}

TEST_CASE("pool means converge to the beta means") {
  struct Case {
    IRDistribution dist;
    double mean;
  };
  for (const auto& c : {Case{IRDistribution::crisis(), 0.25}, Case{IRDistribution::normal(), 0.5},
                        Case{IRDistribution::desired(), 5.0 / 6.0}}) {
    PoolConfig cfg;
    cfg.n_investors = 100000;
    cfg.distribution = c.dist;
    Rng rng(2);
    std::vector<double> skills;
    for (const auto& inv : generate_pool(cfg, rng)) {
      REQUIRE(inv.skill >= 0.0);
      REQUIRE(inv.skill <= 1.0);
      skills.push_back(inv.skill);
    }
    const double a = c.dist.alpha, b = c.dist.beta;
    const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1)));
    CHECK(std::abs(test::sample_mean(skills) - c.mean) < 3.0 * sd / std::sqrt(100000.0));
    CHECK(c.dist.mean() == doctest::Approx(c.mean));
  }
}

TEST_CASE("ir follows the init mode") {
  PoolConfig cfg;
  cfg.distribution = IRDistribution::crisis();
  Rng a(3), b(3);
  for (const auto& inv : generate_pool(cfg, a)) CHECK(inv.ir == inv.skill);
  cfg.ir_init = IrInit::kUnit;
  for (const auto& inv : generate_pool(cfg, b)) CHECK(inv.ir == 1.0);
}

TEST_CASE("empty pool is a config error") {
  PoolConfig cfg;
  cfg.n_investors = 0;
  Rng rng(4);
  CHECK_THROWS_AS(generate_pool(cfg, rng), ConfigError);
}

TEST_CASE("beta densities") {
  const std::vector<double> half{0.5};
  CHECK(distribution_density(IRDistribution::normal(), half)[0] == doctest::Approx(1.5));
  const std::vector<double> xs{0.1, 0.3, 0.77};
  for (double d : distribution_density(IRDistribution::custom(1.0, 1.0), xs)) CHECK(d == doctest::Approx(1.0));
}

TEST_CASE("densities integrate to one") {
  const int n = 10000;
  std::vector<double> grid;
  for (int i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) / n);
  for (const auto& dist : {IRDistribution::crisis(), IRDistribution::normal(), IRDistribution::desired()}) {
    const auto y = distribution_density(dist, grid);
    double area = 0.0;
    for (int i = 0; i < n; ++i) area += 0.5 * (y[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i) + 1]) / n;
    CHECK(std::abs(area - 1.0) < 1e-6);
  }
}

TEST_CASE("distribution names parse") {
  CHECK(IRDistribution::parse("crisis").kind == IRDistribution::Kind::kCrisis);
  const auto c = IRDistribution::parse("beta(2.5,4)");
  CHECK(c.alpha == 2.5);
  CHECK(c.beta == 4.0);
  CHECK_THROWS_AS(IRDistribution::parse("gaussian"), ConfigError);
}
