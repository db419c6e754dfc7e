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

#include <algorithm>
#include <cmath>
#include <set>

#include "helpers.hpp"
#include "impact/error.hpp"
#include "impact/protocol_im_rebel.hpp"
#include "impact/scoring.hpp"

using namespace impact;

TEST_CASE("attractiveness interpolates truth and hype") {
  const Paper p = [] {
    auto x = test::make_paper(0, TrueClass::kTop20, 4.0);
    return x;
  }();
  CHECK(attractiveness(test::make_investor(0, 1.0), p) == 10.0);
  CHECK(attractiveness(test::make_investor(0, 0.0), p) == 4.0);
  CHECK(attractiveness(test::make_investor(0, 0.5), p) == doctest::Approx(7.0));
}

TEST_CASE("perfect investor keeps every scanned gem") {
  Rng u(1);
  const auto papers = generate_universe(UniverseConfig{}, u);
  const auto perfect = test::make_investor(0, 1.0);
  Rng r(2);
  for (int rep = 0; rep < 200; ++rep) {
    const auto scan = r.sample_without_replacement(600, 50);
    const auto port = select_portfolio(perfect, papers, scan, 20);
    int gems_scanned = 0;
    for (int id : scan) gems_scanned += papers[static_cast<std::size_t>(id)].is_gem();
    int gems_kept = 0;
    for (int id : port) gems_kept += papers[static_cast<std::size_t>(id)].is_gem();
    REQUIRE(gems_kept == std::min(gems_scanned, 20));
  }
}

TEST_CASE("portfolio is a subset of the scan") {
  Rng u(3);
  const auto papers = generate_universe(UniverseConfig{}, u);
  RebelConfig cfg;
  Rng r(4);
  const auto inv = test::make_investor(0, 0.3);
  for (int rep = 0; rep < 50; ++rep) {
    const auto port = discover(inv, papers, cfg, r);
    CHECK(port.size() == 20);
    CHECK(std::set<int>(port.begin(), port.end()).size() == 20);
  }
  cfg.n_pick = cfg.n_scan;
  const auto scan = r.sample_without_replacement(600, 50);
  auto port = select_portfolio(inv, papers, scan, 50);
  auto sorted_scan = scan;
  std::sort(port.begin(), port.end());
  std::sort(sorted_scan.begin(), sorted_scan.end());
  CHECK(port == sorted_scan);
}

TEST_CASE("hype-driven investors mostly pick middle papers") {
  Rng u(5);
  const auto papers = generate_universe(UniverseConfig{}, u);
  RebelConfig cfg;
  const auto blind = test::make_investor(0, 0.0);
  Rng r(6);
  long mids = 0, slots = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    for (int id : discover(blind, papers, cfg, r)) {
      mids += papers[static_cast<std::size_t>(id)].true_class == TrueClass::kMid60;
      ++slots;
    }
  }
  CHECK(static_cast<double>(mids) / slots > 0.75);
}

TEST_CASE("evaluation noise scales with one minus skill") {
  const Paper p = test::make_paper(0, TrueClass::kMid60);
  RebelConfig cfg;
  Rng r(7);
  CHECK(evaluate(test::make_investor(0, 1.0), p, cfg, r) == 6.0);
  for (double skill : {0.0, 0.5}) {
    std::vector<double> err;
    const auto inv = test::make_investor(0, skill);
    for (int i = 0; i < 100000; ++i) err.push_back(evaluate(inv, p, cfg, r) - 6.0);
    const double expected = 2.0 * (1.0 - skill);
    // sd of the sample sd is about sigma / sqrt(2n).
    CHECK(std::abs(test::sample_sd(err) - expected) < 3.0 * expected / std::sqrt(2.0 * 100000));
  }
}

TEST_CASE("softmax allocation") {
  RebelConfig cfg;
  const std::vector<double> flat(20, 7.0);
  for (double t : allocate_softmax(flat, cfg)) CHECK(t == doctest::Approx(5.0));

  cfg.tau = 2.0;
  const std::vector<double> two{10.0, 6.0};
  const auto x = allocate_softmax(two, cfg);
  const double e2 = std::exp(2.0);
  CHECK(x[0] == doctest::Approx(100.0 * e2 / (1.0 + e2)));
  CHECK(x[0] == doctest::Approx(88.08).epsilon(1e-4));
  CHECK(x[1] == doctest::Approx(11.92).epsilon(1e-3));

  cfg.tau = 1e-4;
  const std::vector<double> three{5.0, 9.0, 8.999};
  const auto y = allocate_softmax(three, cfg);
  CHECK(std::abs(y[1] - 100.0) < 0.01);
}

TEST_CASE("balanced scans cover every paper evenly") {
  Rng u(8);
  const auto papers = generate_universe(UniverseConfig{}, u);
  Rng r(9);
  const auto design = balanced_scan_design(papers, 200, 25, r);
  REQUIRE(design.size() == 200);
  std::vector<int> hits(600, 0);
  for (const auto& scan : design) {
    CHECK(scan.size() == 25);
    CHECK(std::set<int>(scan.begin(), scan.end()).size() == 25);
    for (int id : scan) ++hits[static_cast<std::size_t>(id)];
  }
  const auto [lo, hi] = std::minmax_element(hits.begin(), hits.end());
  CHECK(*lo >= 8);
  CHECK(*hi <= 9);
}

TEST_CASE("rebel ledger budgets and support") {
  Rng u(10), pr(11);
  const auto papers = generate_universe(UniverseConfig{}, u);
  PoolConfig pc;
  pc.distribution = IRDistribution::crisis();
  const auto investors = generate_pool(pc, pr);
  for (auto mode : {ScanMode::kBalanced, ScanMode::kIndependent}) {
    RebelConfig cfg;
    cfg.scan_mode = mode;
    Rng r(12);
    const auto ledger = run_rebel_im(papers, investors, cfg, r);
    CHECK(ledger.size() == 200 * 20);
    for (const auto& inv : investors) CHECK(ledger.tokens_of(inv.id) == doctest::Approx(100.0).epsilon(1e-12));
    for (const auto& row : ledger.rows()) CHECK(row.tokens >= 0.0);
  }
}

TEST_CASE("pledges come out of the honest budget") {
  Rng u(13), pr(14);
  const auto papers = generate_universe(UniverseConfig{}, u);
  const auto investors = generate_pool(PoolConfig{}, pr);
  const std::vector<Pledge> pledges{{3, 0, 40.0}, {3, 1, 20.0}};
  Rng r(15);
  const auto ledger = run_rebel_im(papers, investors, RebelConfig{}, r, pledges);
  CHECK(ledger.tokens_of(3) == doctest::Approx(100.0));
  Rng a(16), b(16);
  const auto plain = run_rebel_im(papers, investors, RebelConfig{}, a);
  const auto none = run_rebel_im(papers, investors, RebelConfig{}, b, {});
  REQUIRE(plain.size() == none.size());
  for (std::size_t i = 0; i < plain.size(); ++i) CHECK(plain.rows()[i].tokens == none.rows()[i].tokens);
}

TEST_CASE("invalid rebel configs") {
  RebelConfig cfg;
  cfg.n_pick = 60;
  CHECK_THROWS_AS(cfg.validate(600), ConfigError);
  cfg = RebelConfig{};
  cfg.tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(600), ConfigError);
}
