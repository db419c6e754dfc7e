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
#include <limits>

#include "helpers.hpp"
#include "impact/error.hpp"
#include "impact/scoring.hpp"

using namespace impact;

TEST_CASE("nis identities") {
  std::vector<Investor> investors{test::make_investor(0, 1.0), test::make_investor(1, 0.5),
                                  test::make_investor(2, 1.2)};
  InvestmentLedger one;
  one.add(0, 0, 10.0);
  CHECK(nis(one, investors, 1)[0] == 10.0);

  InvestmentLedger two;
  two.add(1, 0, 10.0);
  two.add(2, 0, 5.0);
  CHECK(nis(two, investors, 1)[0] == doctest::Approx(11.0));

  InvestmentLedger empty;
  for (double v : nis(empty, investors, 4)) CHECK(v == 0.0);
}

TEST_CASE("nis is additive over merged ledgers") {
  Rng rng(5);
  std::vector<Investor> investors;
  for (int i = 0; i < 20; ++i) investors.push_back(test::make_investor(i, rng.uniform()));
  InvestmentLedger a, b;
  for (int k = 0; k < 200; ++k) {
    a.add(rng.uniform_int(0, 19), rng.uniform_int(0, 29), rng.uniform(0, 5));
    b.add(rng.uniform_int(0, 19), rng.uniform_int(0, 29), rng.uniform(0, 5));
  }
  InvestmentLedger both = a;
  both.merge(b);
  const auto na = nis(a, investors, 30), nb = nis(b, investors, 30), nab = nis(both, investors, 30);
  for (int p = 0; p < 30; ++p) CHECK(nab[static_cast<std::size_t>(p)] == doctest::Approx(na[static_cast<std::size_t>(p)] + nb[static_cast<std::size_t>(p)]));
}

TEST_CASE("ledger rejects bad rows and unknown investors") {
  InvestmentLedger l;
  CHECK_THROWS_AS(l.add(0, 0, -1.0), DataError);
  l.add(7, 0, 1.0);
  std::vector<Investor> investors{test::make_investor(0, 1.0)};
  CHECK_THROWS_AS(nis(l, investors, 1), DataError);
}

TEST_CASE("ranking is by score, then lowest id") {
  const std::vector<double> s{1.0, 3.0, 3.0, 2.0};
  CHECK(rank_papers(s) == std::vector<int>{1, 2, 3, 0});
}

TEST_CASE("gem recall") {
  std::vector<Paper> papers;
  for (int i = 0; i < 6; ++i) papers.push_back(test::make_paper(i, i < 2 ? TrueClass::kTop20 : TrueClass::kMid60));
  CHECK(gem_recall(std::vector<int>{0, 1, 2, 3, 4, 5}, papers, 2) == 1.0);
  CHECK(gem_recall(std::vector<int>{2, 3, 0, 1, 4, 5}, papers, 2) == 0.0);
  CHECK(gem_recall(std::vector<int>{2, 0, 3, 1, 4, 5}, papers, 2) == 0.5);
  CHECK(gem_recall(std::vector<int>{5, 4, 3, 2, 1, 0}, papers, 6) == 1.0);
  CHECK(gem_recall_of_set(std::vector<int>{0, 3}, papers) == 0.5);
}

TEST_CASE("spearman") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> r{5, 4, 3, 2, 1};
  CHECK(spearman(x, x) == doctest::Approx(1.0));
  CHECK(spearman(x, r) == doctest::Approx(-1.0));
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) == doctest::Approx(0.5));
  CHECK(std::isnan(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3})));
  CHECK_THROWS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}));
}

TEST_CASE("average ranks share ties") {
  const auto r = average_ranks(std::vector<double>{10, 20, 20, 5});
  CHECK(r == std::vector<double>{2.0, 3.5, 3.5, 1.0});
}
