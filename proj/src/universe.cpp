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

#include "impact/universe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "impact/error.hpp"

namespace impact {

double true_score(TrueClass c) {
  switch (c) {
    case TrueClass::kTop20: return 10.0;
    case TrueClass::kMid60: return 6.0;
    case TrueClass::kBot20: return 4.0;
  }
  return 0.0;
}

std::string_view to_string(TrueClass c) {
  switch (c) {
    case TrueClass::kTop20: return "Top20";
    case TrueClass::kMid60: return "Mid60";
    case TrueClass::kBot20: return "Bot20";
  }
  return "?";
}

TrueClass class_from_string(std::string_view name) {
  if (name == "Top20" || name == "top") return TrueClass::kTop20;
  if (name == "Mid60" || name == "mid") return TrueClass::kMid60;
  if (name == "Bot20" || name == "bot") return TrueClass::kBot20;
  throw ConfigError("unknown class '" + std::string(name) + "' (expected Top20, Mid60 or Bot20)");
}

bool Paper::authored_by(int actor_id) const {
  return std::find(authors.begin(), authors.end(), actor_id) != authors.end();
}

void UniverseConfig::validate() const {
  require(market_size > 0, "universe.market_size must be > 0");
  require(n_submissions > 0, "universe.n_submissions must be > 0");
  require(market_size <= n_submissions, "universe.market_size must not exceed n_submissions");
  for (double f : {frac_top, frac_mid, frac_bot}) {
    require(f >= 0.0 && f <= 1.0, "universe class fractions must lie in [0, 1]");
  }
  require(std::abs(frac_top + frac_mid + frac_bot - 1.0) < 1e-9,
          "universe class fractions must sum to 1");
  for (const auto& r : hype_ranges) require(r.lo <= r.hi, "universe hype range has lo > hi");
  require(authors_per_paper >= 1, "universe.authors_per_paper must be >= 1");
  require(author_pool_size >= authors_per_paper,
          "universe.author_pool_size must be >= authors_per_paper");
  require(author_overlap >= 0.0 && author_overlap <= 1.0,
          "universe.author_overlap must lie in [0, 1]");
}

std::array<int, 3> UniverseConfig::target_counts() const {
  const int top = static_cast<int>(std::lround(market_size * frac_top));
  const int bot = static_cast<int>(std::lround(market_size * frac_bot));
  const int mid = std::max(0, market_size - top - bot);
  return {top, mid, bot};
}

int UniverseConfig::author_id_base() const {
  return static_cast<int>(std::lround((1.0 - author_overlap) * author_pool_size));
}

std::vector<Paper> generate_universe(const UniverseConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto counts = cfg.target_counts();

  std::vector<TrueClass> labels;
  labels.reserve(static_cast<std::size_t>(cfg.market_size));
  for (TrueClass c : kAllClasses) labels.insert(labels.end(), counts[index_of(c)], c);
  rng.shuffle(labels);

  const int base = cfg.author_id_base();
  std::vector<Paper> papers(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Paper& p = papers[i];
    p.id = static_cast<int>(i);
    p.true_class = labels[i];
    p.v_true = true_score(labels[i]);
    const HypeRange& r = cfg.hype_ranges[index_of(labels[i])];
    p.hype = rng.uniform(r.lo, r.hi);
    p.authors = rng.sample_without_replacement(cfg.author_pool_size, cfg.authors_per_paper);
    for (int& a : p.authors) a += base;
  }
  return papers;
}

std::array<int, 3> class_counts(std::span<const Paper> papers) {
  std::array<int, 3> counts{0, 0, 0};
  for (const auto& p : papers) ++counts[index_of(p.true_class)];
  return counts;
}

void write_papers_csv(const std::string& path, std::span<const Paper> papers) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "id,true_class,v_true,hype,authors\n";
  out.precision(17);
  for (const auto& p : papers) {
    out << p.id << ',' << to_string(p.true_class) << ',' << p.v_true << ',' << p.hype << ',';
    for (std::size_t i = 0; i < p.authors.size(); ++i) {
      if (i) out << ';';
      out << p.authors[i];
    }
    out << '\n';
  }
}

}  // namespace impact
