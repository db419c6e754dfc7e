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

#include "impact/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "impact/error.hpp"

namespace impact {

long long InvestmentLedger::key(int investor_id, int paper_id) {
  return (static_cast<long long>(investor_id) << 32) | static_cast<unsigned int>(paper_id);
}

void InvestmentLedger::add(int investor_id, int paper_id, double tokens) {
  if (!(tokens >= 0.0)) throw DataError("ledger tokens must be non-negative");
  const auto k = key(investor_id, paper_id);
  if (auto it = index_.find(k); it != index_.end()) {
    rows_[it->second].tokens += tokens;
    return;
  }
  index_.emplace(k, rows_.size());
  rows_.push_back({investor_id, paper_id, tokens});
}

void InvestmentLedger::merge(const InvestmentLedger& other) {
  for (const auto& r : other.rows_) add(r.investor_id, r.paper_id, r.tokens);
}

double InvestmentLedger::tokens_of(int investor_id) const {
  double total = 0.0;
  for (const auto& r : rows_) {
    if (r.investor_id == investor_id) total += r.tokens;
  }
  return total;
}

std::vector<Investment> InvestmentLedger::rows_of(int investor_id) const {
  std::vector<Investment> out;
  for (const auto& r : rows_) {
    if (r.investor_id == investor_id) out.push_back(r);
  }
  return out;
}

std::vector<double> nis(const InvestmentLedger& ledger, std::span<const Investor> investors,
                        int n_papers) {
  std::unordered_map<int, double> ir_of;
  ir_of.reserve(investors.size());
  for (const auto& inv : investors) ir_of[inv.id] = inv.ir;

  std::vector<double> scores(static_cast<std::size_t>(n_papers), 0.0);
  for (const auto& r : ledger.rows()) {
    const auto it = ir_of.find(r.investor_id);
    if (it == ir_of.end()) {
      throw DataError("ledger references unknown investor id " + std::to_string(r.investor_id));
    }
    if (r.paper_id < 0 || r.paper_id >= n_papers) {
      throw DataError("ledger references unknown paper id " + std::to_string(r.paper_id));
    }
    scores[static_cast<std::size_t>(r.paper_id)] += r.tokens * it->second;
  }
  return scores;
}

std::vector<int> rank_papers(std::span<const double> scores) {
  std::vector<int> ids(scores.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  return ids;
}

namespace {

int gem_total(std::span<const Paper> papers) {
  return static_cast<int>(std::count_if(papers.begin(), papers.end(),
                                        [](const Paper& p) { return p.is_gem(); }));
}

std::vector<char> gem_mask(std::span<const Paper> papers) {
  std::vector<char> mask(papers.size(), 0);
  for (const auto& p : papers) {
    if (p.id < 0 || static_cast<std::size_t>(p.id) >= papers.size()) {
      throw DataError("paper ids must be 0..n-1");
    }
    mask[static_cast<std::size_t>(p.id)] = p.is_gem() ? 1 : 0;
  }
  return mask;
}

}  // namespace

double gem_recall(std::span<const int> ranked, std::span<const Paper> papers, int top_slots) {
  if (top_slots < 0 || static_cast<std::size_t>(top_slots) > papers.size()) {
    throw ConfigError("top_slots must lie in [0, number of papers]");
  }
  const int gems = gem_total(papers);
  if (gems == 0) throw DataError("gem recall is undefined without gems");
  const auto mask = gem_mask(papers);
  const auto n = std::min(ranked.size(), static_cast<std::size_t>(top_slots));
  int found = 0;
  for (std::size_t i = 0; i < n; ++i) found += mask.at(static_cast<std::size_t>(ranked[i]));
  return static_cast<double>(found) / gems;
}

double gem_recall_of_set(std::span<const int> accepted, std::span<const Paper> papers) {
  const int gems = gem_total(papers);
  if (gems == 0) throw DataError("gem recall is undefined without gems");
  const auto mask = gem_mask(papers);
  int found = 0;
  for (int id : accepted) found += mask.at(static_cast<std::size_t>(id));
  return static_cast<double>(found) / gems;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError("correlation inputs differ in length");
  if (xs.size() < 2) throw DataError("correlation needs at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError("spearman inputs differ in length");
  if (xs.size() < 2) throw DataError("spearman needs at least two points");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

void append_ledger_csv(std::ostream& out, int trial, const InvestmentLedger& ledger) {
  for (const auto& r : ledger.rows()) {
    out << trial << ',' << r.investor_id << ',' << r.paper_id << ',' << r.tokens << '\n';
  }
}

}  // namespace impact
