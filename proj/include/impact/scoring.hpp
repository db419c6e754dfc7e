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

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "impact/investor_pool.hpp"
#include "impact/universe.hpp"

namespace impact {

struct Investment {
  int investor_id = 0;
  int paper_id = 0;
  double tokens = 0.0;
};

/// Sparse investor x paper token matrix for one cycle. Adding to an
/// existing (investor, paper) pair accumulates into that row, so rows stay
/// unique.
class InvestmentLedger {
 public:
  void add(int investor_id, int paper_id, double tokens);
  void merge(const InvestmentLedger& other);

  std::span<const Investment> rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  double tokens_of(int investor_id) const;
  std::vector<Investment> rows_of(int investor_id) const;

 private:
  static long long key(int investor_id, int paper_id);

  std::vector<Investment> rows_;
  std::unordered_map<long long, std::size_t> index_;
};

/// NIS per paper id (vector index = paper id, size n_papers). Each row
/// contributes tokens x the investor's current ir.
std::vector<double> nis(const InvestmentLedger& ledger, std::span<const Investor> investors,
                        int n_papers);

/// Paper ids by descending score, ties by ascending id.
std::vector<int> rank_papers(std::span<const double> scores);

/// Share of gems among the first top_slots ranked ids.
double gem_recall(std::span<const int> ranked, std::span<const Paper> papers, int top_slots);

/// Share of gems contained in an unranked accept set.
double gem_recall_of_set(std::span<const int> accepted, std::span<const Paper> papers);

/// Rank correlation with average ranks for ties. Returns NaN when either
/// input is constant.
double spearman(std::span<const double> xs, std::span<const double> ys);

double pearson(std::span<const double> xs, std::span<const double> ys);

/// 1-based ranks, ties share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// ledger.csv rows for one trial (no header).
void append_ledger_csv(std::ostream& out, int trial, const InvestmentLedger& ledger);

}  // namespace impact
