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

#include "impact/protocol_im_rebel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "impact/error.hpp"
#include "impact/protocol_im_passive.hpp"

namespace impact {

void RebelConfig::validate(int n_papers) const {
  require(n_pick >= 1, "rebel.n_pick must be >= 1");
  require(n_pick <= n_scan, "rebel.n_pick must not exceed rebel.n_scan");
  require(n_scan <= n_papers, "rebel.n_scan must not exceed the number of papers");
  require(tau > 0.0, "rebel.tau must be > 0");
  require(noise_sigma0 >= 0.0, "rebel.noise_sigma0 must be >= 0");
  require(wallet_size >= 0.0, "rebel.wallet_size must be >= 0");
  if (cap_per_paper) require(*cap_per_paper > 0.0, "rebel.cap_per_paper must be > 0");
}

double attractiveness(const Investor& investor, const Paper& paper) {
  return investor.skill * paper.v_true + (1.0 - investor.skill) * paper.hype;
}

namespace {

std::vector<std::size_t> index_by_id(std::span<const Paper> papers) {
  std::vector<std::size_t> idx(papers.size());
  for (std::size_t i = 0; i < papers.size(); ++i) idx.at(static_cast<std::size_t>(papers[i].id)) = i;
  return idx;
}

}  // namespace

std::vector<int> select_portfolio(const Investor& investor, std::span<const Paper> papers,
                                  std::span<const int> scanned_ids, int n_pick) {
  const auto idx = index_by_id(papers);
  std::vector<std::pair<double, int>> scored;
  scored.reserve(scanned_ids.size());
  for (int id : scanned_ids) {
    scored.emplace_back(attractiveness(investor, papers[idx[static_cast<std::size_t>(id)]]), id);
  }
  const auto keep = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(n_pick));
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                    });
  std::vector<int> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(scored[i].second);
  return out;
}

std::vector<int> discover(const Investor& investor, std::span<const Paper> papers,
                          const RebelConfig& cfg, Rng& rng) {
  cfg.validate(static_cast<int>(papers.size()));
  auto scan = rng.sample_without_replacement(static_cast<int>(papers.size()), cfg.n_scan);
  for (int& i : scan) i = papers[static_cast<std::size_t>(i)].id;
  return select_portfolio(investor, papers, scan, cfg.n_pick);
}

std::vector<std::vector<int>> balanced_scan_design(std::span<const Paper> papers, int n_investors,
                                                   int n_scan, Rng& rng) {
  const int n = static_cast<int>(papers.size());
  require(n_scan <= n, "scan size exceeds the number of papers");
  const std::size_t needed = static_cast<std::size_t>(n_investors) * static_cast<std::size_t>(n_scan);

  std::vector<int> seq;
  seq.reserve(needed + static_cast<std::size_t>(n));
  std::vector<int> perm(static_cast<std::size_t>(n));
  while (seq.size() < needed) {
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    seq.insert(seq.end(), perm.begin(), perm.end());
  }

  // A chunk can only repeat a paper when it straddles two permutations.
  // Swap the repeat with a later element of the same permutation that the
  // chunk does not hold yet; multiplicities stay untouched.
  const std::size_t un = static_cast<std::size_t>(n);
  for (std::size_t c = 0; c < static_cast<std::size_t>(n_investors); ++c) {
    const std::size_t begin = c * static_cast<std::size_t>(n_scan);
    const std::size_t end = begin + static_cast<std::size_t>(n_scan);
    std::unordered_set<int> seen;
    for (std::size_t pos = begin; pos < end; ++pos) {
      if (seen.insert(seq[pos]).second) continue;
      const std::size_t perm_end = (pos / un + 1) * un;
      bool swapped = false;
      for (std::size_t q = end; q < perm_end && !swapped; ++q) {
        if (!seen.count(seq[q])) {
          std::swap(seq[pos], seq[q]);
          swapped = seen.insert(seq[pos]).second;
        }
      }
      if (!swapped) throw GenerationError("balanced scan design could not repair a chunk");
    }
  }

  std::vector<std::vector<int>> scans(static_cast<std::size_t>(n_investors));
  for (std::size_t c = 0; c < scans.size(); ++c) {
    auto& scan = scans[c];
    scan.reserve(static_cast<std::size_t>(n_scan));
    for (std::size_t pos = c * static_cast<std::size_t>(n_scan);
         pos < (c + 1) * static_cast<std::size_t>(n_scan); ++pos) {
      scan.push_back(papers[static_cast<std::size_t>(seq[pos])].id);
    }
  }
  return scans;
}

double evaluate(const Investor& investor, const Paper& paper, const RebelConfig& cfg, Rng& rng) {
  const double sd = cfg.noise_sigma0 * (1.0 - investor.skill);
  return paper.v_true + rng.normal(0.0, sd);
}

std::vector<double> allocate_softmax(std::span<const double> v_obs, const RebelConfig& cfg) {
  return allocate_softmax(v_obs, cfg, cfg.wallet_size);
}

std::vector<double> allocate_softmax(std::span<const double> v_obs, const RebelConfig& cfg,
                                     double budget) {
  if (v_obs.empty()) throw ConfigError("softmax allocation needs a non-empty portfolio");
  const double top = *std::max_element(v_obs.begin(), v_obs.end());
  std::vector<double> w;
  w.reserve(v_obs.size());
  for (double v : v_obs) w.push_back(std::exp((v - top) / cfg.tau));
  const double z = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x = budget * x / z;
  if (cfg.cap_per_paper) clamp_and_renormalize(w, *cfg.cap_per_paper, budget);
  return w;
}

InvestmentLedger run_rebel_im(std::span<const Paper> papers, std::span<const Investor> investors,
                              const RebelConfig& cfg, Rng& rng, std::span<const Pledge> pledges) {
  const int n = static_cast<int>(papers.size());
  cfg.validate(n);
  const auto idx = index_by_id(papers);

  std::unordered_map<int, double> pledged;
  for (const auto& p : pledges) pledged[p.investor_id] += p.tokens;

  std::vector<std::vector<int>> scans;
  if (cfg.scan_mode == ScanMode::kBalanced) {
    Rng scan_rng = rng.split(stream::kScan);
    scans = balanced_scan_design(papers, static_cast<int>(investors.size()), cfg.n_scan, scan_rng);
  }

  InvestmentLedger ledger;
  for (const auto& p : pledges) ledger.add(p.investor_id, p.paper_id, p.tokens);

  for (std::size_t i = 0; i < investors.size(); ++i) {
    const Investor& inv = investors[i];
    Rng inv_rng = rng.split({stream::kInvestor, static_cast<std::uint64_t>(inv.id)});

    std::vector<int> portfolio;
    if (cfg.scan_mode == ScanMode::kBalanced) {
      portfolio = select_portfolio(inv, papers, scans[i], cfg.n_pick);
    } else {
      portfolio = discover(inv, papers, cfg, inv_rng);
    }

    std::vector<double> v_obs;
    v_obs.reserve(portfolio.size());
    for (int id : portfolio) v_obs.push_back(evaluate(inv, papers[idx[static_cast<std::size_t>(id)]], cfg, inv_rng));

    const auto it = pledged.find(inv.id);
    const double budget = std::max(0.0, cfg.wallet_size - (it == pledged.end() ? 0.0 : it->second));
    if (budget <= 1e-9 * cfg.wallet_size) continue;
    const auto tokens = allocate_softmax(v_obs, cfg, budget);
    for (std::size_t j = 0; j < portfolio.size(); ++j) ledger.add(inv.id, portfolio[j], tokens[j]);
  }
  return ledger;
}

}  // namespace impact
