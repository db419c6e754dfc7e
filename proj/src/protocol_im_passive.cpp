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

#include "impact/protocol_im_passive.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "impact/error.hpp"

namespace impact {

void PassiveImConfig::validate() const {
  require(reviews_per_paper >= 1, "passive.reviews_per_paper must be >= 1");
  for (double w : class_weights) require(w > 0.0, "passive.class_weights must be positive");
  require(class_weights[0] > class_weights[1] && class_weights[1] > class_weights[2],
          "passive.class_weights must be strictly decreasing top > mid > bot");
  require(wallet_size >= 0.0, "passive.wallet_size must be >= 0");
  if (cap_per_paper) require(*cap_per_paper > 0.0, "passive.cap_per_paper must be > 0");
}

std::vector<std::pair<int, int>> Assignment::edges(std::span<const Investor> investors) const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < papers_of.size(); ++i) {
    for (int p : papers_of[i]) out.emplace_back(investors[i].id, p);
  }
  return out;
}

std::size_t Assignment::edge_count() const {
  std::size_t n = 0;
  for (const auto& v : papers_of) n += v.size();
  return n;
}

Assignment build_fixed_graph(std::span<const Paper> papers, std::span<const Investor> investors,
                             const PassiveImConfig& cfg, Rng& rng) {
  cfg.validate();
  const long long n_papers = static_cast<long long>(papers.size());
  const long long n_inv = static_cast<long long>(investors.size());
  const long long k = cfg.reviews_per_paper;
  require(n_inv > 0, "fixed graph needs at least one investor");
  require((n_papers * k) % n_inv == 0,
          "papers x reviews_per_paper (" + std::to_string(n_papers * k) +
              ") is not divisible by the number of investors (" + std::to_string(n_inv) + ")");
  const long long per_investor = n_papers * k / n_inv;
  require(per_investor <= n_papers, "investor degree exceeds the number of papers");
  require(k <= n_inv, "reviews_per_paper exceeds the number of investors");

  // Stubs: slot s belongs to investor s / per_investor.
  const std::size_t total = static_cast<std::size_t>(n_papers * k);
  std::vector<int> paper_stub(total);
  for (std::size_t s = 0; s < total; ++s) paper_stub[s] = static_cast<int>(s / static_cast<std::size_t>(k));
  rng.shuffle(paper_stub);

  auto owner = [&](std::size_t slot) { return static_cast<std::size_t>(slot / static_cast<std::size_t>(per_investor)); };
  auto conflicts_author = [&](std::size_t inv, int paper_idx) {
    return papers[static_cast<std::size_t>(paper_idx)].authored_by(investors[inv].id);
  };

  std::set<std::pair<std::size_t, int>> present;
  std::vector<std::size_t> bad;
  for (std::size_t s = 0; s < total; ++s) {
    const auto edge = std::make_pair(owner(s), paper_stub[s]);
    if (conflicts_author(edge.first, edge.second) || !present.insert(edge).second) {
      bad.push_back(s);
    }
  }

  const std::size_t max_attempts = 200 * total + 1000;
  std::size_t attempts = 0;
  while (!bad.empty()) {
    const std::size_t s = bad.back();
    const std::size_t inv_s = owner(s);
    const int paper_s = paper_stub[s];
    bool fixed = false;
    while (!fixed) {
      if (++attempts > max_attempts) {
        throw GenerationError("fixed-graph repair did not converge; constraints may be infeasible");
      }
      const std::size_t t = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(total) - 1));
      const std::size_t inv_t = owner(t);
      const int paper_t = paper_stub[t];
      if (t == s || inv_t == inv_s || paper_t == paper_s) continue;
      // After the swap: (inv_s, paper_t) and (inv_t, paper_s).
      if (present.count({inv_s, paper_t}) || present.count({inv_t, paper_s})) continue;
      if (conflicts_author(inv_s, paper_t) || conflicts_author(inv_t, paper_s)) continue;
      // Slot t currently holds a valid edge unless it is itself pending.
      const bool t_pending = std::find(bad.begin(), bad.end(), t) != bad.end();
      if (!t_pending) present.erase({inv_t, paper_t});
      if (t_pending) bad.erase(std::find(bad.begin(), bad.end(), t));
      std::swap(paper_stub[s], paper_stub[t]);
      present.insert({inv_s, paper_t});
      present.insert({inv_t, paper_s});
      fixed = true;
    }
    bad.erase(std::find(bad.begin(), bad.end(), s));
  }

  Assignment out;
  out.papers_of.assign(static_cast<std::size_t>(n_inv), {});
  for (std::size_t s = 0; s < total; ++s) {
    out.papers_of[owner(s)].push_back(papers[static_cast<std::size_t>(paper_stub[s])].id);
  }
  for (auto& v : out.papers_of) std::sort(v.begin(), v.end());
  return out;
}

TrueClass classify(const Paper& paper, const Investor& investor, Rng& rng, Misclassification mode) {
  if (rng.bernoulli(investor.skill)) return paper.true_class;
  const auto truth = index_of(paper.true_class);
  if (mode == Misclassification::kAdjacent) {
    if (paper.true_class == TrueClass::kTop20) return TrueClass::kMid60;
    if (paper.true_class == TrueClass::kBot20) return TrueClass::kMid60;
    return rng.bernoulli(0.5) ? TrueClass::kTop20 : TrueClass::kBot20;
  }
  const auto offset = static_cast<std::size_t>(rng.uniform_int(1, 2));
  return kAllClasses[(truth + offset) % 3];
}

void clamp_and_renormalize(std::vector<double>& tokens, double cap, double total) {
  if (tokens.empty()) return;
  if (cap * static_cast<double>(tokens.size()) <= total) {
    std::fill(tokens.begin(), tokens.end(), cap);
    return;
  }
  std::vector<char> clamped(tokens.size(), 0);
  for (int iter = 0; iter < static_cast<int>(tokens.size()) + 1; ++iter) {
    double fixed_mass = 0.0, free_mass = 0.0;
    bool changed = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!clamped[i] && tokens[i] > cap) {
        clamped[i] = 1;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (clamped[i]) fixed_mass += cap;
      else free_mass += tokens[i];
    }
    const double scale = free_mass > 0.0 ? (total - fixed_mass) / free_mass : 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      tokens[i] = clamped[i] ? cap : tokens[i] * scale;
    }
    if (!changed) break;
  }
}

std::vector<double> allocate_passive(std::span<const TrueClass> classifications,
                                     const PassiveImConfig& cfg) {
  if (classifications.empty()) throw ConfigError("passive allocation needs at least one paper");
  double weight_sum = 0.0;
  for (TrueClass c : classifications) weight_sum += cfg.class_weights[index_of(c)];
  std::vector<double> tokens;
  tokens.reserve(classifications.size());
  for (TrueClass c : classifications) {
    tokens.push_back(cfg.wallet_size * cfg.class_weights[index_of(c)] / weight_sum);
  }
  if (cfg.cap_per_paper) clamp_and_renormalize(tokens, *cfg.cap_per_paper, cfg.wallet_size);
  return tokens;
}

InvestmentLedger run_passive_im(std::span<const Paper> papers, std::span<const Investor> investors,
                                const PassiveImConfig& cfg, Rng& rng) {
  Rng graph_rng = rng.split(stream::kGraph);
  const Assignment assignment = build_fixed_graph(papers, investors, cfg, graph_rng);

  std::vector<std::size_t> index_of_id(papers.size());
  for (std::size_t i = 0; i < papers.size(); ++i) index_of_id[static_cast<std::size_t>(papers[i].id)] = i;

  InvestmentLedger ledger;
  for (std::size_t i = 0; i < investors.size(); ++i) {
    const Investor& inv = investors[i];
    const auto& assigned = assignment.papers_of[i];
    if (assigned.empty()) continue;
    Rng inv_rng = rng.split({stream::kInvestor, static_cast<std::uint64_t>(inv.id)});
    std::vector<TrueClass> labels;
    labels.reserve(assigned.size());
    for (int pid : assigned) {
      labels.push_back(classify(papers[index_of_id[static_cast<std::size_t>(pid)]], inv, inv_rng,
                                cfg.misclassification));
    }
    const auto tokens = allocate_passive(labels, cfg);
    for (std::size_t j = 0; j < assigned.size(); ++j) ledger.add(inv.id, assigned[j], tokens[j]);
  }
  return ledger;
}

}  // namespace impact
