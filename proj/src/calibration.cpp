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

#include "impact/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "impact/error.hpp"

namespace impact {

void MvisModel::validate() const { require(sigma_mvis >= 0.0, "mvis.sigma must be >= 0"); }

void CalibrationRule::validate() const {
  require(down_factor > 0.0 && down_factor < 1.0, "calibration.down_factor must lie in (0, 1)");
  require(up_factor > 1.0, "calibration.up_factor must be > 1");
  require(decay_lambda >= 0.0 && decay_lambda < 1.0, "calibration.decay_lambda must lie in [0, 1)");
  require(ir_floor < ir_cap, "calibration.ir_floor must be below ir_cap");
  require(alignment_threshold >= 0.0 && alignment_threshold <= 1.0,
          "calibration.alignment_threshold must lie in [0, 1]");
}

std::vector<double> simulate_mvis(std::span<const Paper> papers, const MvisModel& model, Rng& rng) {
  model.validate();
  std::vector<double> out(papers.size(), 0.0);
  for (const auto& p : papers) out.at(static_cast<std::size_t>(p.id)) = p.v_true + rng.normal(0.0, model.sigma_mvis);
  return out;
}

std::vector<double> mvis_percentiles(std::span<const double> mvis) {
  std::vector<double> out(mvis.size(), 0.5);
  if (mvis.size() < 2) return out;
  const auto ranks = average_ranks(mvis);
  const double denom = static_cast<double>(mvis.size() - 1);
  for (std::size_t i = 0; i < mvis.size(); ++i) out[i] = (ranks[i] - 1.0) / denom;
  return out;
}

std::optional<double> portfolio_alignment(int investor_id, const InvestmentLedger& ledger,
                                          std::span<const double> percentiles) {
  double tokens = 0.0, weighted = 0.0;
  for (const auto& r : ledger.rows()) {
    if (r.investor_id != investor_id) continue;
    tokens += r.tokens;
    weighted += r.tokens * percentiles[static_cast<std::size_t>(r.paper_id)];
  }
  if (tokens <= 0.0) return std::nullopt;
  return weighted / tokens;
}

std::vector<std::optional<double>> portfolio_alignments(std::span<const Investor> investors,
                                                        const InvestmentLedger& ledger,
                                                        std::span<const double> percentiles) {
  std::unordered_map<int, std::pair<double, double>> acc;
  for (const auto& r : ledger.rows()) {
    auto& [tokens, weighted] = acc[r.investor_id];
    tokens += r.tokens;
    weighted += r.tokens * percentiles[static_cast<std::size_t>(r.paper_id)];
  }
  std::vector<std::optional<double>> out(investors.size());
  for (std::size_t i = 0; i < investors.size(); ++i) {
    const auto it = acc.find(investors[i].id);
    if (it != acc.end() && it->second.first > 0.0) out[i] = it->second.second / it->second.first;
  }
  return out;
}

double update_ir(double ir, std::optional<double> alignment, const CalibrationRule& rule,
                 double threshold) {
  double next = ir;
  if (alignment) {
    next = ir * (*alignment >= threshold ? rule.up_factor : rule.down_factor);
    next = std::clamp(next, rule.ir_floor, rule.ir_cap);
  }
  return next + rule.decay_lambda * (1.0 - next);
}

double update_ir(double ir, std::optional<double> alignment, const CalibrationRule& rule) {
  return update_ir(ir, alignment, rule, rule.alignment_threshold);
}

double effective_threshold(const CalibrationRule& rule,
                           std::span<const std::optional<double>> alignments) {
  if (rule.threshold_mode == ThresholdMode::kAbsolute) return rule.alignment_threshold;
  std::vector<double> values;
  for (const auto& a : alignments) {
    if (a) values.push_back(*a);
  }
  if (values.empty()) return rule.alignment_threshold;
  std::sort(values.begin(), values.end());
  // Linear interpolation between order statistics.
  const double pos = rule.alignment_threshold * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

void CalibrationConfig::validate() const {
  require(n_cycles >= 1, "calibration.n_cycles must be >= 1");
  require(lag >= 1, "calibration.lag must be >= 1");
  require(top_slots >= 0 && top_slots <= universe.market_size,
          "top_slots must lie in [0, market_size]");
  universe.validate();
  pool.validate();
  rebel.validate(universe.market_size);
  rule.validate();
  mvis.validate();
  if (ring_enabled) ring.validate(pool.n_investors);
}

namespace {

struct PendingLedger {
  int invested_cycle = 0;
  InvestmentLedger ledger;
  std::vector<double> percentiles;
};

}  // namespace

std::vector<CycleResult> run_cycles(const CalibrationConfig& cfg, Rng& rng) {
  cfg.validate();
  PoolConfig pool_cfg = cfg.pool;
  pool_cfg.ir_init = IrInit::kUnit;
  pool_cfg.ir_floor = cfg.rule.ir_floor;
  pool_cfg.ir_cap = cfg.rule.ir_cap;
  Rng pool_rng = rng.split(stream::kPool);
  std::vector<Investor> investors = generate_pool(pool_cfg, pool_rng);

  std::vector<int> ring_members;
  if (cfg.ring_enabled) {
    Rng roster_rng = rng.split(stream::kRing);
    ring_members = choose_ring_members(investors, cfg.ring, roster_rng);
  }

  // Honest top skill decile, fixed for the whole run.
  std::vector<std::size_t> honest;
  for (std::size_t i = 0; i < investors.size(); ++i) {
    if (!investors[i].ring_id) honest.push_back(i);
  }
  std::stable_sort(honest.begin(), honest.end(), [&](std::size_t a, std::size_t b) {
    return investors[a].skill > investors[b].skill;
  });
  honest.resize(std::max<std::size_t>(1, honest.size() / 10));

  std::vector<double> skills;
  for (const auto& inv : investors) skills.push_back(inv.skill);

  std::deque<PendingLedger> pending;
  std::vector<CycleResult> results;
  for (int cycle = 1; cycle <= cfg.n_cycles; ++cycle) {
    Rng cycle_rng = rng.split({stream::kCycle, static_cast<std::uint64_t>(cycle)});
    Rng universe_rng = cycle_rng.split(stream::kUniverse);
    std::vector<Paper> papers = generate_universe(cfg.universe, universe_rng);

    std::vector<Pledge> pledges;
    if (cfg.ring_enabled) {
      Rng ring_rng = cycle_rng.split(stream::kRing);
      const RingRoster roster = assign_ring_papers(ring_members, papers, cfg.ring, ring_rng);
      pledges = ring_pledges(roster, cfg.ring, cfg.rebel.wallet_size, cfg.rebel.cap_per_paper);
    }

    Rng protocol_rng = cycle_rng.split(stream::kProtocol);
    InvestmentLedger ledger = run_rebel_im(papers, investors, cfg.rebel, protocol_rng, pledges);
    const auto scores = nis(ledger, investors, static_cast<int>(papers.size()));
    const auto ranked = rank_papers(scores);

    Rng mvis_rng = cycle_rng.split(stream::kMvis);
    const auto mvis = simulate_mvis(papers, cfg.mvis, mvis_rng);

    CycleResult result;
    result.cycle = cycle;
    result.recall = gem_recall(ranked, papers, cfg.top_slots);
    result.nis_mvis_spearman = spearman(scores, mvis);

    pending.push_back({cycle, std::move(ledger), mvis_percentiles(mvis)});

    // Ledger of cycle c is scored at the end of cycle c + lag - 1.
    bool scored = false;
    while (!pending.empty() && pending.front().invested_cycle + cfg.lag - 1 <= cycle) {
      const PendingLedger& due = pending.front();
      const auto align = portfolio_alignments(investors, due.ledger, due.percentiles);
      const double threshold = effective_threshold(cfg.rule, align);
      for (std::size_t i = 0; i < investors.size(); ++i) {
        investors[i].ir = update_ir(investors[i].ir, align[i], cfg.rule, threshold);
      }
      pending.pop_front();
      scored = true;
    }
    if (!scored) {
      for (auto& inv : investors) inv.ir = update_ir(inv.ir, std::nullopt, cfg.rule);
    }

    result.ir_snapshot.reserve(investors.size());
    for (const auto& inv : investors) result.ir_snapshot.push_back(inv.ir);
    result.spearman_ir_skill = spearman(result.ir_snapshot, skills);
    if (!ring_members.empty()) {
      double sum = 0.0;
      for (int id : ring_members) sum += investors[static_cast<std::size_t>(id)].ir;
      result.ring_mean_ir = sum / static_cast<double>(ring_members.size());
    }
    double top_sum = 0.0;
    for (std::size_t i : honest) top_sum += investors[i].ir;
    result.top_decile_mean_ir = top_sum / static_cast<double>(honest.size());
    results.push_back(std::move(result));
  }
  return results;
}

void write_cycles_csv(const std::string& path, std::span<const CycleResult> cycles) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << "cycle,recall,spearman_ir_skill,ring_mean_ir,nis_mvis_spearman\n";
  for (const auto& c : cycles) {
    out << c.cycle << ',' << c.recall << ',' << c.spearman_ir_skill << ',';
    if (c.ring_mean_ir) out << *c.ring_mean_ir;
    out << ',' << c.nis_mvis_spearman << '\n';
  }
}

}  // namespace impact
