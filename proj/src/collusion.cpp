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

#include "impact/collusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <unordered_map>

#include "impact/error.hpp"

namespace impact {

void RingConfig::validate(int n_investors) const {
  require(ring_size >= 2, "ring.size must be >= 2");
  require(ring_size <= n_investors, "ring.size exceeds the investor pool");
  require(papers_per_member >= 1, "ring.papers_per_member must be >= 1");
  require(coordination >= 0.0 && coordination <= 1.0, "ring.coordination must lie in [0, 1]");
}

std::vector<int> choose_ring_members(std::vector<Investor>& investors, const RingConfig& cfg,
                                     Rng& rng) {
  cfg.validate(static_cast<int>(investors.size()));
  const auto picks = rng.sample_without_replacement(static_cast<int>(investors.size()), cfg.ring_size);
  std::vector<int> members;
  for (int i : picks) {
    investors[static_cast<std::size_t>(i)].ring_id = 0;
    members.push_back(investors[static_cast<std::size_t>(i)].id);
  }
  std::sort(members.begin(), members.end());
  return members;
}

RingRoster assign_ring_papers(std::span<const int> members, std::vector<Paper>& papers,
                              const RingConfig& cfg, Rng& rng) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    if (papers[i].true_class == cfg.target_class) pool.push_back(i);
  }
  const auto needed = members.size() * static_cast<std::size_t>(cfg.papers_per_member);
  if (pool.size() < needed) {
    throw ConfigError("ring needs " + std::to_string(needed) + " papers of class " +
                      std::string(to_string(cfg.target_class)) + " but only " +
                      std::to_string(pool.size()) + " exist");
  }
  const auto picks = rng.sample_without_replacement(static_cast<int>(pool.size()), static_cast<int>(needed));

  RingRoster roster;
  roster.members.assign(members.begin(), members.end());
  roster.papers_of.resize(members.size());
  std::size_t next = 0;
  for (std::size_t m = 0; m < members.size(); ++m) {
    for (int k = 0; k < cfg.papers_per_member; ++k) {
      Paper& p = papers[pool[static_cast<std::size_t>(picks[next++])]];
      p.authors = {members[m]};
      roster.papers_of[m].push_back(p.id);
    }
    std::sort(roster.papers_of[m].begin(), roster.papers_of[m].end());
  }
  return roster;
}

RingRoster inject_ring(std::vector<Investor>& investors, std::vector<Paper>& papers,
                       const RingConfig& cfg, Rng& rng) {
  Rng member_rng = rng.split(1);
  Rng paper_rng = rng.split(2);
  const auto members = choose_ring_members(investors, cfg, member_rng);
  return assign_ring_papers(members, papers, cfg, paper_rng);
}

std::vector<Pledge> ring_pledges(const RingRoster& roster, const RingConfig& cfg, double wallet,
                                 std::optional<double> cap) {
  std::vector<Pledge> out;
  if (cfg.coordination <= 0.0) return out;
  for (std::size_t m = 0; m < roster.members.size(); ++m) {
    std::vector<int> targets;
    for (std::size_t o = 0; o < roster.members.size(); ++o) {
      if (o == m) continue;
      targets.insert(targets.end(), roster.papers_of[o].begin(), roster.papers_of[o].end());
    }
    if (targets.empty()) continue;
    double each = cfg.coordination * wallet / static_cast<double>(targets.size());
    if (cap) each = std::min(each, *cap);
    if (each <= 0.0) continue;
    for (int paper : targets) out.push_back({roster.members[m], paper, each});
  }
  return out;
}

void CitationGraph::add(int from, int to, double weight) {
  if (from == to) throw DataError("self-citation of paper " + std::to_string(from));
  if (weight < 0.0) throw DataError("negative citation weight");
  if (from < 0 || to < 0 || from >= n_papers_ || to >= n_papers_) {
    throw DataError("citation references an unknown paper");
  }
  const long long key = static_cast<long long>(from) * n_papers_ + to;
  const auto [it, fresh] = index_.try_emplace(key, edges_.size());
  if (fresh) {
    edges_.push_back({from, to, weight});
  } else {
    edges_[it->second].weight += weight;
  }
}

double CitationGraph::weight(int from, int to) const {
  const auto it = index_.find(static_cast<long long>(from) * n_papers_ + to);
  return it == index_.end() ? 0.0 : edges_[it->second].weight;
}

std::vector<int> CitationGraph::out_degrees() const {
  std::vector<int> out(static_cast<std::size_t>(n_papers_), 0);
  for (const auto& e : edges_) ++out[static_cast<std::size_t>(e.from)];
  return out;
}

CitationGraph simulate_citations(std::span<const Paper> papers, const RingRoster* roster,
                                 const RingConfig& ring, const CitationConfig& cfg, Rng& rng) {
  require(cfg.mean_out_degree >= 0.0, "citations.mean_out_degree must be >= 0");
  const int n = static_cast<int>(papers.size());
  CitationGraph graph(n);
  if (n < 2) return graph;

  // Per-paper target sets keep the baseline free of duplicates without the
  // quadratic lookup in CitationGraph::add.
  std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
  for (const auto& p : papers) weights[static_cast<std::size_t>(p.id)] = p.v_true;
  std::discrete_distribution<int> pick(weights.begin(), weights.end());

  std::vector<Citation> edges;
  for (int p = 0; p < n; ++p) {
    Rng paper_rng = rng.split({stream::kCitations, static_cast<std::uint64_t>(p)});
    const int c = std::min(paper_rng.poisson(cfg.mean_out_degree), n - 1);
    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    taken[static_cast<std::size_t>(p)] = 1;
    for (int k = 0; k < c;) {
      const int q = pick(paper_rng.engine());
      if (taken[static_cast<std::size_t>(q)]) continue;
      taken[static_cast<std::size_t>(q)] = 1;
      edges.push_back({p, q, 1.0});
      ++k;
    }
  }

  if (roster != nullptr && ring.coordination > 0.0) {
    Rng ring_rng = rng.split(stream::kRing);
    std::unordered_map<long long, std::size_t> index;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      index[static_cast<long long>(edges[e].from) * n + edges[e].to] = e;
    }
    for (std::size_t a = 0; a < roster->members.size(); ++a) {
      for (std::size_t b = 0; b < roster->members.size(); ++b) {
        if (a == b) continue;
        for (int from : roster->papers_of[a]) {
          for (int to : roster->papers_of[b]) {
            if (!ring_rng.bernoulli(ring.coordination)) continue;
            const long long key = static_cast<long long>(from) * n + to;
            const auto it = index.find(key);
            if (it != index.end()) {
              edges[it->second].weight += 1.0;
            } else {
              index[key] = edges.size();
              edges.push_back({from, to, 1.0});
            }
          }
        }
      }
    }
  }

  for (const auto& e : edges) graph.add(e.from, e.to, e.weight);
  return graph;
}

ActorGraph ActorGraph::thresholded(double threshold) const {
  ActorGraph out(n_);
  for (std::size_t k = 0; k < w_.size(); ++k) out.w_[k] = w_[k] >= threshold ? 1.0 : 0.0;
  for (int i = 0; i < n_; ++i) out(i, i) = 0.0;
  return out;
}

ActorGraph ActorGraph::induced(std::span<const int> keep) const {
  const int m = static_cast<int>(keep.size());
  ActorGraph out(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) out(a, b) = (*this)(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
  }
  return out;
}

std::size_t ActorGraph::edge_count() const {
  return static_cast<std::size_t>(std::count_if(w_.begin(), w_.end(), [](double w) { return w != 0.0; }));
}

ActorGraph investment_graph(const InvestmentLedger& ledger, std::span<const Paper> papers,
                            int n_actors) {
  ActorGraph g(n_actors);
  for (const auto& r : ledger.rows()) {
    if (r.investor_id < 0 || r.investor_id >= n_actors) continue;
    for (int author : papers[static_cast<std::size_t>(r.paper_id)].authors) {
      if (author < 0 || author >= n_actors || author == r.investor_id) continue;
      g(r.investor_id, author) += r.tokens;
    }
  }
  return g;
}

ActorGraph citation_actor_graph(const CitationGraph& gc, std::span<const Paper> papers,
                                int n_actors) {
  ActorGraph g(n_actors);
  for (const auto& e : gc.edges()) {
    for (int a : papers[static_cast<std::size_t>(e.from)].authors) {
      if (a < 0 || a >= n_actors) continue;
      for (int b : papers[static_cast<std::size_t>(e.to)].authors) {
        if (b < 0 || b >= n_actors || a == b) continue;
        g(a, b) += e.weight;
      }
    }
  }
  return g;
}

double subgraph_correlation(const ActorGraph& gi, const ActorGraph& gc, std::span<const int> subset) {
  require(subset.size() >= 2, "subgraph_correlation needs at least two actors");
  std::vector<double> xs, ys;
  for (int a : subset) {
    for (int b : subset) {
      if (a == b) continue;
      xs.push_back(gi(a, b));
      ys.push_back(gc(a, b));
    }
  }
  const double r = pearson(xs, ys);
  return std::isnan(r) ? 0.0 : r;
}

namespace {

class Dinic {
 public:
  explicit Dinic(int n) : graph_(static_cast<std::size_t>(n)), level_(static_cast<std::size_t>(n)), it_(static_cast<std::size_t>(n)) {}

  void add_edge(int u, int v, double cap) {
    graph_[static_cast<std::size_t>(u)].push_back({v, cap, graph_[static_cast<std::size_t>(v)].size()});
    graph_[static_cast<std::size_t>(v)].push_back({u, 0.0, graph_[static_cast<std::size_t>(u)].size() - 1});
  }

  double max_flow(int s, int t, double eps) {
    eps_ = eps;
    double flow = 0.0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (true) {
        const double f = dfs(s, t, std::numeric_limits<double>::infinity());
        if (f <= eps_) break;
        flow += f;
      }
    }
    return flow;
  }

  /// Nodes that can still reach t through residual capacity.
  std::vector<char> reaches_sink(int t) const {
    std::vector<char> seen(graph_.size(), 0);
    std::queue<int> q;
    seen[static_cast<std::size_t>(t)] = 1;
    q.push(t);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      // u -> v has residual capacity iff the paired reverse edge stored at v
      // points to u and the forward edge u->v is not saturated.
      for (const auto& e : graph_[static_cast<std::size_t>(v)]) {
        const auto& back = graph_[static_cast<std::size_t>(e.to)][e.rev];
        if (back.cap > eps_ && !seen[static_cast<std::size_t>(e.to)]) {
          seen[static_cast<std::size_t>(e.to)] = 1;
          q.push(e.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    int to;
    double cap;
    std::size_t rev;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const auto& e : graph_[static_cast<std::size_t>(v)]) {
        if (e.cap > eps_ && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  double dfs(int v, int t, double pushed) {
    if (v == t) return pushed;
    auto& edges = graph_[static_cast<std::size_t>(v)];
    for (auto& i = it_[static_cast<std::size_t>(v)]; i < edges.size(); ++i) {
      Edge& e = edges[i];
      if (e.cap <= eps_ || level_[static_cast<std::size_t>(e.to)] != level_[static_cast<std::size_t>(v)] + 1) continue;
      const double f = dfs(e.to, t, std::min(pushed, e.cap));
      if (f > eps_) {
        e.cap -= f;
        graph_[static_cast<std::size_t>(e.to)][e.rev].cap += f;
        return f;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Edge>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
  double eps_ = 0.0;
};

double edge_weight(const ActorGraph& g, std::span<const int> members) {
  double w = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) w += g(members[a], members[b]);
  }
  return w;
}

/// Largest S maximizing q * w(E(S)) - p * |S| over active nodes.
std::vector<int> parametric_cut(const ActorGraph& g, std::span<const int> active, double p,
                                double q) {
  const int m = static_cast<int>(active.size());
  const int s = m, t = m + 1;
  std::vector<double> deg(static_cast<std::size_t>(m), 0.0);
  double big = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a != b) deg[static_cast<std::size_t>(a)] += g(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]);
    }
    big = std::max(big, deg[static_cast<std::size_t>(a)]);
  }
  big *= q;
  Dinic flow(m + 2);
  double scale = big + 2.0 * p;
  for (int a = 0; a < m; ++a) {
    flow.add_edge(s, a, big);
    flow.add_edge(a, t, big + 2.0 * p - q * deg[static_cast<std::size_t>(a)]);
    for (int b = a + 1; b < m; ++b) {
      const double w = q * g(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]);
      if (w > 0.0) {
        flow.add_edge(a, b, w);
        flow.add_edge(b, a, w);
      }
    }
  }
  const double eps = 1e-9 * std::max(1.0, scale);
  flow.max_flow(s, t, eps);
  const auto to_sink = flow.reaches_sink(t);
  std::vector<int> out;
  for (int a = 0; a < m; ++a) {
    if (!to_sink[static_cast<std::size_t>(a)]) out.push_back(active[static_cast<std::size_t>(a)]);
  }
  return out;
}

}  // namespace

DenseSubgraph densest_subgraph(const ActorGraph& g) {
  const int n = g.size();
  std::vector<int> active;
  for (int a = 0; a < n; ++a) {
    bool has_edge = false;
    for (int b = 0; b < n && !has_edge; ++b) has_edge = a != b && g(a, b) > 0.0;
    if (has_edge) active.push_back(a);
  }
  if (active.empty()) return {};

  // Dinkelbach iterations on lambda = p / q, with q = |S| so that integer
  // weights keep every capacity integral.
  std::vector<int> best = active;
  double p = edge_weight(g, best);
  double q = static_cast<double>(best.size());
  for (int iter = 0; iter < 64; ++iter) {
    auto cand = parametric_cut(g, active, p, q);
    if (cand.empty()) break;
    const double cw = edge_weight(g, cand);
    const double cs = static_cast<double>(cand.size());
    // Stop once the candidate no longer improves the ratio.
    const bool improves = cw * q > p * cs * (1.0 + 1e-12) + 1e-12;
    if (!improves) {
      if (cw * q >= p * cs * (1.0 - 1e-12) && cand.size() > best.size()) best = std::move(cand);
      break;
    }
    best = std::move(cand);
    p = cw;
    q = cs;
  }
  return {best, p / q};
}

DenseSubgraph densest_subgraph_exhaustive(const ActorGraph& g) {
  const int n = g.size();
  require(n <= 20, "exhaustive densest search is limited to 20 actors");
  DenseSubgraph best;
  std::uint32_t best_mask = 0;
  const std::uint32_t limit = 1u << n;
  std::vector<double> weight(limit, 0.0);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const int low = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    double w = weight[rest];
    for (int b = 0; b < n; ++b) {
      if (rest & (1u << b)) w += g(low, b);
    }
    weight[mask] = w;
    const double size = static_cast<double>(std::popcount(mask));
    const double d = w / size;
    const double tol = 1e-9 * std::max(1.0, best.density);
    if (d > best.density + tol ||
        (std::abs(d - best.density) <= tol && std::popcount(mask) > std::popcount(best_mask) && w > 0.0)) {
      best.density = d;
      best_mask = mask;
    }
  }
  for (int a = 0; a < n; ++a) {
    if (best_mask & (1u << a)) best.members.push_back(a);
  }
  if (best.density <= 0.0) return {};
  return best;
}

ActorGraph joint_graph(const ActorGraph& gi_bin, const ActorGraph& gc_bin) {
  const int n = gi_bin.size();
  ActorGraph out(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const bool both = gi_bin(a, b) > 0.0 && gi_bin(b, a) > 0.0 && gc_bin(a, b) > 0.0 && gc_bin(b, a) > 0.0;
      if (both) out(a, b) = out(b, a) = 1.0;
    }
  }
  return out;
}

ActorGraph degree_preserving_shuffle(const ActorGraph& g_bin, int swaps_per_edge, Rng& rng) {
  const int n = g_bin.size();
  ActorGraph out = g_bin;
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b && g_bin(a, b) > 0.0) edges.emplace_back(a, b);
    }
  }
  if (edges.size() < 2) return out;
  const int last = static_cast<int>(edges.size()) - 1;
  const long long attempts = static_cast<long long>(swaps_per_edge) * static_cast<long long>(edges.size());
  for (long long k = 0; k < attempts; ++k) {
    const int i = rng.uniform_int(0, last);
    const int j = rng.uniform_int(0, last);
    auto& [a, b] = edges[static_cast<std::size_t>(i)];
    auto& [c, d] = edges[static_cast<std::size_t>(j)];
    if (a == c || b == d || a == d || c == b) continue;
    if (out(a, d) > 0.0 || out(c, b) > 0.0) continue;
    out(a, b) = 0.0;
    out(c, d) = 0.0;
    out(a, d) = 1.0;
    out(c, b) = 1.0;
    std::swap(b, d);
  }
  return out;
}

void DetectParams::validate() const {
  require(min_size >= 2, "detect.min_size must be >= 2");
  require(density_threshold >= 0.0, "detect.density_threshold must be >= 0");
  require(n_null >= 2, "detect.n_null must be >= 2");
  require(swaps_per_edge >= 1, "detect.swaps_per_edge must be >= 1");
  require(max_rings >= 1, "detect.max_rings must be >= 1");
}

std::vector<FlaggedRing> detect_rings(const ActorGraph& gi, const ActorGraph& gc,
                                      const DetectParams& params, Rng& rng,
                                      const DensestSearch& search) {
  params.validate();
  if (gi.size() != gc.size()) throw DataError("investment and citation graphs differ in actor count");
  const ActorGraph gi_bin = gi.thresholded(params.min_tokens);
  const ActorGraph gc_bin = gc.thresholded(params.min_citations);

  std::vector<int> remaining(static_cast<std::size_t>(gi.size()));
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<FlaggedRing> flagged;
  for (int round = 0; round < params.max_rings; ++round) {
    const ActorGraph gi_r = gi_bin.induced(remaining);
    const ActorGraph gc_r = gc_bin.induced(remaining);
    const DenseSubgraph cand = search(joint_graph(gi_r, gc_r));
    if (static_cast<int>(cand.members.size()) < params.min_size) break;

    std::vector<double> null_density;
    for (int k = 0; k < params.n_null; ++k) {
      Rng null_rng = rng.split({stream::kNull, static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(k)});
      const ActorGraph si = degree_preserving_shuffle(gi_r, params.swaps_per_edge, null_rng);
      const ActorGraph sc = degree_preserving_shuffle(gc_r, params.swaps_per_edge, null_rng);
      null_density.push_back(search(joint_graph(si, sc)).density);
    }
    const double mean = std::accumulate(null_density.begin(), null_density.end(), 0.0) /
                        static_cast<double>(null_density.size());
    double ss = 0.0;
    for (double d : null_density) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / static_cast<double>(null_density.size() - 1));
    double z = 0.0;
    if (sd > 0.0) {
      z = (cand.density - mean) / sd;
    } else if (cand.density > mean) {
      z = std::numeric_limits<double>::infinity();
    }
    if (cand.density < params.density_threshold * mean || z < params.z_threshold) break;

    FlaggedRing ring;
    for (int local : cand.members) ring.members.push_back(remaining[static_cast<std::size_t>(local)]);
    ring.density = cand.density;
    ring.null_mean = mean;
    ring.null_sd = sd;
    ring.z_score = z;
    ring.correlation = subgraph_correlation(gi, gc, ring.members);
    std::vector<int> next;
    std::set_difference(remaining.begin(), remaining.end(), ring.members.begin(), ring.members.end(),
                        std::back_inserter(next));
    remaining = std::move(next);
    flagged.push_back(std::move(ring));
  }
  return flagged;
}

double jaccard(std::span<const int> a, std::span<const int> b) {
  std::vector<int> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  if (x.empty() && y.empty()) return 1.0;
  std::vector<int> both;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
  return static_cast<double>(both.size()) / static_cast<double>(x.size() + y.size() - both.size());
}

CollusionScenario::CollusionScenario() {
  universe.author_overlap = 1.0;
  universe.author_pool_size = pool.n_investors;
}

void CollusionScenario::validate() const {
  universe.validate();
  pool.validate();
  rebel.validate(universe.market_size);
  ring.validate(pool.n_investors);
  detect.validate();
  require(universe.author_overlap > 0.0,
          "collusion.universe.author_overlap must be > 0 so that investors also author papers");
  require(citations.mean_out_degree >= 0.0, "citations.mean_out_degree must be >= 0");
}

DetectionResult run_detection_trial(const CollusionScenario& sc, Rng& rng) {
  sc.validate();
  Rng universe_rng = rng.split(stream::kUniverse);
  std::vector<Paper> papers = generate_universe(sc.universe, universe_rng);
  Rng pool_rng = rng.split(stream::kPool);
  std::vector<Investor> investors = generate_pool(sc.pool, pool_rng);

  DetectionResult result;
  RingRoster roster;
  std::vector<Pledge> pledges;
  if (sc.plant_ring) {
    Rng ring_rng = rng.split(stream::kRing);
    roster = inject_ring(investors, papers, sc.ring, ring_rng);
    pledges = ring_pledges(roster, sc.ring, sc.rebel.wallet_size, sc.rebel.cap_per_paper);
    result.planted = roster.members;
  }

  Rng protocol_rng = rng.split(stream::kProtocol);
  const InvestmentLedger ledger = run_rebel_im(papers, investors, sc.rebel, protocol_rng, pledges);
  Rng cite_rng = rng.split(stream::kCitations);
  const CitationGraph citations =
      simulate_citations(papers, sc.plant_ring ? &roster : nullptr, sc.ring, sc.citations, cite_rng);

  const int n_actors = std::max(sc.pool.n_investors,
                                sc.universe.author_id_base() + sc.universe.author_pool_size);
  const ActorGraph gi = investment_graph(ledger, papers, n_actors);
  const ActorGraph gc = citation_actor_graph(citations, papers, n_actors);
  Rng null_rng = rng.split(stream::kNull);
  result.flagged = detect_rings(gi, gc, sc.detect, null_rng);

  for (const auto& f : result.flagged) {
    const double j = result.planted.empty() ? 0.0 : jaccard(f.members, result.planted);
    if (result.best_set.empty() || j > result.jaccard) {
      result.jaccard = j;
      result.z_score = f.z_score;
      result.best_set = f.members;
    }
  }
  return result;
}

namespace {

std::string join_ids(std::span<const int> ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

void write_detection_csv(const std::string& path, std::span<const DetectionResult> runs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << "run,planted_ring,flagged_set,jaccard,z_score\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out << r << ',' << join_ids(runs[r].planted) << ',' << join_ids(runs[r].best_set) << ','
        << runs[r].jaccard << ',' << runs[r].z_score << '\n';
  }
}

}  // namespace impact
