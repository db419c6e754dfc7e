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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "impact/investor_pool.hpp"
#include "impact/protocol_im_rebel.hpp"
#include "impact/rng.hpp"
#include "impact/scoring.hpp"
#include "impact/universe.hpp"

namespace impact {

struct RingConfig {
  int ring_size = 10;
  int papers_per_member = 1;
  double coordination = 1.0;
  TrueClass target_class = TrueClass::kMid60;

  void validate(int n_investors) const;
};

struct RingRoster {
  std::vector<int> members;                   // investor ids, ascending
  std::vector<std::vector<int>> papers_of;    // parallel to members
};

/// Picks ring members uniformly from the pool and tags them with ring_id 0.
std::vector<int> choose_ring_members(std::vector<Investor>& investors, const RingConfig& cfg,
                                     Rng& rng);

/// Gives each member papers_per_member papers of the target class and makes
/// the member their sole author.
RingRoster assign_ring_papers(std::span<const int> members, std::vector<Paper>& papers,
                              const RingConfig& cfg, Rng& rng);

/// choose_ring_members followed by assign_ring_papers.
RingRoster inject_ring(std::vector<Investor>& investors, std::vector<Paper>& papers,
                       const RingConfig& cfg, Rng& rng);

/// Each member spreads coordination x wallet evenly over the other members'
/// papers. With a cap, per-paper pledges stop at the cap and the excess stays
/// in the member's honest budget. Zero-token pledges are omitted.
std::vector<Pledge> ring_pledges(const RingRoster& roster, const RingConfig& cfg, double wallet,
                                 std::optional<double> cap);

struct CitationConfig {
  double mean_out_degree = 8.0;
};

struct Citation {
  int from = 0;
  int to = 0;
  double weight = 0.0;
};

class CitationGraph {
 public:
  explicit CitationGraph(int n_papers = 0) : n_papers_(n_papers) {}

  void add(int from, int to, double weight);

  int n_papers() const { return n_papers_; }
  std::span<const Citation> edges() const { return edges_; }
  double weight(int from, int to) const;
  std::vector<int> out_degrees() const;

 private:
  int n_papers_;
  std::vector<Citation> edges_;
  std::unordered_map<long long, std::size_t> index_;
};

/// Baseline: each paper cites Poisson(mean) distinct others with probability
/// proportional to v_true. A ring adds an edge between every ordered pair of
/// papers owned by different members with probability coordination.
CitationGraph simulate_citations(std::span<const Paper> papers, const RingRoster* roster,
                                 const RingConfig& ring, const CitationConfig& cfg, Rng& rng);

/// Dense directed weighted graph over actors 0..n-1.
class ActorGraph {
 public:
  explicit ActorGraph(int n = 0) : n_(n), w_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double operator()(int i, int j) const { return w_[idx(i, j)]; }
  double& operator()(int i, int j) { return w_[idx(i, j)]; }

  /// 1 where weight >= threshold, else 0.
  ActorGraph thresholded(double threshold) const;
  /// Subgraph induced by keep (ids renumbered in keep order).
  ActorGraph induced(std::span<const int> keep) const;
  std::size_t edge_count() const;

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_;
  std::vector<double> w_;
};

/// Investor -> author edges: tokens summed over the author's papers.
/// Actors outside [0, n_actors) and self-edges are dropped.
ActorGraph investment_graph(const InvestmentLedger& ledger, std::span<const Paper> papers,
                            int n_actors);

/// Author -> author edges from paper citations.
ActorGraph citation_actor_graph(const CitationGraph& gc, std::span<const Paper> papers,
                                int n_actors);

/// Pearson correlation of off-diagonal weights restricted to subset x subset;
/// 0 when either vector is constant.
double subgraph_correlation(const ActorGraph& gi, const ActorGraph& gc, std::span<const int> subset);

/// Undirected weighted graph as a symmetric ActorGraph.
struct DenseSubgraph {
  std::vector<int> members;  // ascending
  double density = 0.0;      // total edge weight / |members|
};

/// Exact maximum-density subgraph (largest one among ties), via parametric
/// min cut.
DenseSubgraph densest_subgraph(const ActorGraph& g);

/// Brute force over all non-empty subsets; n <= 20.
DenseSubgraph densest_subgraph_exhaustive(const ActorGraph& g);

/// Undirected edge i-j (weight 1) when all four directed edges i->j, j->i in
/// both thresholded graphs are present.
ActorGraph joint_graph(const ActorGraph& gi_bin, const ActorGraph& gc_bin);

/// Directed double-edge swaps preserving every in- and out-degree of a
/// binary graph.
ActorGraph degree_preserving_shuffle(const ActorGraph& g_bin, int swaps_per_edge, Rng& rng);

struct DetectParams {
  double min_tokens = 1.0;
  double min_citations = 1.0;
  int min_size = 4;
  double density_threshold = 1.5;  // multiple of the null mean density
  double z_threshold = 3.0;
  int n_null = 20;
  int swaps_per_edge = 10;
  int max_rings = 5;

  void validate() const;
};

struct FlaggedRing {
  std::vector<int> members;
  double density = 0.0;
  double null_mean = 0.0;
  double null_sd = 0.0;
  double z_score = 0.0;
  double correlation = 0.0;
};

using DensestSearch = std::function<DenseSubgraph(const ActorGraph&)>;

/// Repeatedly extracts the densest joint subgraph and flags it against
/// degree-preserving null models; flagged actors are removed before the next
/// round. Stops at the first unflagged candidate.
std::vector<FlaggedRing> detect_rings(const ActorGraph& gi, const ActorGraph& gc,
                                      const DetectParams& params, Rng& rng,
                                      const DensestSearch& search = densest_subgraph);

double jaccard(std::span<const int> a, std::span<const int> b);

struct CollusionScenario {
  UniverseConfig universe;
  PoolConfig pool;
  RebelConfig rebel;
  RingConfig ring;
  CitationConfig citations;
  DetectParams detect;
  bool plant_ring = true;

  CollusionScenario();
  void validate() const;
};

struct DetectionResult {
  std::vector<int> planted;  // empty when no ring was planted
  std::vector<FlaggedRing> flagged;
  double jaccard = 0.0;      // best flagged set against planted
  double z_score = 0.0;      // of that best set (0 when nothing flagged)
  std::vector<int> best_set;
};

DetectionResult run_detection_trial(const CollusionScenario& sc, Rng& rng);

/// detection.csv: run,planted_ring,flagged_set,jaccard,z_score
/// Sets are ';'-joined actor ids.
void write_detection_csv(const std::string& path, std::span<const DetectionResult> runs);

}  // namespace impact
