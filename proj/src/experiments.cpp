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

#include "impact/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "impact/error.hpp"
#include "impact/scoring.hpp"

#ifndef IMPACT_GIT_HASH
#define IMPACT_GIT_HASH "unknown"
#endif

namespace impact {

namespace fs = std::filesystem;

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t name_key(const std::string& name) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string git_hash() { return IMPACT_GIT_HASH; }

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_out(const std::string& dir, const std::string& file) {
  fs::create_directories(dir);
  const auto path = (fs::path(dir) / file).string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  return out;
}

void write_metadata(const ExperimentConfig& cfg, const std::string& command, nlohmann::json results) {
  nlohmann::json meta;
  meta["name"] = cfg.name;
  meta["command"] = command;
  meta["seed"] = cfg.seed;
  meta["trials"] = cfg.trials;
  meta["git_hash"] = git_hash();
  meta["timestamp"] = timestamp();
  meta["config"] = cfg.source;
  meta["results"] = std::move(results);
  auto out = open_out(cfg.output_dir, "summary.json");
  out << meta.dump(2) << '\n';
}

void log(const RunOptions& opt, const std::string& msg) {
  if (!opt.quiet) std::cerr << msg << '\n';
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

TrialOutcome run_trial(const ScenarioConfig& sc, int trial) {
  Rng rng = Rng(sc.seed).split({name_key(sc.name), static_cast<std::uint64_t>(trial)});
  Rng universe_rng = rng.split(stream::kUniverse);
  const std::vector<Paper> papers = generate_universe(sc.universe, universe_rng);
  const int gems = class_counts(papers)[index_of(TrueClass::kTop20)];
  Rng protocol_rng = rng.split(stream::kProtocol);

  TrialOutcome out;
  if (sc.protocol == Protocol::kCp) {
    out.recall = gem_recall_of_set(run_cp(papers, sc.cp, protocol_rng), papers);
  } else {
    Rng pool_rng = rng.split(stream::kPool);
    const std::vector<Investor> investors = generate_pool(sc.pool, pool_rng);
    const InvestmentLedger ledger = sc.protocol == Protocol::kImPassive
                                        ? run_passive_im(papers, investors, sc.passive, protocol_rng)
                                        : run_rebel_im(papers, investors, sc.rebel, protocol_rng);
    const auto scores = nis(ledger, investors, static_cast<int>(papers.size()));
    out.recall = gem_recall(rank_papers(scores), papers, sc.top_slots);
    std::vector<double> v_true(papers.size());
    for (const auto& p : papers) v_true[static_cast<std::size_t>(p.id)] = p.v_true;
    const double rho = spearman(scores, v_true);
    if (!std::isnan(rho)) out.spearman_nis_vtrue = rho;
  }
  out.gems_found = out.recall * gems;
  return out;
}

SimulateResult run_simulate(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (cfg.scenarios.empty()) throw ConfigError("simulate: the config defines no protocol or scenarios");
  SimulateResult result;
  for (const auto& sc : cfg.scenarios) {
    sc.validate();
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(sc.trials));
    parallel_for(sc.trials, opt.threads, [&](int t) { outcomes[static_cast<std::size_t>(t)] = run_trial(sc, t); });
    ScenarioSummary s;
    s.name = sc.name;
    s.protocol = sc.protocol;
    s.trials = sc.trials;
    std::vector<double> recalls, gems;
    for (int t = 0; t < sc.trials; ++t) {
      const auto& o = outcomes[static_cast<std::size_t>(t)];
      result.rows.push_back({sc.name, sc.protocol, t, o});
      recalls.push_back(o.recall);
      gems.push_back(o.gems_found);
    }
    s.mean_recall = mean_of(recalls);
    s.sd_recall = sd_of(recalls);
    s.mean_gems = mean_of(gems);
    log(opt, fmt::format("{:<16} {:<10} recall {:.4f} (sd {:.4f}, {} trials)", s.name, to_string(s.protocol),
                         s.mean_recall, s.sd_recall, s.trials));
    result.summaries.push_back(s);
  }
  if (opt.write) {
    auto out = open_out(cfg.output_dir, "recall.csv");
    out << "scenario,protocol,trial,recall,spearman_nis_vtrue\n";
    for (const auto& r : result.rows) {
      out << csv_field(r.scenario) << ',' << to_string(r.protocol) << ',' << r.trial << ',' << r.outcome.recall << ',';
      if (r.outcome.spearman_nis_vtrue) out << *r.outcome.spearman_nis_vtrue;
      out << '\n';
    }
    nlohmann::json js = nlohmann::json::array();
    for (const auto& s : result.summaries) {
      js.push_back({{"scenario", s.name},
                    {"protocol", to_string(s.protocol)},
                    {"trials", s.trials},
                    {"mean_recall", s.mean_recall},
                    {"sd_recall", s.sd_recall},
                    {"mean_gems_found", s.mean_gems}});
    }
    write_metadata(cfg, "simulate", {{"scenarios", js}, {"csv", "recall.csv"}});
  }
  return result;
}

double AblationCell::mean() const { return mean_of(gems); }

const AblationCell& AblationResult::cell(int pick, const std::string& pool) const {
  for (const auto& c : cells) {
    if (c.pick == pick && c.pool == pool) return c;
  }
  throw std::out_of_range("no ablation cell for pick " + std::to_string(pick) + ", pool " + pool);
}

AblationResult run_ablation(const ExperimentConfig& cfg, const RunOptions& opt) {
  const AblationConfig ab = cfg.ablation.value_or(AblationConfig{});
  AblationResult result;
  result.picks = ab.picks;
  for (const auto& d : ab.pools) result.pools.push_back(d.name());

  for (int pick : ab.picks) {
    for (const auto& dist : ab.pools) {
      ScenarioConfig sc = cfg.base;
      sc.protocol = Protocol::kImRebel;
      sc.rebel.n_scan = ab.n_scan;
      sc.rebel.n_pick = pick;
      sc.pool.distribution = dist;
      sc.name = fmt::format("ablation-scan{}-pick{}-{}", ab.n_scan, pick, dist.name());
      sc.validate();
      AblationCell c;
      c.pick = pick;
      c.pool = dist.name();
      c.gems.resize(static_cast<std::size_t>(sc.trials));
      parallel_for(sc.trials, opt.threads, [&](int t) { c.gems[static_cast<std::size_t>(t)] = run_trial(sc, t).gems_found; });
      log(opt, fmt::format("pick {:>3} {:<8} mean gems {:.2f}", pick, c.pool, c.mean()));
      result.cells.push_back(std::move(c));
    }
  }

  if (opt.write) {
    auto grid = open_out(cfg.output_dir, "ablation.csv");
    grid << "pick";
    for (const auto& p : result.pools) grid << ',' << csv_field(p);
    grid << '\n';
    for (int pick : result.picks) {
      grid << pick;
      for (const auto& p : result.pools) grid << ',' << result.cell(pick, p).mean();
      grid << '\n';
    }
    auto trials = open_out(cfg.output_dir, "ablation_trials.csv");
    trials << "pick,pool,trial,gems\n";
    for (const auto& c : result.cells) {
      for (std::size_t t = 0; t < c.gems.size(); ++t) trials << c.pick << ',' << csv_field(c.pool) << ',' << t << ',' << c.gems[t] << '\n';
    }
    nlohmann::json js = nlohmann::json::array();
    for (const auto& c : result.cells) js.push_back({{"pick", c.pick}, {"pool", c.pool}, {"mean_gems_found", c.mean()}});
    write_metadata(cfg, "ablate", {{"n_scan", ab.n_scan}, {"cells", js}, {"csv", "ablation.csv"}});
  }
  return result;
}

CalibrationResult run_calibration(const ExperimentConfig& cfg, const RunOptions& opt) {
  const CalibrationConfig cc = make_calibration_config(cfg);
  cc.validate();
  CalibrationResult result;
  result.runs.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, opt.threads, [&](int r) {
    Rng rng = Rng(cfg.seed).split({name_key(cfg.name + "/calibration"), static_cast<std::uint64_t>(r)});
    result.runs[static_cast<std::size_t>(r)] = run_cycles(cc, rng);
  });

  for (int c = 0; c < cc.n_cycles; ++c) {
    CycleResult m;
    m.cycle = c + 1;
    double ring_sum = 0.0;
    int ring_n = 0;
    for (const auto& run : result.runs) {
      const auto& x = run[static_cast<std::size_t>(c)];
      m.recall += x.recall;
      m.spearman_ir_skill += x.spearman_ir_skill;
      m.top_decile_mean_ir += x.top_decile_mean_ir;
      m.nis_mvis_spearman += x.nis_mvis_spearman;
      if (x.ring_mean_ir) {
        ring_sum += *x.ring_mean_ir;
        ++ring_n;
      }
    }
    const double n = static_cast<double>(result.runs.size());
    m.recall /= n;
    m.spearman_ir_skill /= n;
    m.top_decile_mean_ir /= n;
    m.nis_mvis_spearman /= n;
    if (ring_n > 0) m.ring_mean_ir = ring_sum / ring_n;
    result.mean_by_cycle.push_back(std::move(m));
  }

  if (opt.write) {
    fs::create_directories(cfg.output_dir);
    write_cycles_csv((fs::path(cfg.output_dir) / "cycles.csv").string(), result.mean_by_cycle);
    auto runs = open_out(cfg.output_dir, "cycles_runs.csv");
    runs << "run,cycle,recall,spearman_ir_skill,ring_mean_ir,top_decile_mean_ir,nis_mvis_spearman\n";
    for (std::size_t r = 0; r < result.runs.size(); ++r) {
      for (const auto& x : result.runs[r]) {
        runs << r << ',' << x.cycle << ',' << x.recall << ',' << x.spearman_ir_skill << ',';
        if (x.ring_mean_ir) runs << *x.ring_mean_ir;
        runs << ',' << x.top_decile_mean_ir << ',' << x.nis_mvis_spearman << '\n';
      }
    }
    auto traj = open_out(cfg.output_dir, "ir_trajectory.csv");
    traj << "cycle,investor,ir\n";
    if (!result.runs.empty()) {
      for (const auto& x : result.runs.front()) {
        for (std::size_t i = 0; i < x.ir_snapshot.size(); ++i) traj << x.cycle << ',' << i << ',' << x.ir_snapshot[i] << '\n';
      }
    }
    const auto& last = result.mean_by_cycle.back();
    nlohmann::json js = {{"runs", cfg.trials},
                         {"cycles", cc.n_cycles},
                         {"final_mean_recall", last.recall},
                         {"final_mean_spearman_ir_skill", last.spearman_ir_skill},
                         {"final_top_decile_mean_ir", last.top_decile_mean_ir}};
    if (last.ring_mean_ir) js["final_ring_mean_ir"] = *last.ring_mean_ir;
    js["csv"] = "cycles.csv";
    write_metadata(cfg, "calibrate", js);
  }
  for (const auto& m : result.mean_by_cycle) {
    log(opt, fmt::format("cycle {:>3} recall {:.4f} spearman(ir,skill) {:.4f}{}", m.cycle, m.recall,
                         m.spearman_ir_skill,
                         m.ring_mean_ir ? fmt::format(" ring ir {:.4f}", *m.ring_mean_ir) : std::string()));
  }
  return result;
}

CollusionResult run_collusion(const ExperimentConfig& cfg, const RunOptions& opt) {
  CollusionScenario sc = make_collusion_scenario(cfg);
  sc.validate();
  const int null_runs = cfg.collusion ? cfg.collusion->null_runs : 0;
  CollusionResult result;
  result.planted.resize(static_cast<std::size_t>(cfg.trials));
  result.null_runs.resize(static_cast<std::size_t>(null_runs));
  const auto key = name_key(cfg.name + "/collusion");
  parallel_for(cfg.trials + null_runs, opt.threads, [&](int r) {
    CollusionScenario local = sc;
    local.plant_ring = r < cfg.trials;
    Rng rng = Rng(cfg.seed).split({key, static_cast<std::uint64_t>(local.plant_ring), static_cast<std::uint64_t>(r)});
    auto res = run_detection_trial(local, rng);
    if (local.plant_ring) {
      result.planted[static_cast<std::size_t>(r)] = std::move(res);
    } else {
      result.null_runs[static_cast<std::size_t>(r - cfg.trials)] = std::move(res);
    }
  });
  int hits = 0, false_flags = 0;
  for (const auto& r : result.planted) hits += r.jaccard >= 0.9;
  for (const auto& r : result.null_runs) false_flags += !r.flagged.empty();
  result.detection_rate = result.planted.empty() ? 0.0 : static_cast<double>(hits) / result.planted.size();
  result.false_flag_rate = result.null_runs.empty() ? 0.0 : static_cast<double>(false_flags) / result.null_runs.size();
  log(opt, fmt::format("detected {}/{} planted rings, {} false flags in {} null runs", hits,
                       result.planted.size(), false_flags, result.null_runs.size()));

  if (opt.write) {
    std::vector<DetectionResult> all = result.planted;
    all.insert(all.end(), result.null_runs.begin(), result.null_runs.end());
    fs::create_directories(cfg.output_dir);
    write_detection_csv((fs::path(cfg.output_dir) / "detection.csv").string(), all);
    write_metadata(cfg, "collusion",
                   {{"planted_runs", result.planted.size()},
                    {"null_runs", result.null_runs.size()},
                    {"detection_rate", result.detection_rate},
                    {"false_flag_rate", result.false_flag_rate},
                    {"csv", "detection.csv"}});
  }
  return result;
}

void run_load(const ExperimentConfig& cfg, const RunOptions& opt) {
  const LoadConfig lc = cfg.load.value_or(LoadConfig{});
  if (!opt.quiet) print_load_table(std::cout, lc);
  if (opt.write) {
    fs::create_directories(cfg.output_dir);
    write_load_csv((fs::path(cfg.output_dir) / "load.csv").string(), lc);
    const CpLoad cp = cp_load(lc);
    const ImLoad im = im_load(lc);
    write_metadata(cfg, "load",
                   {{"cp_pc_reviews_per_member", cp.pc_reviews_per_member},
                    {"cp_erc_reviews_per_member", cp.erc_reviews_per_member},
                    {"cp_pc_reviews_per_paper", cp.pc_reviews_per_paper},
                    {"im_pc_phase1_per_member", im.pc_phase1_per_member},
                    {"im_pc_phase2_reads_per_member", im.pc_phase2_reads_per_member},
                    {"im_total_touched", im.total_touched},
                    {"csv", "load.csv"}});
  }
}

void run_longtail(const ExperimentConfig& cfg, const std::string& input, const RunOptions& opt) {
  LongtailSection section = cfg.longtail.value_or(LongtailSection{});
  const std::string path = input.empty() ? section.input : input;
  if (path.empty()) throw ConfigError("longtail.input: no citation file given");
  std::vector<std::string> warnings;
  const auto records = load_citations(path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  log(opt, fmt::format("{} records from {}", records.size(), path));
  if (opt.write) {
    fs::create_directories(cfg.output_dir);
    write_longtail_csv((fs::path(cfg.output_dir) / "longtail.csv").string(), records, section.stats);
    if (!records.empty()) write_cumulative_csv((fs::path(cfg.output_dir) / "cumulative.csv").string(), records);
    write_metadata(cfg, "longtail", {{"input", path}, {"records", records.size()}, {"csv", "longtail.csv"}});
  }
}

void write_ir_density_csv(const std::string& path, int n_points) {
  const IRDistribution dists[] = {IRDistribution::crisis(), IRDistribution::normal(), IRDistribution::desired()};
  std::vector<double> xs;
  for (int i = 1; i <= n_points; ++i) xs.push_back(static_cast<double>(i) / (n_points + 1));
  std::vector<std::vector<double>> ys;
  for (const auto& d : dists) ys.push_back(distribution_density(d, xs));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << "x,crisis,normal,desired\n";
  for (std::size_t i = 0; i < xs.size(); ++i) out << xs[i] << ',' << ys[0][i] << ',' << ys[1][i] << ',' << ys[2][i] << '\n';
}

}  // namespace impact
