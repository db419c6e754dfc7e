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

#include "impact/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "impact/error.hpp"

namespace impact {

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::kCp: return "CP";
    case Protocol::kImPassive: return "IM_PASSIVE";
    case Protocol::kImRebel: return "IM_REBEL";
  }
  return "?";
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "CP") return Protocol::kCp;
  if (s == "IM_PASSIVE") return Protocol::kImPassive;
  if (s == "IM_REBEL") return Protocol::kImRebel;
  throw ConfigError("protocol: unknown protocol '" + s + "' (expected CP, IM_PASSIVE or IM_REBEL)");
}

void ScenarioConfig::validate() const {
  require(trials >= 1, name + ": trials must be >= 1");
  require(top_slots >= 0 && top_slots <= universe.market_size,
          name + ": top_slots must lie in [0, market_size]");
  universe.validate();
  pool.validate();
  switch (protocol) {
    case Protocol::kCp: cp.validate(universe.market_size); break;
    case Protocol::kImPassive: passive.validate(); break;
    case Protocol::kImRebel: rebel.validate(universe.market_size); break;
  }
}

void ExperimentConfig::propagate() {
  auto apply = [&](ScenarioConfig& s) {
    s.seed = seed;
    s.trials = trials;
    s.top_slots = top_slots;
    s.output_dir = output_dir;
  };
  apply(base);
  for (auto& s : scenarios) apply(s);
}

namespace {

// Map reader that remembers which keys were consumed and rejects the rest.
class Fields {
 public:
  Fields(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(where("") + "must be a mapping");
  }
  Fields(const Fields&) = delete;
  Fields& operator=(const Fields&) = delete;

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
  }

  YAML::Node node(const std::string& key) {
    seen_.insert(key);
    return node_ && node_.IsMap() ? node_[key] : YAML::Node();
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = node_[key].as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(key) + "has the wrong type");
    }
  }

  void get_optional(const std::string& key, std::optional<double>& out) {
    if (!has(key)) return;
    double v = 0.0;
    get(key, v);
    out = v;
  }

  std::string where(const std::string& key) const {
    std::string p = path_;
    if (!key.empty()) p += p.empty() ? key : "." + key;
    return (p.empty() ? std::string("config") : p) + ": ";
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError("unknown field '" + child(key) + "'");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

// Rewrites a ConfigError thrown by a validate() call so it carries the path.
template <typename F>
void checked(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

YAML::Node merge(const YAML::Node& base, const YAML::Node& over) {
  if (!over || over.IsNull()) return YAML::Clone(base);
  if (!base || !base.IsMap() || !over.IsMap()) return YAML::Clone(over);
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : over) {
    const auto key = kv.first.as<std::string>();
    out[key] = merge(base[key], kv.second);
  }
  return out;
}

HypeRange parse_range(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence() || n.size() != 2) throw ConfigError(path + ": expected [lo, hi]");
  try {
    return {n[0].as<double>(), n[1].as<double>()};
  } catch (const YAML::Exception&) {
    throw ConfigError(path + ": expected two numbers");
  }
}

UniverseConfig parse_universe(const YAML::Node& n, const std::string& path) {
  UniverseConfig u;
  Fields f(n, path);
  f.get("n_submissions", u.n_submissions);
  f.get("market_size", u.market_size);
  f.get("frac_top", u.frac_top);
  f.get("frac_mid", u.frac_mid);
  f.get("frac_bot", u.frac_bot);
  if (f.has("hype_ranges")) {
    Fields h(f.node("hype_ranges"), f.child("hype_ranges"));
    const char* names[3] = {"top", "mid", "bot"};
    for (std::size_t c = 0; c < 3; ++c) {
      if (h.has(names[c])) u.hype_ranges[c] = parse_range(h.node(names[c]), h.child(names[c]));
    }
    h.finish();
  }
  f.get("authors_per_paper", u.authors_per_paper);
  f.get("author_pool_size", u.author_pool_size);
  f.get("author_overlap", u.author_overlap);
  f.finish();
  checked(path, [&] { u.validate(); });
  return u;
}

IRDistribution parse_distribution(const YAML::Node& n, const std::string& path) {
  try {
    return IRDistribution::parse(n.as<std::string>());
  } catch (const YAML::Exception&) {
    throw ConfigError(path + ": expected a distribution name");
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

PoolConfig parse_pool(const YAML::Node& n, const std::string& path) {
  PoolConfig p;
  Fields f(n, path);
  f.get("n_investors", p.n_investors);
  if (f.has("distribution")) p.distribution = parse_distribution(f.node("distribution"), f.child("distribution"));
  f.get("wallet_size", p.wallet_size);
  f.get("scrutiny_fraction", p.scrutiny_fraction);
  f.get("ir_floor", p.ir_floor);
  f.get("ir_cap", p.ir_cap);
  if (f.has("ir_init")) {
    std::string s;
    f.get("ir_init", s);
    if (s == "skill") {
      p.ir_init = IrInit::kFromSkill;
    } else if (s == "unit") {
      p.ir_init = IrInit::kUnit;
    } else {
      throw ConfigError(f.where("ir_init") + "expected 'skill' or 'unit', got '" + s + "'");
    }
  }
  f.finish();
  checked(path, [&] { p.validate(); });
  return p;
}

void parse_cp(Fields& f, CpConfig& cp) {
  f.get("select_fraction", cp.select_fraction);
  f.get("accept_target", cp.accept_target);
  if (f.has("rejection")) {
    std::string s;
    f.get("rejection", s);
    if (s == "even") {
      cp.rejection = RejectionRule::kEven;
    } else if (s == "proportional") {
      cp.rejection = RejectionRule::kProportional;
    } else {
      throw ConfigError(f.where("rejection") + "expected 'even' or 'proportional', got '" + s + "'");
    }
  }
}

void parse_passive(Fields& f, PassiveImConfig& p) {
  f.get("reviews_per_paper", p.reviews_per_paper);
  if (f.has("class_weights")) {
    std::vector<double> w;
    f.get("class_weights", w);
    if (w.size() != 3) throw ConfigError(f.where("class_weights") + "expected three weights (top, mid, bot)");
    p.class_weights = {w[0], w[1], w[2]};
  }
  if (f.has("misclassification")) {
    std::string s;
    f.get("misclassification", s);
    if (s == "uniform") {
      p.misclassification = Misclassification::kUniform;
    } else if (s == "adjacent") {
      p.misclassification = Misclassification::kAdjacent;
    } else {
      throw ConfigError(f.where("misclassification") + "expected 'uniform' or 'adjacent', got '" + s + "'");
    }
  }
  f.get_optional("cap_per_paper", p.cap_per_paper);
}

void parse_rebel(Fields& f, RebelConfig& r) {
  f.get("n_scan", r.n_scan);
  f.get("n_pick", r.n_pick);
  f.get("tau", r.tau);
  f.get("noise_sigma0", r.noise_sigma0);
  f.get_optional("cap_per_paper", r.cap_per_paper);
  if (f.has("scan_mode")) {
    std::string s;
    f.get("scan_mode", s);
    if (s == "balanced") {
      r.scan_mode = ScanMode::kBalanced;
    } else if (s == "independent") {
      r.scan_mode = ScanMode::kIndependent;
    } else {
      throw ConfigError(f.where("scan_mode") + "expected 'balanced' or 'independent', got '" + s + "'");
    }
  }
}

ScenarioConfig parse_scenario(const YAML::Node& n, const std::string& path, bool require_protocol) {
  ScenarioConfig sc;
  Fields f(n, path);
  f.get("name", sc.name);
  sc.universe = parse_universe(f.node("universe"), f.child("universe"));
  sc.pool = parse_pool(f.node("pool"), f.child("pool"));
  if (f.has("protocol")) {
    std::string s;
    f.get("protocol", s);
    try {
      sc.protocol = protocol_from_string(s);
    } catch (const ConfigError& e) {
      throw ConfigError(f.child("protocol") + ": unknown protocol '" + s +
                        "' (expected CP, IM_PASSIVE or IM_REBEL)");
    }
  } else if (require_protocol) {
    throw ConfigError(f.where("protocol") + "missing");
  }
  Fields params(f.node("params"), f.child("params"));
  switch (sc.protocol) {
    case Protocol::kCp: parse_cp(params, sc.cp); break;
    case Protocol::kImPassive: parse_passive(params, sc.passive); break;
    case Protocol::kImRebel: parse_rebel(params, sc.rebel); break;
  }
  params.finish();
  f.finish();
  sc.passive.wallet_size = sc.pool.wallet_size;
  sc.rebel.wallet_size = sc.pool.wallet_size;
  return sc;
}

RingConfig parse_ring(Fields& f, bool* enabled) {
  RingConfig r;
  if (enabled != nullptr) f.get("enabled", *enabled);
  f.get("size", r.ring_size);
  f.get("papers_per_member", r.papers_per_member);
  f.get("coordination", r.coordination);
  if (f.has("target_class")) {
    std::string s;
    f.get("target_class", s);
    try {
      r.target_class = class_from_string(s);
    } catch (const std::exception& e) {
      throw ConfigError(f.where("target_class") + e.what());
    }
  }
  return r;
}

AblationConfig parse_ablation(const YAML::Node& n, const std::string& path) {
  AblationConfig a;
  Fields f(n, path);
  f.get("n_scan", a.n_scan);
  f.get("picks", a.picks);
  if (f.has("pools")) {
    const auto node = f.node("pools");
    if (!node.IsSequence()) throw ConfigError(f.where("pools") + "expected a list");
    a.pools.clear();
    for (std::size_t i = 0; i < node.size(); ++i) {
      a.pools.push_back(parse_distribution(node[i], f.child("pools") + "[" + std::to_string(i) + "]"));
    }
  }
  f.finish();
  require(!a.picks.empty(), path + ".picks: must not be empty");
  require(!a.pools.empty(), path + ".pools: must not be empty");
  for (int p : a.picks) {
    require(p >= 1 && p <= a.n_scan, path + ".picks: every pick must lie in [1, n_scan]");
  }
  return a;
}

CalibrationSection parse_calibration(const YAML::Node& n, const std::string& path) {
  CalibrationSection c;
  Fields f(n, path);
  f.get("n_cycles", c.n_cycles);
  f.get("lag", c.lag);
  {
    Fields r(f.node("rule"), f.child("rule"));
    r.get("up_factor", c.rule.up_factor);
    r.get("down_factor", c.rule.down_factor);
    r.get("decay_lambda", c.rule.decay_lambda);
    r.get("ir_floor", c.rule.ir_floor);
    r.get("ir_cap", c.rule.ir_cap);
    r.get("alignment_threshold", c.rule.alignment_threshold);
    if (r.has("threshold_mode")) {
      std::string s;
      r.get("threshold_mode", s);
      if (s == "cohort_quantile") {
        c.rule.threshold_mode = ThresholdMode::kCohortQuantile;
      } else if (s == "absolute") {
        c.rule.threshold_mode = ThresholdMode::kAbsolute;
      } else {
        throw ConfigError(r.where("threshold_mode") + "expected 'cohort_quantile' or 'absolute', got '" + s + "'");
      }
    }
    r.finish();
    checked(f.child("rule"), [&] { c.rule.validate(); });
  }
  {
    Fields m(f.node("mvis"), f.child("mvis"));
    m.get("sigma", c.mvis.sigma_mvis);
    m.finish();
    checked(f.child("mvis"), [&] { c.mvis.validate(); });
  }
  {
    Fields r(f.node("ring"), f.child("ring"));
    c.ring = parse_ring(r, &c.ring_enabled);
    r.finish();
  }
  f.finish();
  require(c.n_cycles >= 1, path + ".n_cycles: must be >= 1");
  require(c.lag >= 1, path + ".lag: must be >= 1");
  return c;
}

CollusionSection parse_collusion(const YAML::Node& n, const std::string& path) {
  CollusionSection c;
  Fields f(n, path);
  {
    Fields r(f.node("ring"), f.child("ring"));
    c.ring = parse_ring(r, nullptr);
    r.finish();
  }
  {
    Fields cit(f.node("citations"), f.child("citations"));
    cit.get("mean_out_degree", c.citations.mean_out_degree);
    cit.finish();
  }
  {
    Fields d(f.node("detect"), f.child("detect"));
    d.get("min_tokens", c.detect.min_tokens);
    d.get("min_citations", c.detect.min_citations);
    d.get("min_size", c.detect.min_size);
    d.get("density_threshold", c.detect.density_threshold);
    d.get("z_threshold", c.detect.z_threshold);
    d.get("n_null", c.detect.n_null);
    d.get("swaps_per_edge", c.detect.swaps_per_edge);
    d.get("max_rings", c.detect.max_rings);
    d.finish();
    checked(f.child("detect"), [&] { c.detect.validate(); });
  }
  f.get("null_runs", c.null_runs);
  f.finish();
  require(c.null_runs >= 0, path + ".null_runs: must be >= 0");
  return c;
}

LoadConfig parse_load(const YAML::Node& n, const std::string& path) {
  LoadConfig l;
  Fields f(n, path);
  f.get("n_submissions", l.n_submissions);
  f.get("pc_size", l.pc_size);
  f.get("erc_size", l.erc_size);
  f.get("cp_initial_reviews_per_paper", l.cp_initial_reviews_per_paper);
  f.get("cp_phase2_fraction", l.cp_phase2_fraction);
  f.get("cp_phase2_extra_reviews", l.cp_phase2_extra_reviews);
  f.get("cp_erc_initial_reviews_per_paper", l.cp_erc_initial_reviews_per_paper);
  f.get("im_p1_pc_reviews", l.im_p1_pc_reviews);
  f.get("im_p1_erc_reviews", l.im_p1_erc_reviews);
  f.get("im_scrutiny", l.im_scrutiny);
  f.finish();
  checked(path, [&] { l.validate(); });
  return l;
}

LongtailSection parse_longtail(const YAML::Node& n, const std::string& path) {
  LongtailSection s;
  Fields f(n, path);
  f.get("input", s.input);
  f.get("top_k", s.stats.top_k);
  f.get("bottom_q", s.stats.bottom_q);
  f.finish();
  for (int k : s.stats.top_k) require(k >= 1, path + ".top_k: values must be >= 1");
  for (double q : s.stats.bottom_q) require(q > 0.0 && q <= 1.0, path + ".bottom_q: values must lie in (0, 1]");
  return s;
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);

  ExperimentConfig cfg;
  cfg.source = text;
  Fields f(root, "");
  f.get("name", cfg.name);
  f.get("seed", cfg.seed);
  f.get("trials", cfg.trials);
  f.get("top_slots", cfg.top_slots);
  f.get("output_dir", cfg.output_dir);

  YAML::Node base(YAML::NodeType::Map);
  for (const char* key : {"universe", "pool", "protocol", "params"}) {
    if (f.has(key)) base[key] = f.node(key);
  }
  cfg.has_protocol = f.has("protocol");
  cfg.base = parse_scenario(base, "", false);
  cfg.base.name = cfg.name;

  if (f.has("scenarios")) {
    const auto list = f.node("scenarios");
    if (!list.IsSequence()) throw ConfigError("scenarios: expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "scenarios[" + std::to_string(i) + "]";
      YAML::Node inherited = YAML::Clone(base);
      // Params belong to a protocol; a scenario that switches protocol
      // starts from that protocol's defaults.
      if (list[i].IsMap() && list[i]["protocol"] && base["protocol"] &&
          list[i]["protocol"].as<std::string>("") != base["protocol"].as<std::string>("")) {
        inherited.remove("params");
      }
      auto sc = parse_scenario(merge(inherited, list[i]), path, true);
      if (!list[i]["name"]) sc.name = cfg.name + "-" + std::to_string(i);
      cfg.scenarios.push_back(std::move(sc));
    }
  } else if (cfg.has_protocol) {
    cfg.scenarios.push_back(cfg.base);
  }

  if (f.has("ablation")) cfg.ablation = parse_ablation(f.node("ablation"), "ablation");
  if (f.has("calibration")) cfg.calibration = parse_calibration(f.node("calibration"), "calibration");
  if (f.has("collusion")) cfg.collusion = parse_collusion(f.node("collusion"), "collusion");
  if (f.has("load")) cfg.load = parse_load(f.node("load"), "load");
  if (f.has("longtail")) cfg.longtail = parse_longtail(f.node("longtail"), "longtail");
  f.finish();

  require(cfg.trials >= 1, "trials: must be >= 1");
  cfg.propagate();
  for (const auto& s : cfg.scenarios) checked(s.name, [&] { s.validate(); });
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str());
}

CalibrationConfig make_calibration_config(const ExperimentConfig& cfg) {
  CalibrationConfig c;
  c.top_slots = cfg.top_slots;
  c.universe = cfg.base.universe;
  c.pool = cfg.base.pool;
  c.rebel = cfg.base.rebel;
  if (cfg.calibration) {
    const auto& s = *cfg.calibration;
    c.n_cycles = s.n_cycles;
    c.lag = s.lag;
    c.rule = s.rule;
    c.mvis = s.mvis;
    c.ring_enabled = s.ring_enabled;
    c.ring = s.ring;
  }
  return c;
}

CollusionScenario make_collusion_scenario(const ExperimentConfig& cfg) {
  CollusionScenario sc;
  sc.universe = cfg.base.universe;
  sc.pool = cfg.base.pool;
  sc.rebel = cfg.base.rebel;
  if (cfg.collusion) {
    sc.ring = cfg.collusion->ring;
    sc.citations = cfg.collusion->citations;
    sc.detect = cfg.collusion->detect;
  }
  return sc;
}

}  // namespace impact
