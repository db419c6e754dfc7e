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

#include "impact/investor_pool.hpp"

#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#include "impact/error.hpp"

namespace impact {

IRDistribution IRDistribution::custom(double alpha, double beta) {
  IRDistribution d{Kind::kCustom, alpha, beta};
  d.validate();
  return d;
}

IRDistribution IRDistribution::parse(std::string_view text) {
  if (text == "crisis") return crisis();
  if (text == "normal") return normal();
  if (text == "desired") return desired();
  if (text == "perfect") return perfect();
  if (text.starts_with("beta(") && text.ends_with(")")) {
    std::string body(text.substr(5, text.size() - 6));
    for (char& ch : body) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream in(body);
    double a = 0.0, b = 0.0;
    if (in >> a >> b) return custom(a, b);
  }
  throw ConfigError("unknown IR distribution '" + std::string(text) +
                    "' (expected crisis, normal, desired, perfect or beta(a,b))");
}

std::string IRDistribution::name() const {
  switch (kind) {
    case Kind::kCrisis: return "crisis";
    case Kind::kNormal: return "normal";
    case Kind::kDesired: return "desired";
    case Kind::kPerfect: return "perfect";
    case Kind::kCustom: {
      std::ostringstream out;
      out << "beta(" << alpha << ',' << beta << ')';
      return out.str();
    }
  }
  return "?";
}

double IRDistribution::mean() const {
  if (kind == Kind::kPerfect) return 1.0;
  return alpha / (alpha + beta);
}

void IRDistribution::validate() const {
  if (kind == Kind::kPerfect) return;
  require(alpha > 0.0 && beta > 0.0, "Beta parameters must be strictly positive");
}

std::vector<double> distribution_density(const IRDistribution& dist,
                                         std::span<const double> x_grid) {
  dist.validate();
  require(dist.kind != IRDistribution::Kind::kPerfect,
          "the perfect distribution is a point mass and has no density");
  const double a = dist.alpha;
  const double b = dist.beta;
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  std::vector<double> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    if (x < 0.0 || x > 1.0) {
      out.push_back(0.0);
      continue;
    }
    // Endpoint limits: finite only when the matching shape parameter is >= 1.
    if (x == 0.0 || x == 1.0) {
      const double shape = x == 0.0 ? a : b;
      if (shape > 1.0) {
        out.push_back(0.0);
      } else if (shape == 1.0) {
        out.push_back(std::exp(log_norm));
      } else {
        out.push_back(std::numeric_limits<double>::infinity());
      }
      continue;
    }
    out.push_back(std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x)));
  }
  return out;
}

void PoolConfig::validate() const {
  require(n_investors > 0, "pool.n_investors must be > 0");
  require(wallet_size >= 0.0, "pool.wallet_size must be >= 0");
  require(scrutiny_fraction >= 0.0 && scrutiny_fraction <= 1.0,
          "pool.scrutiny_fraction must lie in [0, 1]");
  require(ir_floor < ir_cap, "pool.ir_floor must be below pool.ir_cap");
  distribution.validate();
}

std::vector<Investor> generate_pool(const PoolConfig& cfg, Rng& rng) {
  cfg.validate();
  std::vector<Investor> pool(static_cast<std::size_t>(cfg.n_investors));
  const bool perfect = cfg.distribution.kind == IRDistribution::Kind::kPerfect;
  for (int i = 0; i < cfg.n_investors; ++i) {
    Investor& inv = pool[static_cast<std::size_t>(i)];
    inv.id = i;
    inv.skill = perfect ? 1.0 : rng.beta(cfg.distribution.alpha, cfg.distribution.beta);
    inv.ir = cfg.ir_init == IrInit::kFromSkill ? inv.skill : 1.0;
    inv.wallet = cfg.wallet_size;
    inv.scrutiny_fraction = cfg.scrutiny_fraction;
  }
  return pool;
}

void write_investors_csv(const std::string& path, std::span<const Investor> investors) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << "id,skill,ir,ring_id\n";
  for (const auto& inv : investors) {
    out << inv.id << ',' << inv.skill << ',' << inv.ir << ',';
    if (inv.ring_id) out << *inv.ring_id;
    out << '\n';
  }
}

}  // namespace impact
