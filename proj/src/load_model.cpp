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

#include "impact/load_model.hpp"

#include <fmt/format.h>

#include <fstream>

#include "impact/error.hpp"

namespace impact {

void LoadConfig::validate() const {
  require(n_submissions >= 0, "load.n_submissions must be >= 0");
  require(pc_size > 0, "load.pc_size must be > 0");
  require(erc_size > 0, "load.erc_size must be > 0");
  require(cp_initial_reviews_per_paper >= 0, "load.cp_initial_reviews_per_paper must be >= 0");
  require(cp_phase2_fraction >= 0 && cp_phase2_fraction <= 1, "load.cp_phase2_fraction must lie in [0, 1]");
  require(cp_phase2_extra_reviews >= 0, "load.cp_phase2_extra_reviews must be >= 0");
  require(cp_erc_initial_reviews_per_paper >= 0 &&
              cp_erc_initial_reviews_per_paper <= cp_initial_reviews_per_paper,
          "load.cp_erc_initial_reviews_per_paper must lie in [0, cp_initial_reviews_per_paper]");
  require(im_p1_pc_reviews >= 0, "load.im_p1_pc_reviews must be >= 0");
  require(im_p1_erc_reviews >= 0, "load.im_p1_erc_reviews must be >= 0");
  require(im_scrutiny >= 0, "load.im_scrutiny must be >= 0");
}

CpLoad cp_load(const LoadConfig& cfg) {
  cfg.validate();
  CpLoad r;
  const double initial = cfg.n_submissions * cfg.cp_initial_reviews_per_paper;
  const double phase2 = cfg.n_submissions * cfg.cp_phase2_fraction * cfg.cp_phase2_extra_reviews;
  r.total_reviews = initial + phase2;
  r.erc_reviews = cfg.n_submissions * cfg.cp_erc_initial_reviews_per_paper;
  r.pc_reviews = r.total_reviews - r.erc_reviews;
  r.pc_reviews_per_member = r.pc_reviews / cfg.pc_size;
  r.erc_reviews_per_member = r.erc_reviews / cfg.erc_size;
  r.pc_reviews_per_paper = cfg.n_submissions > 0 ? r.pc_reviews / cfg.n_submissions : 0.0;
  return r;
}

ImLoad im_load(const LoadConfig& cfg) {
  cfg.validate();
  ImLoad r;
  r.pc_phase1_per_member = cfg.n_submissions * cfg.im_p1_pc_reviews / cfg.pc_size;
  r.erc_phase1_per_member = cfg.n_submissions * cfg.im_p1_erc_reviews / cfg.erc_size;
  r.pc_phase2_reads_per_member = cfg.im_scrutiny;
  r.total_touched = r.pc_phase1_per_member + r.pc_phase2_reads_per_member;
  return r;
}

void print_load_table(std::ostream& out, const LoadConfig& cfg) {
  const CpLoad cp = cp_load(cfg);
  const ImLoad im = im_load(cfg);
  out << fmt::format("{:<34}{:>10}{:>10}\n", "metric", "CP", "IM");
  out << fmt::format("{:<34}{:>10.2f}{:>10.2f}\n", "PC reviews per member", cp.pc_reviews_per_member,
                     im.pc_phase1_per_member);
  out << fmt::format("{:<34}{:>10}{:>10.2f}\n", "PC investment reads per member", "-",
                     im.pc_phase2_reads_per_member);
  out << fmt::format("{:<34}{:>10.2f}{:>10.2f}\n", "PC papers touched per member",
                     cp.pc_reviews_per_member, im.total_touched);
  out << fmt::format("{:<34}{:>10.2f}{:>10.2f}\n", "ERC reviews per member", cp.erc_reviews_per_member,
                     im.erc_phase1_per_member);
  out << fmt::format("{:<34}{:>10.2f}{:>10}\n", "PC reviews per paper", cp.pc_reviews_per_paper, "-");
}

void write_load_csv(const std::string& path, const LoadConfig& cfg) {
  const CpLoad cp = cp_load(cfg);
  const ImLoad im = im_load(cfg);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << "protocol,metric,value\n";
  out << "CP,pc_reviews_per_member," << cp.pc_reviews_per_member << '\n';
  out << "CP,erc_reviews_per_member," << cp.erc_reviews_per_member << '\n';
  out << "CP,pc_reviews_per_paper," << cp.pc_reviews_per_paper << '\n';
  out << "CP,total_reviews," << cp.total_reviews << '\n';
  out << "IM,pc_phase1_per_member," << im.pc_phase1_per_member << '\n';
  out << "IM,erc_phase1_per_member," << im.erc_phase1_per_member << '\n';
  out << "IM,pc_phase2_reads_per_member," << im.pc_phase2_reads_per_member << '\n';
  out << "IM,total_touched," << im.total_touched << '\n';
}

}  // namespace impact
