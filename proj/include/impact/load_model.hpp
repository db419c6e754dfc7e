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

#include <ostream>
#include <string>

namespace impact {

struct LoadConfig {
  double n_submissions = 850;
  double pc_size = 150;
  double erc_size = 100;
  double cp_initial_reviews_per_paper = 3;
  double cp_phase2_fraction = 0.6;
  double cp_phase2_extra_reviews = 2;
  // Initial CP reviews per paper written by the ERC; the PC writes the rest,
  // including every phase-2 review.
  double cp_erc_initial_reviews_per_paper = 760.0 / 850.0;
  double im_p1_pc_reviews = 2;
  double im_p1_erc_reviews = 1;
  double im_scrutiny = 10;

  void validate() const;
};

struct CpLoad {
  double total_reviews = 0.0;
  double pc_reviews = 0.0;
  double erc_reviews = 0.0;
  double pc_reviews_per_member = 0.0;
  double erc_reviews_per_member = 0.0;
  double pc_reviews_per_paper = 0.0;
};

struct ImLoad {
  double pc_phase1_per_member = 0.0;
  double erc_phase1_per_member = 0.0;
  double pc_phase2_reads_per_member = 0.0;
  double total_touched = 0.0;  // per PC member
};

CpLoad cp_load(const LoadConfig& cfg);
ImLoad im_load(const LoadConfig& cfg);

void print_load_table(std::ostream& out, const LoadConfig& cfg);
void write_load_csv(const std::string& path, const LoadConfig& cfg);

}  // namespace impact
