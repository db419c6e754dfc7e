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

#include <span>
#include <string>
#include <vector>

namespace impact {

struct CitationRecord {
  std::string venue;
  std::string paper_label;
  long long citations = 0;
};

struct ConcentrationTriad {
  double pct_papers = 0.0;
  double pct_citations = 0.0;
  double avg_citations = 0.0;
};

struct QuantileTriad {
  int count = 0;
  double pct_papers = 0.0;
  double pct_citations = 0.0;
  double avg_citations = 0.0;
};

struct CurvePoint {
  int rank = 0;
  double cumulative_pct = 0.0;
};

/// Reads venue,paper,citations. Malformed rows raise DataError naming the
/// line; an empty data section yields no records and one warning.
std::vector<CitationRecord> load_citations(const std::string& path,
                                           std::vector<std::string>* warnings = nullptr);

ConcentrationTriad top_k_triad(std::span<const CitationRecord> records, int k);

/// The floor(q * n) least-cited papers.
QuantileTriad bottom_quantile_triad(std::span<const CitationRecord> records, double q);

/// Descending by citations; last point is 100.
std::vector<CurvePoint> cumulative_curve(std::span<const CitationRecord> records);

/// Records grouped by venue, venues in order of first appearance.
std::vector<std::pair<std::string, std::vector<CitationRecord>>> group_by_venue(
    std::span<const CitationRecord> records);

struct LongtailStats {
  std::vector<int> top_k{10, 20};
  std::vector<double> bottom_q{0.80, 0.75, 0.50};
};

/// longtail.csv: venue,stat,k_or_q,pct_papers,pct_citations,avg.
/// top_k values larger than a venue's paper count are skipped.
void write_longtail_csv(const std::string& path, std::span<const CitationRecord> records,
                        const LongtailStats& stats = {});

/// cumulative.csv: venue,rank,pct_papers,cumulative_pct_citations
void write_cumulative_csv(const std::string& path, std::span<const CitationRecord> records);

}  // namespace impact
