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

#include "impact/longtail.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "impact/error.hpp"

namespace impact {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Comma split with double-quoted fields ("" escapes a quote).
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  for (auto& f : out) f = trim(f);
  return out;
}

std::vector<long long> descending(std::span<const CitationRecord> records) {
  std::vector<long long> c;
  c.reserve(records.size());
  for (const auto& r : records) c.push_back(r.citations);
  std::stable_sort(c.begin(), c.end(), std::greater<>());
  return c;
}

double total_of(std::span<const long long> c) {
  return static_cast<double>(std::accumulate(c.begin(), c.end(), 0LL));
}

}  // namespace

std::vector<CitationRecord> load_citations(const std::string& path,
                                           std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open citation file " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": missing header venue,paper,citations");
  const auto header = split_csv(line);
  if (header != std::vector<std::string>{"venue", "paper", "citations"}) {
    throw DataError(path + ":1: expected header venue,paper,citations, got '" + trim(line) + "'");
  }
  std::vector<CitationRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    const std::string where = path + ":" + std::to_string(lineno) + ": ";
    if (f.size() != 3) throw DataError(where + "expected 3 fields, got " + std::to_string(f.size()));
    long long c = 0;
    std::size_t used = 0;
    try {
      c = std::stoll(f[2], &used);
    } catch (const std::exception&) {
      throw DataError(where + "citations '" + f[2] + "' is not an integer");
    }
    if (used != f[2].size()) throw DataError(where + "citations '" + f[2] + "' is not an integer");
    if (c < 0) throw DataError(where + "negative citation count " + f[2]);
    out.push_back({f[0], f[1], c});
  }
  if (out.empty() && warnings != nullptr) warnings->push_back(path + ": no data rows");
  return out;
}

ConcentrationTriad top_k_triad(std::span<const CitationRecord> records, int k) {
  if (records.empty()) throw DataError("top_k_triad needs at least one record");
  if (k < 1 || k > static_cast<int>(records.size())) {
    throw DataError("top_k_triad: k=" + std::to_string(k) + " outside [1, " +
                    std::to_string(records.size()) + "]");
  }
  const auto c = descending(records);
  const double total = total_of(c);
  const double top = static_cast<double>(std::accumulate(c.begin(), c.begin() + k, 0LL));
  ConcentrationTriad t;
  t.pct_papers = 100.0 * k / static_cast<double>(c.size());
  t.pct_citations = total > 0 ? 100.0 * top / total : 0.0;
  t.avg_citations = top / k;
  return t;
}

QuantileTriad bottom_quantile_triad(std::span<const CitationRecord> records, double q) {
  if (records.empty()) throw DataError("bottom_quantile_triad needs at least one record");
  require(q > 0.0 && q <= 1.0, "bottom quantile must lie in (0, 1]");
  const auto c = descending(records);
  const double total = total_of(c);
  const int n = static_cast<int>(c.size());
  const int count = static_cast<int>(std::floor(q * n + 1e-9));
  const double bottom = static_cast<double>(std::accumulate(c.end() - count, c.end(), 0LL));
  QuantileTriad t;
  t.count = count;
  t.pct_papers = 100.0 * count / n;
  t.pct_citations = total > 0 ? 100.0 * bottom / total : 0.0;
  t.avg_citations = count > 0 ? bottom / count : 0.0;
  return t;
}

std::vector<CurvePoint> cumulative_curve(std::span<const CitationRecord> records) {
  if (records.empty()) throw DataError("cumulative_curve needs at least one record");
  const auto c = descending(records);
  const double total = total_of(c);
  std::vector<CurvePoint> out;
  long long running = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    running += c[i];
    const double pct = total > 0 ? 100.0 * static_cast<double>(running) / total
                                 : 100.0 * static_cast<double>(i + 1) / static_cast<double>(c.size());
    out.push_back({static_cast<int>(i + 1), pct});
  }
  out.back().cumulative_pct = 100.0;
  return out;
}

std::vector<std::pair<std::string, std::vector<CitationRecord>>> group_by_venue(
    std::span<const CitationRecord> records) {
  std::vector<std::pair<std::string, std::vector<CitationRecord>>> out;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& g) { return g.first == r.venue; });
    if (it == out.end()) {
      out.emplace_back(r.venue, std::vector<CitationRecord>{});
      it = out.end() - 1;
    }
    it->second.push_back(r);
  }
  return out;
}

void write_longtail_csv(const std::string& path, std::span<const CitationRecord> records,
                        const LongtailStats& stats) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << "venue,stat,k_or_q,pct_papers,pct_citations,avg\n";
  for (const auto& [venue, rows] : group_by_venue(records)) {
    for (int k : stats.top_k) {
      if (k > static_cast<int>(rows.size())) continue;
      const auto t = top_k_triad(rows, k);
      out << venue << ",top_k," << k << ',' << t.pct_papers << ',' << t.pct_citations << ','
          << t.avg_citations << '\n';
    }
    for (double q : stats.bottom_q) {
      const auto t = bottom_quantile_triad(rows, q);
      out << venue << ",bottom_q," << fmt::format("{}", q) << ',' << t.pct_papers << ',' << t.pct_citations << ','
          << t.avg_citations << '\n';
    }
  }
}

void write_cumulative_csv(const std::string& path, std::span<const CitationRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << "venue,rank,pct_papers,cumulative_pct_citations\n";
  for (const auto& [venue, rows] : group_by_venue(records)) {
    const auto curve = cumulative_curve(rows);
    for (const auto& p : curve) {
      out << venue << ',' << p.rank << ',' << 100.0 * p.rank / static_cast<double>(rows.size()) << ','
          << p.cumulative_pct << '\n';
    }
  }
}

}  // namespace impact
