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

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace impact {

/// SplitMix64 finalizer. Used to hash stream keys into engine seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seeded random stream with order-independent substreams.
///
/// A stream remembers the seed it was built from; split() derives a child
/// from that seed and a key, never from the engine state. Two workers that
/// split the same parent with different keys therefore get the same draws
/// no matter how many numbers either has already consumed, which is what
/// makes trial- and investor-level parallelism reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  Rng split(std::uint64_t key) const;
  Rng split(std::initializer_list<std::uint64_t> keys) const;

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);      // [lo, hi]
  int uniform_int(int lo, int hi);           // inclusive
  double normal(double mean, double stddev);
  double beta(double alpha, double beta);
  int poisson(double mean);
  bool bernoulli(double p);

  /// k distinct values from [0, n), in draw order.
  std::vector<int> sample_without_replacement(int n, int k);

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i - 1)));
      std::swap(values[i - 1], values[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& values) {
    shuffle(std::span<T>(values));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Stream tags keep substreams of one trial apart.
namespace stream {
inline constexpr std::uint64_t kUniverse = 0x756e6976ULL;
inline constexpr std::uint64_t kPool = 0x706f6f6cULL;
inline constexpr std::uint64_t kProtocol = 0x70726f74ULL;
inline constexpr std::uint64_t kGraph = 0x67726170ULL;
inline constexpr std::uint64_t kInvestor = 0x696e7673ULL;
inline constexpr std::uint64_t kScan = 0x7363616eULL;
inline constexpr std::uint64_t kMvis = 0x6d766973ULL;
inline constexpr std::uint64_t kRing = 0x72696e67ULL;
inline constexpr std::uint64_t kCitations = 0x63697465ULL;
inline constexpr std::uint64_t kNull = 0x6e756c6cULL;
inline constexpr std::uint64_t kCycle = 0x6379636cULL;
}  // namespace stream

}  // namespace impact
