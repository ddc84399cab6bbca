// Copyright 2026 The pathloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathloc/locality.hpp"

namespace pathloc {

// Counter-based generator: output i is the SplitMix64 finaliser applied to
// key + (i + 1) * golden_gamma. Any (key, i) can be evaluated independently.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next();
  // Uniform in [0, n) by rejection; n > 0.
  std::uint64_t uniform(std::uint64_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view bytes);

// seed XOR hash(region, k, repetition). Part of the reproducibility contract:
//   h = fnv1a64(region); h = mix64(h ^ k); h = mix64(h ^ repetition)
std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view region, std::uint64_t k,
                                 std::uint64_t repetition);

// First k entries of a partial Fisher-Yates shuffle of 0..n-1, where step i
// swaps position i with i + rng.uniform(n - i).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, CounterRng& rng);

struct StabilityParams {
  std::vector<std::size_t> cardinalities = {1000, 2000, 3000, 5000, 10000, 20000, 30000, 50000};
  int repetitions = 50;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct StabilityRun {
  std::string region;
  std::size_t available = 0;               // classified paths in the region
  std::vector<std::size_t> cardinalities;  // effective, ascending, capped at `available`
  bool truncated = false;                  // some requested cardinality exceeded `available`
  int repetitions = 0;
  std::uint64_t seed = 0;
  // One value per repetition; absent when no sampled pair carries a weight.
  std::map<std::size_t, std::vector<std::optional<double>>> results;
  std::optional<double> full_value;
};

// Recomputes the address-weighted locality on random subsets of increasing
// size. Deterministic in (seed, region, k, repetition) whatever the thread
// count. Throws ConfigError when repetitions <= 0.
StabilityRun subsample_locality(std::span<const PairObservation> observations,
                                const std::string& region, const AsDimensions& addresses,
                                const StabilityParams& params);

StabilityRun subsample_locality(std::span<const ClassifiedPath> paths, const std::string& region,
                                const LookupTables& tables, const StabilityParams& params);

// Columns cardinality,repetition,l_hat_a.
std::string stability_csv(const StabilityRun& run);

}  // namespace pathloc
