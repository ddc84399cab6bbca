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

#include "pathloc/stability.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "pathloc/csv.hpp"
#include "pathloc/errors.hpp"

namespace pathloc {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;
constexpr int kValueDecimals = 9;

std::optional<double> l_hat_a(std::span<const PairObservation> obs, const AsDimensions& addresses) {
  static const AsDimensions kNoUsers;
  const PairStats stats = pair_stats(obs, addresses, kNoUsers);
  std::vector<std::size_t> local(stats.pairs.size());
  for (std::size_t i = 0; i < stats.pairs.size(); ++i) local[i] = stats.pairs[i].local;
  return weighted_indicator(stats, local, false);
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t CounterRng::next() {
  ++counter_;
  return mix64(key_ + counter_ * kGoldenGamma);
}

std::uint64_t CounterRng::uniform(std::uint64_t n) {
  // Reject the low 2^64 mod n outputs so every residue is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view region, std::uint64_t k,
                                 std::uint64_t repetition) {
  std::uint64_t h = fnv1a64(region);
  h = mix64(h ^ k);
  h = mix64(h ^ repetition);
  return seed ^ h;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, CounterRng& rng) {
  k = std::min(k, n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

StabilityRun subsample_locality(std::span<const PairObservation> obs, const std::string& region,
                                const AsDimensions& addresses, const StabilityParams& params) {
  if (params.repetitions <= 0) throw ConfigError("stability repetitions must be positive");

  StabilityRun run;
  run.region = region;
  run.available = obs.size();
  run.repetitions = params.repetitions;
  run.seed = params.seed;
  run.full_value = l_hat_a(obs, addresses);

  std::set<std::size_t> ks;
  for (std::size_t k : params.cardinalities) {
    if (k == 0) continue;
    if (k > obs.size()) {
      run.truncated = true;
      k = obs.size();
    }
    if (k > 0) ks.insert(k);
  }
  run.cardinalities.assign(ks.begin(), ks.end());

  struct Task {
    std::size_t k;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t k : run.cardinalities) {
    run.results[k].resize(static_cast<std::size_t>(params.repetitions));
    for (int r = 0; r < params.repetitions; ++r) tasks.push_back({k, r});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::vector<PairObservation> subset;
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      CounterRng rng(derive_stream_seed(params.seed, region, task.k,
                                        static_cast<std::uint64_t>(task.rep)));
      subset.clear();
      for (std::size_t i : sample_without_replacement(obs.size(), task.k, rng)) {
        subset.push_back(obs[i]);
      }
      // Each task owns a distinct slot, so no synchronisation is needed.
      run.results.at(task.k)[static_cast<std::size_t>(task.rep)] = l_hat_a(subset, addresses);
    }
  };

  const unsigned threads = std::max(1u, params.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return run;
}

StabilityRun subsample_locality(std::span<const ClassifiedPath> paths, const std::string& region,
                                const LookupTables& tables, const StabilityParams& params) {
  std::vector<PairObservation> obs;
  obs.reserve(paths.size());
  for (const auto& p : paths) {
    if (p.verdict.region != region) {
      throw PreconditionError("path " + p.path.measurement_id + " was not classified for " + region);
    }
    obs.push_back({p.path.src_asn, p.path.dst_asn, p.verdict.is_local});
  }
  return subsample_locality(obs, region, tables.as_dim_addresses, params);
}

std::string stability_csv(const StabilityRun& run) {
  std::ostringstream out;
  csv::write_row(out, {"cardinality", "repetition", "l_hat_a"});
  for (const auto& [k, values] : run.results) {
    for (std::size_t r = 0; r < values.size(); ++r) {
      csv::write_row(out, {std::to_string(k), std::to_string(r),
                           values[r] ? csv::fixed(*values[r], kValueDecimals) : ""});
    }
  }
  return out.str();
}

}  // namespace pathloc
