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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathloc/enrich.hpp"
#include "pathloc/tables.hpp"

namespace pathloc {

// The geographic area a path is judged against: a named region from the
// region map, or a single country.
struct Area {
  enum class Kind { kRegion, kCountry };

  Kind kind = Kind::kRegion;
  std::string name;

  static Area region(std::string name) { return {Kind::kRegion, std::move(name)}; }
  static Area country(const CountryCode& cc) { return {Kind::kCountry, cc.str()}; }

  bool contains(const CountryCode& cc, const LookupTables& tables) const;
};

enum class LocalityRule {
  kAllInRegion,
  kConservativeLocal,
  kTwoForeign,
  kForeignAdjacentUnlocated,
};

std::string_view to_string(LocalityRule r);

// How one intermediate hop relates to the area under study.
enum class HopPlacement { kInside, kForeign, kUnlocatable };

struct RuleOutcome {
  bool is_local = true;
  int foreign_located_count = 0;
  LocalityRule rule = LocalityRule::kAllInRegion;
};

// The conservative two-router rule over the intermediate hops of one path,
// in probe order. A path is non-local when two or more hops are located
// outside the area, or when exactly one is and it sits next to a hop that
// cannot be located. The source and destination count as located neighbours.
RuleOutcome apply_two_router_rule(std::span<const HopPlacement> intermediate);

struct LocalityVerdict {
  std::string region;  // area name
  bool is_local = true;
  int foreign_located_count = 0;
  LocalityRule rule_fired = LocalityRule::kAllInRegion;
  // Endpoint countries plus the countries of located intermediate hops.
  std::set<CountryCode> countries_traversed;
};

// Throws PreconditionError unless both endpoint countries lie in the area.
LocalityVerdict classify(const EnrichedPath& path, const Area& area, const LookupTables& tables);
LocalityVerdict classify(const EnrichedPath& path, const std::string& region,
                         const LookupTables& tables);

struct ClassifiedPath {
  EnrichedPath path;
  LocalityVerdict verdict;
};

// Minimal per-path input to the weighting step.
struct PairObservation {
  Asn src = 0;
  Asn dst = 0;
  bool local = false;
};

struct AsPairStats {
  Asn src_asn = 0;
  Asn dst_asn = 0;
  std::size_t total = 0;
  std::size_t local = 0;
  // Absent when either AS has no entry in the corresponding dimension table.
  std::optional<double> weight_a;
  std::optional<double> weight_c;

  double locality() const { return static_cast<double>(local) / static_cast<double>(total); }
};

struct PairStats {
  std::vector<AsPairStats> pairs;  // sorted by (src_asn, dst_asn)
  std::size_t excluded_a = 0;      // pairs without an address-space weight
  std::size_t excluded_c = 0;      // pairs without an end-user weight
};

// Groups observations by ordered AS pair and normalises the product of the
// two AS dimensions over every pair that has both.
PairStats pair_stats(std::span<const PairObservation> observations, const AsDimensions& addresses,
                     const AsDimensions& users);

// Same, from classified paths. Every verdict must belong to `region`.
PairStats pair_stats(std::span<const ClassifiedPath> paths, const std::string& region,
                     const LookupTables& tables);

struct CountryMetric {
  std::size_t paths = 0;
  std::optional<double> a;
  std::optional<double> c;
};

struct RegionLocality {
  std::string region;
  std::size_t paths_total = 0;
  std::size_t paths_local = 0;
  std::optional<double> l_hat_a;
  std::optional<double> l_hat_c;
  std::optional<double> nl_hat_a;
  std::optional<double> nl_hat_c;
  // Local (resp. non-local) paths that traverse each country, weighted over
  // the full pair normalisation.
  std::map<CountryCode, CountryMetric> per_country_local;
  std::map<CountryCode, CountryMetric> per_country_nonlocal;
  std::size_t excluded_pairs_a = 0;
  std::size_t excluded_pairs_c = 0;
};

// Weighted sum over pairs of (indicator hits / total) * weight. The
// indicator count per pair is given in the same order as `stats.pairs`.
std::optional<double> weighted_indicator(const PairStats& stats,
                                         std::span<const std::size_t> hits, bool user_weights);

RegionLocality region_locality(const PairStats& stats, std::span<const ClassifiedPath> paths,
                               const std::string& region);

// Convenience: pair_stats followed by region_locality.
RegionLocality compute_region_locality(std::span<const ClassifiedPath> paths,
                                       const std::string& region, const LookupTables& tables);

// A fully specified host-level world used to check the approximation against
// the subnet-level definition.
struct SyntheticWorld {
  std::vector<std::uint64_t> hosts;            // hosts per subnetwork
  std::vector<std::vector<bool>> local;        // local[s][d], s != d
};

// Subnet-level locality: local host pairs across subnetworks weighted by
// |s|*|d|, plus |s|*(|s|-1) always-local pairs inside each subnetwork when
// `include_intra`. Throws UndefinedError when the world has no hosts or no
// host pairs.
double exact_locality_oracle(const SyntheticWorld& world, bool include_intra = true);

// Keeps paths whose destination AS is a content network.
std::vector<EnrichedPath> filter_content_targets(std::span<const EnrichedPath> paths,
                                                 const LookupTables& tables);

}  // namespace pathloc
