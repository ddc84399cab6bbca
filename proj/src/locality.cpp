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

#include "pathloc/locality.hpp"

#include <algorithm>
#include <utility>

#include "pathloc/errors.hpp"

namespace pathloc {

namespace {

using PairKey = std::pair<Asn, Asn>;

std::optional<double> product(const AsDimensions& dims, Asn a, Asn b) {
  auto ia = dims.find(a);
  auto ib = dims.find(b);
  if (ia == dims.end() || ib == dims.end()) return std::nullopt;
  return ia->second * ib->second;
}

// Fills one weight column; returns how many pairs were left without weight.
template <typename Member>
std::size_t assign_weights(std::vector<AsPairStats>& pairs, const AsDimensions& dims,
                           Member member) {
  std::vector<std::optional<double>> raw(pairs.size());
  double denom = 0.0;
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    raw[i] = product(dims, pairs[i].src_asn, pairs[i].dst_asn);
    if (raw[i]) {
      denom += *raw[i];
    } else {
      ++excluded;
    }
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (raw[i] && denom > 0.0) pairs[i].*member = *raw[i] / denom;
  }
  return excluded;
}

}  // namespace

bool Area::contains(const CountryCode& cc, const LookupTables& tables) const {
  if (kind == Kind::kCountry) return cc.str() == name;
  const std::string* r = tables.region_of(cc);
  return r && *r == name;
}

std::string_view to_string(LocalityRule r) {
  switch (r) {
    case LocalityRule::kAllInRegion:
      return "all_in_region";
    case LocalityRule::kConservativeLocal:
      return "conservative_local";
    case LocalityRule::kTwoForeign:
      return "two_foreign";
    case LocalityRule::kForeignAdjacentUnlocated:
      return "foreign_adjacent_unlocated";
  }
  return "unknown";
}

RuleOutcome apply_two_router_rule(std::span<const HopPlacement> hops) {
  RuleOutcome out;
  std::size_t foreign_at = 0;
  for (std::size_t i = 0; i < hops.size(); ++i) {
    if (hops[i] == HopPlacement::kForeign) {
      ++out.foreign_located_count;
      foreign_at = i;
    }
  }
  if (out.foreign_located_count == 0) {
    out.rule = LocalityRule::kAllInRegion;
    return out;
  }
  if (out.foreign_located_count >= 2) {
    out.is_local = false;
    out.rule = LocalityRule::kTwoForeign;
    return out;
  }
  const bool prev_unlocatable =
      foreign_at > 0 && hops[foreign_at - 1] == HopPlacement::kUnlocatable;
  const bool next_unlocatable =
      foreign_at + 1 < hops.size() && hops[foreign_at + 1] == HopPlacement::kUnlocatable;
  if (prev_unlocatable || next_unlocatable) {
    out.is_local = false;
    out.rule = LocalityRule::kForeignAdjacentUnlocated;
  } else {
    out.rule = LocalityRule::kConservativeLocal;
  }
  return out;
}

LocalityVerdict classify(const EnrichedPath& path, const Area& area, const LookupTables& tables) {
  if (!area.contains(path.src_country, tables) || !area.contains(path.dst_country, tables)) {
    throw PreconditionError("path " + path.measurement_id + " (" + path.src_country.str() + "->" +
                            path.dst_country.str() + ") does not have both endpoints in " +
                            area.name);
  }

  LocalityVerdict v;
  v.region = area.name;
  v.countries_traversed = {path.src_country, path.dst_country};

  // The last hop is the destination itself; only routers in between count.
  const std::size_t n = path.hops.empty() ? 0 : path.hops.size() - 1;
  std::vector<HopPlacement> placement(n, HopPlacement::kUnlocatable);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& hop = path.hops[i];
    if (!hop.located()) continue;
    v.countries_traversed.insert(hop.location->country);
    placement[i] = area.contains(hop.location->country, tables) ? HopPlacement::kInside
                                                                : HopPlacement::kForeign;
  }

  const RuleOutcome r = apply_two_router_rule(placement);
  v.is_local = r.is_local;
  v.foreign_located_count = r.foreign_located_count;
  v.rule_fired = r.rule;
  return v;
}

LocalityVerdict classify(const EnrichedPath& path, const std::string& region,
                         const LookupTables& tables) {
  return classify(path, Area::region(region), tables);
}

PairStats pair_stats(std::span<const PairObservation> observations, const AsDimensions& addresses,
                     const AsDimensions& users) {
  std::map<PairKey, std::pair<std::size_t, std::size_t>> counts;  // total, local
  for (const auto& o : observations) {
    auto& c = counts[{o.src, o.dst}];
    ++c.first;
    if (o.local) ++c.second;
  }

  PairStats out;
  out.pairs.reserve(counts.size());
  for (const auto& [key, c] : counts) {
    AsPairStats p;
    p.src_asn = key.first;
    p.dst_asn = key.second;
    p.total = c.first;
    p.local = c.second;
    out.pairs.push_back(p);
  }
  out.excluded_a = assign_weights(out.pairs, addresses, &AsPairStats::weight_a);
  out.excluded_c = assign_weights(out.pairs, users, &AsPairStats::weight_c);
  return out;
}

PairStats pair_stats(std::span<const ClassifiedPath> paths, const std::string& region,
                     const LookupTables& tables) {
  std::vector<PairObservation> obs;
  obs.reserve(paths.size());
  for (const auto& p : paths) {
    if (p.verdict.region != region) {
      throw PreconditionError("path " + p.path.measurement_id + " was classified for '" +
                              p.verdict.region + "', not '" + region + "'");
    }
    obs.push_back({p.path.src_asn, p.path.dst_asn, p.verdict.is_local});
  }
  return pair_stats(obs, tables.as_dim_addresses, tables.as_dim_users);
}

std::optional<double> weighted_indicator(const PairStats& stats, std::span<const std::size_t> hits,
                                         bool user_weights) {
  double sum = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < stats.pairs.size(); ++i) {
    const auto& p = stats.pairs[i];
    const auto& w = user_weights ? p.weight_c : p.weight_a;
    if (!w) continue;
    any = true;
    sum += static_cast<double>(hits[i]) / static_cast<double>(p.total) * *w;
  }
  if (!any) return std::nullopt;
  return sum;
}

RegionLocality region_locality(const PairStats& stats, std::span<const ClassifiedPath> paths,
                               const std::string& region) {
  RegionLocality out;
  out.region = region;
  out.excluded_pairs_a = stats.excluded_a;
  out.excluded_pairs_c = stats.excluded_c;

  std::map<PairKey, std::size_t> index;
  for (std::size_t i = 0; i < stats.pairs.size(); ++i) {
    index[{stats.pairs[i].src_asn, stats.pairs[i].dst_asn}] = i;
  }

  const std::size_t n = stats.pairs.size();
  std::vector<std::size_t> local_hits(n, 0);
  std::vector<std::size_t> nonlocal_hits(n, 0);
  std::map<CountryCode, std::vector<std::size_t>> country_local;
  std::map<CountryCode, std::vector<std::size_t>> country_nonlocal;

  for (const auto& p : paths) {
    auto it = index.find({p.path.src_asn, p.path.dst_asn});
    if (it == index.end()) {
      throw PreconditionError("path " + p.path.measurement_id + " has no AS pair in the statistics");
    }
    const std::size_t i = it->second;
    ++out.paths_total;
    auto& by_country = p.verdict.is_local ? country_local : country_nonlocal;
    auto& metric = p.verdict.is_local ? out.per_country_local : out.per_country_nonlocal;
    if (p.verdict.is_local) {
      ++out.paths_local;
      ++local_hits[i];
    } else {
      ++nonlocal_hits[i];
    }
    for (const auto& cc : p.verdict.countries_traversed) {
      auto& hits = by_country[cc];
      if (hits.empty()) hits.assign(n, 0);
      ++hits[i];
      ++metric[cc].paths;
    }
  }

  out.l_hat_a = weighted_indicator(stats, local_hits, false);
  out.l_hat_c = weighted_indicator(stats, local_hits, true);
  out.nl_hat_a = weighted_indicator(stats, nonlocal_hits, false);
  out.nl_hat_c = weighted_indicator(stats, nonlocal_hits, true);

  for (const auto& [cc, hits] : country_local) {
    out.per_country_local[cc].a = weighted_indicator(stats, hits, false);
    out.per_country_local[cc].c = weighted_indicator(stats, hits, true);
  }
  for (const auto& [cc, hits] : country_nonlocal) {
    out.per_country_nonlocal[cc].a = weighted_indicator(stats, hits, false);
    out.per_country_nonlocal[cc].c = weighted_indicator(stats, hits, true);
  }
  // A country seen on one side only has a zero indicator on the other.
  const std::vector<std::size_t> none(n, 0);
  const CountryMetric zero{0, weighted_indicator(stats, none, false),
                           weighted_indicator(stats, none, true)};
  for (const auto& [cc, m] : out.per_country_local) out.per_country_nonlocal.try_emplace(cc, zero);
  for (const auto& [cc, m] : out.per_country_nonlocal) out.per_country_local.try_emplace(cc, zero);
  return out;
}

RegionLocality compute_region_locality(std::span<const ClassifiedPath> paths,
                                       const std::string& region, const LookupTables& tables) {
  return region_locality(pair_stats(paths, region, tables), paths, region);
}

double exact_locality_oracle(const SyntheticWorld& world, bool include_intra) {
  const std::size_t m = world.hosts.size();
  std::uint64_t total_hosts = 0;
  for (auto h : world.hosts) total_hosts += h;
  if (total_hosts == 0) throw UndefinedError("synthetic world has no hosts");

  double num = 0.0;
  double den = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t d = 0; d < m; ++d) {
      const double hs = static_cast<double>(world.hosts[s]);
      const double hd = static_cast<double>(world.hosts[d]);
      if (s != d) {
        const double pairs = hs * hd;
        den += pairs;
        if (world.local.at(s).at(d)) num += pairs;
      } else if (include_intra && world.hosts[s] > 0) {
        const double pairs = hs * (hd - 1.0);
        den += pairs;
        num += pairs;
      }
    }
  }
  if (den <= 0.0) throw UndefinedError("synthetic world has no host pairs");
  return num / den;
}

std::vector<EnrichedPath> filter_content_targets(std::span<const EnrichedPath> paths,
                                                 const LookupTables& tables) {
  std::vector<EnrichedPath> out;
  for (const auto& p : paths) {
    if (tables.content_asns.contains(p.dst_asn)) out.push_back(p);
  }
  return out;
}

}  // namespace pathloc
