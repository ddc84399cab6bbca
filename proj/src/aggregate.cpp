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

#include "pathloc/aggregate.hpp"

#include <set>

#include "pathloc/geo.hpp"

namespace pathloc {

Characterization characterize(std::span<const EnrichedPath> paths, Family family) {
  std::set<IpAddress> addresses;
  std::set<IpAddress> networks;
  std::set<Asn> ases;
  Characterization c;
  for (const auto& p : paths) {
    if (p.family != family) continue;
    ++c.traceroutes;
    for (const auto& ip : {p.source_ip, p.destination_ip}) {
      addresses.insert(ip);
      networks.insert(network_of(ip));
    }
    ases.insert(p.src_asn);
    ases.insert(p.dst_asn);
  }
  c.addresses = addresses.size();
  c.networks = networks.size();
  c.ases = ases.size();
  return c;
}

std::size_t ip_path_length(const EnrichedPath& path) {
  std::size_t n = 0;
  for (const auto& h : path.hops) {
    if (h.ip) ++n;
  }
  return n;
}

std::size_t as_path_length(const EnrichedPath& path) {
  std::size_t runs = 1;
  Asn last = path.src_asn;
  auto visit = [&](Asn a) {
    if (a != last) {
      ++runs;
      last = a;
    }
  };
  for (const auto& h : path.hops) {
    if (h.asn) visit(*h.asn);
  }
  visit(path.dst_asn);
  return runs;
}

namespace {

struct MeanAccumulator {
  std::size_t n = 0;
  double ip = 0, as = 0, rtt = 0, km = 0;

  PathMeans finish() const {
    PathMeans m;
    m.paths = n;
    if (n == 0) return m;
    const double d = static_cast<double>(n);
    m.ip_length = ip / d;
    m.as_length = as / d;
    m.rtt_ms = rtt / d;
    m.km = km / d;
    return m;
  }
};

}  // namespace

PathProperties path_properties(std::span<const ClassifiedPath> paths, const LookupTables& tables) {
  MeanAccumulator local, nonlocal;
  for (const auto& cp : paths) {
    auto& acc = cp.verdict.is_local ? local : nonlocal;
    ++acc.n;
    acc.ip += static_cast<double>(ip_path_length(cp.path));
    acc.as += static_cast<double>(as_path_length(cp.path));
    acc.rtt += cp.path.dest_rtt_ms;
    acc.km += geo::path_length_km(cp.path, tables).km;
  }
  return {local.finish(), nonlocal.finish()};
}

bool traverses_ixp(const EnrichedPath& path) {
  for (const auto& h : path.hops) {
    if (h.ixp) return true;
  }
  return false;
}

bool traverses_tier1(const EnrichedPath& path, const LookupTables& tables) {
  for (const auto& h : path.hops) {
    if (h.asn && tables.tier1.contains(*h.asn)) return true;
  }
  return false;
}

FacilityBreakdown facility_breakdown(std::span<const ClassifiedPath> paths,
                                     const LookupTables& tables) {
  FacilityBreakdown out;
  for (const auto& cp : paths) {
    auto& c = cp.verdict.is_local ? out.local : out.nonlocal;
    ++c.total;
    const bool ixp = traverses_ixp(cp.path);
    const bool tier1 = traverses_tier1(cp.path, tables);
    if (ixp) ++c.via_ixp;
    if (tier1) ++c.via_tier1;
    if (!ixp && !tier1) ++c.via_other;
  }
  return out;
}

}  // namespace pathloc
