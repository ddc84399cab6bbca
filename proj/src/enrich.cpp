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

#include "pathloc/enrich.hpp"

#include "pathloc/geo.hpp"

namespace pathloc {

namespace {

double located_fraction(const std::vector<EnrichedHop>& hops) {
  std::size_t with_ip = 0;
  std::size_t located = 0;
  for (const auto& h : hops) {
    if (!h.ip) continue;
    ++with_ip;
    if (h.located()) ++located;
  }
  return with_ip == 0 ? 0.0 : static_cast<double>(located) / static_cast<double>(with_ip);
}

EnrichedHop annotate_hop(const RawHop& raw, const LookupTables& tables) {
  EnrichedHop hop;
  hop.position = raw.position;
  hop.ip = raw.ip;
  hop.rtt_ms = raw.rtt_ms;
  if (!raw.ip) return hop;

  if (is_private(*raw.ip)) {
    hop.is_private = true;
    return hop;
  }

  const GeoEntry* geo = tables.geo.lookup(*raw.ip);
  if (geo) hop.location = Location{geo->country, geo->point};

  if (const IxpEntry* ixp = tables.ixp_lans.lookup(*raw.ip)) {
    // Peering LAN addresses are shared fabric: no origin AS.
    hop.ixp = ixp->id;
    if (hop.location) {
      hop.ixp_country_conflict = hop.location->country != ixp->country;
    } else if (auto c = tables.centroids.find(ixp->country); c != tables.centroids.end()) {
      hop.location = Location{ixp->country, c->second};
    }
  } else if (const Asn* asn = tables.prefix2as.lookup(*raw.ip)) {
    hop.asn = *asn;
  }

  if (hop.location && !tables.centroids.contains(hop.location->country)) {
    hop.unknown_country = true;
  }
  return hop;
}

std::optional<CountryCode> geo_country(const IpAddress& ip, const LookupTables& tables) {
  if (is_private(ip)) return std::nullopt;
  if (const GeoEntry* e = tables.geo.lookup(ip)) return e->country;
  return std::nullopt;
}

std::optional<Asn> origin_asn(const IpAddress& ip, const LookupTables& tables) {
  if (is_private(ip)) return std::nullopt;
  if (const Asn* a = tables.prefix2as.lookup(ip)) return *a;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kNotSuccessful:
      return "not_successful";
    case RejectReason::kUnknownSourceCountry:
      return "unknown_source_country";
    case RejectReason::kUnknownDestinationCountry:
      return "unknown_destination_country";
    case RejectReason::kUnknownSourceAsn:
      return "unknown_source_asn";
    case RejectReason::kUnknownDestinationAsn:
      return "unknown_destination_asn";
  }
  return "unknown";
}

AnnotateResult annotate(const RawTraceroute& raw, const LookupTables& tables) {
  auto rtt = raw.destination_rtt();
  if (!rtt) return Rejection{RejectReason::kNotSuccessful, raw.measurement_id};

  EnrichedPath path;
  path.measurement_id = raw.measurement_id;
  path.family = raw.source_ip.family();
  path.source_ip = raw.source_ip;
  path.destination_ip = raw.destination_ip;
  path.timestamp = raw.timestamp;
  path.dest_rtt_ms = *rtt;

  auto src_cc = raw.source_country ? raw.source_country : geo_country(raw.source_ip, tables);
  if (!src_cc) return Rejection{RejectReason::kUnknownSourceCountry, raw.source_ip.to_string()};
  auto dst_cc = geo_country(raw.destination_ip, tables);
  if (!dst_cc) {
    return Rejection{RejectReason::kUnknownDestinationCountry, raw.destination_ip.to_string()};
  }
  auto src_asn = raw.source_asn ? raw.source_asn : origin_asn(raw.source_ip, tables);
  if (!src_asn) return Rejection{RejectReason::kUnknownSourceAsn, raw.source_ip.to_string()};
  auto dst_asn = origin_asn(raw.destination_ip, tables);
  if (!dst_asn) {
    return Rejection{RejectReason::kUnknownDestinationAsn, raw.destination_ip.to_string()};
  }
  path.src_country = *src_cc;
  path.dst_country = *dst_cc;
  path.src_asn = *src_asn;
  path.dst_asn = *dst_asn;

  const GeoEntry* src_geo = is_private(raw.source_ip) ? nullptr : tables.geo.lookup(raw.source_ip);
  if (src_geo && src_geo->country == path.src_country) {
    path.source_point = src_geo->point;
  } else if (auto c = tables.centroids.find(path.src_country); c != tables.centroids.end()) {
    path.source_point = c->second;
  }

  path.hops.reserve(raw.hops.size());
  for (const auto& h : raw.hops) path.hops.push_back(annotate_hop(h, tables));
  path.geolocated_fraction = located_fraction(path.hops);
  return path;
}

EnrichedPath speed_filter(EnrichedPath path) {
  if (!path.source_point) return path;
  for (auto& hop : path.hops) {
    if (!hop.located() || !hop.rtt_ms) continue;
    const double d = geo::great_circle_km(*path.source_point, hop.location->point);
    if (d > max_one_way_km(*hop.rtt_ms)) {
      hop.location.reset();
      hop.unknown_country = false;
      hop.ixp_country_conflict = false;
      hop.speed_reverted = true;
    }
  }
  path.geolocated_fraction = located_fraction(path.hops);
  return path;
}

}  // namespace pathloc
