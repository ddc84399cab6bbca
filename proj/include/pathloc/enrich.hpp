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

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pathloc/ingest.hpp"
#include "pathloc/tables.hpp"
#include "pathloc/types.hpp"

namespace pathloc {

struct Location {
  CountryCode country;
  GeoPoint point;

  bool operator==(const Location&) const = default;
};

struct EnrichedHop {
  int position = 0;
  std::optional<IpAddress> ip;
  std::optional<double> rtt_ms;
  std::optional<Location> location;  // nullopt: unlocated
  std::optional<Asn> asn;            // never set for private or peering-LAN hops
  std::optional<std::string> ixp;    // peering LAN identifier
  bool is_private = false;
  bool unknown_country = false;       // located in a country with no centroid
  bool ixp_country_conflict = false;  // geo table and IXP registry disagree
  bool speed_reverted = false;        // location dropped by speed_filter

  bool located() const { return location.has_value(); }
  bool operator==(const EnrichedHop&) const = default;
};

struct EnrichedPath {
  std::string measurement_id;
  Family family = Family::kV4;
  IpAddress source_ip;
  IpAddress destination_ip;
  std::int64_t timestamp = 0;
  std::vector<EnrichedHop> hops;  // last hop is the destination's reply

  CountryCode src_country;
  CountryCode dst_country;
  Asn src_asn = 0;
  Asn dst_asn = 0;
  double dest_rtt_ms = 0.0;
  double geolocated_fraction = 0.0;  // located hops / hops with an address

  // Reference position of the source used by the speed filter: the geo table
  // coordinate when it agrees with the source country, otherwise the
  // country centroid.
  std::optional<GeoPoint> source_point;

  bool operator==(const EnrichedPath&) const = default;
};

enum class RejectReason {
  kNotSuccessful,
  kUnknownSourceCountry,
  kUnknownDestinationCountry,
  kUnknownSourceAsn,
  kUnknownDestinationAsn,
};

std::string_view to_string(RejectReason r);

struct Rejection {
  RejectReason reason;
  std::string detail;
};

using AnnotateResult = std::variant<EnrichedPath, Rejection>;

// Attaches geolocation, origin AS and peering-LAN membership to every hop.
// Endpoint country and ASN come from the record when present, otherwise from
// the tables; a path whose endpoints cannot be resolved is rejected.
AnnotateResult annotate(const RawTraceroute& path, const LookupTables& tables);

// Fibre propagation speed (2/3 c) in kilometres per millisecond.
inline constexpr double kSpeedOfLightKmPerS = 299792.458;
inline constexpr double kFiberKmPerMs = 2.0 / 3.0 * kSpeedOfLightKmPerS / 1000.0;

// Farthest a reply can have travelled given a round-trip time.
inline double max_one_way_km(double rtt_ms) { return kFiberKmPerMs * (rtt_ms / 2.0); }

// Drops the location of every hop that sits farther from the source than its
// own RTT allows. Hops without RTT, and paths without a source position, are
// left unchanged.
EnrichedPath speed_filter(EnrichedPath path);

}  // namespace pathloc
