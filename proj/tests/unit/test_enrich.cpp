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

#include <cmath>
#include <variant>

#include "doctest.h"
#include "pathloc/enrich.hpp"
#include "pathloc/geo.hpp"
#include "test_support.hpp"

using namespace pathloc;
namespace t = pathloc::testing;

namespace {

LookupTables tables() {
  LookupTables tb = t::world_tables();
  t::add_table(tb, TableKind::kGeo,
               "prefix,cc,lat,lon\n41.0.0.0/8,ZA,-29.0,24.0\n80.0.0.0/8,DE,52.5,13.4\n"
               "196.60.9.0/24,KE,-1.3,36.8\n");
  t::add_table(tb, TableKind::kPrefix2As,
               "prefix,asn\n41.0.0.0/8,100\n80.0.0.0/8,300\n196.60.0.0/16,65000\n"
               "150.0.0.0/8,500\n");
  t::add_table(tb, TableKind::kIxp, "prefix,ixp_id,cc\n196.60.8.0/24,JB,ZA\n196.60.9.0/24,NBO,ZA\n");
  return tb;
}

RawTraceroute raw(const std::string& src, const std::string& dst,
                  std::vector<RawHop> hops) {
  RawTraceroute r;
  r.measurement_id = "r";
  r.source_ip = t::ip(src);
  r.destination_ip = t::ip(dst);
  r.timestamp = 1;
  r.hops = std::move(hops);
  r.hops.push_back({static_cast<int>(r.hops.size()) + 1, r.destination_ip, 50.0});
  return r;
}

EnrichedPath annotated(const RawTraceroute& r, const LookupTables& tb) {
  AnnotateResult a = annotate(r, tb);
  REQUIRE(std::holds_alternative<EnrichedPath>(a));
  return std::get<EnrichedPath>(a);
}

// Point on the equator `km` east of (0, 0).
GeoPoint east_of_origin(double km) { return {0.0, km / geo::kEarthRadiusKm * 180.0 / M_PI}; }

EnrichedPath one_hop_path(double km, std::optional<double> rtt) {
  EnrichedPath p;
  p.source_point = GeoPoint{0.0, 0.0};
  EnrichedHop h;
  h.position = 1;
  h.ip = t::ip("80.0.0.1");
  h.rtt_ms = rtt;
  h.location = Location{t::cc("DE"), east_of_origin(km)};
  p.hops.push_back(h);
  return p;
}

}  // namespace

TEST_CASE("private hops are unlocated and carry no ASN") {
  const LookupTables tb = tables();
  const EnrichedPath p = annotated(raw("41.0.0.1", "41.0.0.2", {{1, t::ip("192.168.1.1"), 1.0}}), tb);
  const EnrichedHop& h = p.hops[0];
  CHECK(h.is_private);
  CHECK_FALSE(h.located());
  CHECK_FALSE(h.asn);
}

TEST_CASE("peering LAN hops get the exchange id and no ASN") {
  const LookupTables tb = tables();
  const EnrichedPath p = annotated(
      raw("41.0.0.1", "41.0.0.2", {{1, t::ip("196.60.8.5"), 1.0}, {2, t::ip("196.60.9.5"), 1.0}}), tb);
  // No geo entry: falls back to the exchange's registered country.
  CHECK(p.hops[0].ixp == "JB");
  CHECK_FALSE(p.hops[0].asn);
  REQUIRE(p.hops[0].located());
  CHECK(p.hops[0].location->country == t::cc("ZA"));
  CHECK_FALSE(p.hops[0].ixp_country_conflict);
  // Geo table and registry disagree: geolocation wins, conflict recorded.
  CHECK(p.hops[1].ixp == "NBO");
  CHECK(p.hops[1].location->country == t::cc("KE"));
  CHECK(p.hops[1].ixp_country_conflict);
}

TEST_CASE("a hop without geolocation still resolves its ASN") {
  const LookupTables tb = tables();
  const EnrichedPath p = annotated(raw("41.0.0.1", "41.0.0.2", {{1, t::ip("150.1.1.1"), 1.0}}), tb);
  CHECK_FALSE(p.hops[0].located());
  CHECK(p.hops[0].asn == 500u);
}

TEST_CASE("endpoint metadata overrides table lookups") {
  const LookupTables tb = tables();
  RawTraceroute r = raw("41.0.0.1", "80.0.0.2", {});
  r.source_country = t::cc("KE");
  r.source_asn = 7;
  const EnrichedPath p = annotated(r, tb);
  CHECK(p.src_country == t::cc("KE"));
  CHECK(p.src_asn == 7u);
  CHECK(p.dst_country == t::cc("DE"));
  CHECK(p.dst_asn == 300u);
  CHECK(p.dest_rtt_ms == 50.0);
  // The geo coordinate contradicts the declared country: use its centroid.
  REQUIRE(p.source_point);
  CHECK(*p.source_point == tb.centroids.at(t::cc("KE")));

  r.source_country.reset();
  CHECK(*annotated(r, tb).source_point == GeoPoint{-29.0, 24.0});
}

TEST_CASE("unresolvable endpoints are rejected with a reason") {
  const LookupTables tb = tables();
  auto reason = [&](const RawTraceroute& r) {
    AnnotateResult a = annotate(r, tb);
    REQUIRE(std::holds_alternative<Rejection>(a));
    return std::get<Rejection>(a).reason;
  };
  CHECK(reason(raw("8.8.8.8", "41.0.0.2", {})) == RejectReason::kUnknownSourceCountry);
  CHECK(reason(raw("41.0.0.1", "8.8.8.8", {})) == RejectReason::kUnknownDestinationCountry);
  RawTraceroute no_src_asn = raw("8.8.8.8", "41.0.0.2", {});
  no_src_asn.source_country = t::cc("ZA");
  CHECK(reason(no_src_asn) == RejectReason::kUnknownSourceAsn);
  LookupTables partial = tables();
  t::add_table(partial, TableKind::kGeo, "prefix,cc,lat,lon\n151.0.0.0/8,ZA,-29.0,24.0\n");
  AnnotateResult a = annotate(raw("41.0.0.1", "151.0.0.1", {}), partial);
  CHECK(std::get<Rejection>(a).reason == RejectReason::kUnknownDestinationAsn);
  RawTraceroute unreached = raw("41.0.0.1", "41.0.0.2", {});
  unreached.hops.back().rtt_ms.reset();
  CHECK(reason(unreached) == RejectReason::kNotSuccessful);
}

TEST_CASE("annotate is deterministic and never locates a private hop") {
  const LookupTables tb = tables();
  auto g = t::rng(31);
  const char* pool[] = {"41.0.0.9", "80.1.1.1", "10.0.0.1", "196.60.8.1", "150.0.0.1", "9.9.9.9", "fd00::1"};
  for (int i = 0; i < 500; ++i) {
    std::vector<RawHop> hops;
    const int n = t::uniform_int(g, 0, 6);
    for (int k = 0; k < n; ++k) {
      RawHop h{k + 1, std::nullopt, std::nullopt};
      const auto pick = static_cast<std::size_t>(t::uniform_int(g, 0, 6));
      if (pick < 6) h.ip = t::ip(pool[pick]);
      hops.push_back(h);
    }
    const RawTraceroute r = raw("41.0.0.1", "80.0.0.2", hops);
    const EnrichedPath a = annotated(r, tb);
    CHECK(a == annotated(r, tb));
    for (const auto& h : a.hops) {
      CHECK_FALSE((h.is_private && h.located()));
      CHECK_FALSE((h.is_private && h.asn));
      CHECK_FALSE((h.ixp && h.asn));
    }
    CHECK(a.geolocated_fraction >= 0.0);
    CHECK(a.geolocated_fraction <= 1.0);
  }
}

TEST_CASE("speed filter examples") {
  CHECK(std::abs(max_one_way_km(100.0) - 9993.08193) < 1e-4);
  CHECK(speed_filter(one_hop_path(5000.0, 100.0)).hops[0].located());
  const EnrichedPath reverted = speed_filter(one_hop_path(5000.0, 10.0));
  CHECK_FALSE(reverted.hops[0].located());
  CHECK(reverted.hops[0].speed_reverted);
  CHECK(speed_filter(one_hop_path(0.0, 0.0)).hops[0].located());
  CHECK(speed_filter(one_hop_path(5000.0, std::nullopt)).hops[0].located());
}

TEST_CASE("speed filter keeps exactly the hops within reach at two thirds of c") {
  auto g = t::rng(32);
  const double km_per_ms = 2.0 / 3.0 * 299792.458 / 1000.0;
  for (int i = 0; i < 10000; ++i) {
    const double km = t::uniform(g, 0.0, 20000.0);
    const double rtt = t::uniform(g, 0.0, 300.0);
    const EnrichedPath p = one_hop_path(km, rtt);
    const double d = geo::great_circle_km(*p.source_point, p.hops[0].location->point);
    const EnrichedPath f = speed_filter(p);
    CHECK(f.hops[0].located() == (d <= km_per_ms * rtt / 2.0));
    if (f.hops[0].located()) CHECK(d <= km_per_ms * rtt / 2.0 + 1e-6);
    CHECK(speed_filter(f) == f);
  }
}

TEST_CASE("speed filter only removes locations") {
  auto g = t::rng(33);
  for (int i = 0; i < 1000; ++i) {
    EnrichedPath p;
    p.source_point = GeoPoint{t::uniform(g, -60, 60), t::uniform(g, -180, 180)};
    const int n = t::uniform_int(g, 1, 8);
    for (int k = 0; k < n; ++k) {
      EnrichedHop h;
      h.position = k + 1;
      h.ip = IpAddress::v4(static_cast<std::uint32_t>(g()));
      if (g() % 4) h.location = Location{t::cc("DE"), {t::uniform(g, -60, 60), t::uniform(g, -180, 180)}};
      if (g() % 4) h.rtt_ms = t::uniform(g, 0, 200);
      p.hops.push_back(h);
    }
    const EnrichedPath f = speed_filter(p);
    for (std::size_t k = 0; k < p.hops.size(); ++k) {
      if (f.hops[k].located()) CHECK(f.hops[k].location == p.hops[k].location);
      if (!p.hops[k].located()) CHECK_FALSE(f.hops[k].located());
    }
    std::size_t located = 0;
    for (const auto& h : p.hops) located += h.located() ? 1 : 0;
    CHECK(f.geolocated_fraction <= static_cast<double>(located) / static_cast<double>(n) + 1e-15);
  }
}
