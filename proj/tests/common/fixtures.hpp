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

// Hand-built inputs shared by the unit and acceptance tests.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathloc/enrich.hpp"
#include "pathloc/tables.hpp"

namespace pathloc::fixtures {

inline CountryCode code(const char* s) { return *CountryCode::parse(s); }

inline LookupTables depgraph_tables() {
  LookupTables t;
  t.region_map = {{code("ZA"), "Africa"}, {code("KE"), "Africa"}, {code("DE"), "Europe"}};
  t.centroids = {{code("ZA"), {-29.0, 24.0}}, {code("KE"), {0.5, 37.9}}, {code("DE"), {51.2, 10.4}}};
  // ZA: non-local pair weight 3/10; DE: 9/1000; KE pairs are plain.
  t.as_dim_addresses = {{10, 3}, {20, 1}, {30, 7}, {40, 1},
                        {50, 9}, {60, 1}, {70, 991}, {80, 1}, {90, 1}, {91, 1}};
  t.as_dim_users = t.as_dim_addresses;
  return t;
}

// An intra-country path from host `index` in `country`, optionally detouring
// through two hops in `via`.
inline EnrichedPath country_path(const char* country, std::uint32_t country_id, std::uint32_t index,
                                 Asn src_asn, Asn dst_asn, const char* via,
                                 const LookupTables& t) {
  EnrichedPath p;
  p.measurement_id = std::string(country) + "-" + std::to_string(index);
  p.source_ip = IpAddress::v4((country_id << 24) | (1u << 16) | index);
  p.destination_ip = IpAddress::v4((country_id << 24) | (2u << 16) | index);
  p.src_country = p.dst_country = code(country);
  p.src_asn = src_asn;
  p.dst_asn = dst_asn;
  p.dest_rtt_ms = 100.0;
  auto located = [&](const char* cc, int pos) {
    EnrichedHop h;
    h.position = pos;
    h.ip = IpAddress::v4((country_id << 24) | (3u << 16) | static_cast<std::uint32_t>(pos));
    h.location = Location{code(cc), t.centroids.at(code(cc))};
    return h;
  };
  int pos = 1;
  p.hops.push_back(located(country, pos++));
  if (via) {
    p.hops.push_back(located(via, pos++));
    p.hops.push_back(located(via, pos++));
  }
  EnrichedHop last = located(country, pos);
  last.ip = p.destination_ip;
  p.hops.push_back(last);
  return p;
}

// ZA: 25 host pairs, 5 non-local through DE carrying weight 0.3.
// DE: 20 host pairs, 2 non-local through ZA carrying weight 0.009.
// KE: 19 host pairs, all non-local through DE.
// Expected (defaults 20 / 2 / 0.01): one edge ZA->DE with N^L^A = 0.3 over
// 5 pairs; vertices DE (in-degree 1) and ZA; KE absent.
inline std::vector<EnrichedPath> depgraph_paths(const LookupTables& t) {
  std::vector<EnrichedPath> out;
  for (std::uint32_t i = 0; i < 25; ++i) {
    out.push_back(i < 5 ? country_path("ZA", 41, i, 10, 20, "DE", t)
                        : country_path("ZA", 41, i, 30, 40, nullptr, t));
  }
  for (std::uint32_t i = 0; i < 20; ++i) {
    out.push_back(i < 2 ? country_path("DE", 80, i, 50, 60, "ZA", t)
                        : country_path("DE", 80, i, 70, 80, nullptr, t));
  }
  for (std::uint32_t i = 0; i < 19; ++i) out.push_back(country_path("KE", 105, i, 90, 91, "DE", t));
  return out;
}

}  // namespace pathloc::fixtures
