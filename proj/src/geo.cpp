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

#include "pathloc/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pathloc/enrich.hpp"
#include "pathloc/errors.hpp"

namespace pathloc::geo {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

bool valid(const GeoPoint& p) {
  return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

GeoPoint normalized(GeoPoint p) {
  if (p.lon == -180.0) p.lon = 180.0;
  return p;
}

double great_circle_km(const GeoPoint& a, const GeoPoint& b) {
  if (a == b) return 0.0;
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double circuitousness(std::span<const GeoPoint> points) {
  if (points.size() < 2) throw PreconditionError("circuitousness needs at least two points");
  const double direct = great_circle_km(points.front(), points.back());
  if (direct <= 0.0) {
    throw UndefinedError("circuitousness is undefined when the path starts and ends at one point");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    total += great_circle_km(points[i], points[i + 1]);
  }
  return total / direct;
}

PathLength path_length_km(const EnrichedPath& path, const LookupTables& tables) {
  PathLength out;
  const GeoPoint* prev = nullptr;
  CountryCode prev_cc;
  for (const auto& hop : path.hops) {
    if (!hop.located()) continue;
    const CountryCode& cc = hop.location->country;
    auto it = tables.centroids.find(cc);
    if (it == tables.centroids.end()) {
      ++out.skipped_hops;
      continue;
    }
    if (prev && cc == prev_cc) continue;
    if (prev) out.km += great_circle_km(*prev, it->second);
    prev = &it->second;
    prev_cc = cc;
  }
  return out;
}

}  // namespace pathloc::geo
