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

#include <span>
#include <vector>

#include "pathloc/types.hpp"

namespace pathloc {

struct EnrichedPath;
struct LookupTables;

namespace geo {

// Mean Earth radius (IUGG), kilometres.
inline constexpr double kEarthRadiusKm = 6371.0088;

// True when lat is in [-90, 90] and lon in [-180, 180].
bool valid(const GeoPoint& p);

// Folds lon into (-180, 180]; lat is left untouched.
GeoPoint normalized(GeoPoint p);

// Haversine distance on a sphere of radius kEarthRadiusKm.
double great_circle_km(const GeoPoint& a, const GeoPoint& b);

// Sum of consecutive leg lengths divided by the direct distance between the
// first and last point. Throws PreconditionError for fewer than two points
// and UndefinedError when first and last coincide.
double circuitousness(std::span<const GeoPoint> points);

struct PathLength {
  double km = 0.0;
  // Located hops whose country has no centroid entry.
  std::size_t skipped_hops = 0;
};

// Estimated path length: every located hop is moved to its country centroid,
// consecutive visits to the same country collapse, and leg lengths are
// summed. Unlocated hops are ignored.
PathLength path_length_km(const EnrichedPath& path, const LookupTables& tables);

}  // namespace geo
}  // namespace pathloc
