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

#include <cstddef>
#include <optional>
#include <span>

#include "pathloc/enrich.hpp"
#include "pathloc/locality.hpp"

namespace pathloc {

// Endpoint coverage of one region and address family.
struct Characterization {
  std::size_t traceroutes = 0;
  std::size_t addresses = 0;  // distinct sources and targets
  std::size_t networks = 0;   // distinct /24 (v4) or /48 (v6)
  std::size_t ases = 0;       // distinct source and target ASes
};

// Counts sources and targets only; intermediate hops are ignored. Paths of
// another family than `family` are skipped.
Characterization characterize(std::span<const EnrichedPath> paths, Family family);

// Responding hops, the destination reply included.
std::size_t ip_path_length(const EnrichedPath& path);

// Runs of equal ASNs along source AS, hop ASNs (hops without one skipped)
// and destination AS.
std::size_t as_path_length(const EnrichedPath& path);

struct PathMeans {
  std::size_t paths = 0;
  // All absent when paths == 0.
  std::optional<double> ip_length;
  std::optional<double> as_length;
  std::optional<double> rtt_ms;
  std::optional<double> km;
};

struct PathProperties {
  PathMeans local;
  PathMeans nonlocal;
};

PathProperties path_properties(std::span<const ClassifiedPath> paths, const LookupTables& tables);

struct FacilityCounts {
  std::size_t total = 0;
  std::size_t via_ixp = 0;
  std::size_t via_tier1 = 0;
  std::size_t via_other = 0;  // neither an IXP nor a Tier-1 AS

  static double percent(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
  }
};

struct FacilityBreakdown {
  FacilityCounts local;
  FacilityCounts nonlocal;
};

bool traverses_ixp(const EnrichedPath& path);
bool traverses_tier1(const EnrichedPath& path, const LookupTables& tables);

FacilityBreakdown facility_breakdown(std::span<const ClassifiedPath> paths,
                                     const LookupTables& tables);

}  // namespace pathloc
