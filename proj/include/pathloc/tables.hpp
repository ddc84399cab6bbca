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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pathloc/prefix_map.hpp"
#include "pathloc/types.hpp"

namespace pathloc {

struct GeoEntry {
  CountryCode country;
  GeoPoint point;
};

struct IxpEntry {
  std::string id;
  CountryCode country;
};

// Announced address count or end-user estimate per AS.
using AsDimensions = std::map<Asn, double>;

// Every auxiliary dataset the pipeline consults. Built once by load_tables()
// and shared read-only afterwards.
struct LookupTables {
  PrefixMap<GeoEntry> geo;
  PrefixMap<Asn> prefix2as;
  PrefixMap<IxpEntry> ixp_lans;
  AsDimensions as_dim_addresses;
  AsDimensions as_dim_users;
  std::map<CountryCode, std::string> region_map;
  std::map<CountryCode, GeoPoint> centroids;
  std::set<Asn> tier1;
  std::set<Asn> content_asns;

  // Non-fatal load diagnostics, e.g. duplicate prefixes.
  std::vector<std::string> warnings;

  const std::string* region_of(const CountryCode& cc) const {
    auto it = region_map.find(cc);
    return it == region_map.end() ? nullptr : &it->second;
  }
  std::set<std::string> region_names() const;
};

enum class TableKind {
  kGeo,
  kPrefix2As,
  kIxp,
  kAsAddresses,
  kAsUsers,
  kTier1,
  kContentAsns,
  kCentroids,
  kRegions,
};

std::string_view table_name(TableKind kind);
std::optional<TableKind> parse_table_name(std::string_view name);

struct TableOptions {
  // A /0 row is rejected unless this is set.
  bool allow_default_route = false;
};

// Reads one table from `in`, adding to `tables`. `source` names the input in
// error messages ("geo.csv:12: ..."). Throws LoadError on malformed rows.
void load_table(TableKind kind, std::istream& in, const std::string& source,
                LookupTables& tables, const TableOptions& options = {});

// File locations keyed by table. Geo, prefix2as, AS dimensions, centroids
// and regions are mandatory. Missing optional tables stay empty, except
// tier1 which falls back to default_tier1().
using TablePaths = std::map<TableKind, std::filesystem::path>;

LookupTables load_tables(const TablePaths& paths, const TableOptions& options = {});

bool is_mandatory(TableKind kind);

// The conventional set of settlement-free transit networks.
const std::set<Asn>& default_tier1();

}  // namespace pathloc
