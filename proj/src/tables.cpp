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

#include "pathloc/tables.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "pathloc/csv.hpp"
#include "pathloc/errors.hpp"
#include "pathloc/geo.hpp"

namespace pathloc {

namespace {

struct TableSpec {
  TableKind kind;
  std::string_view name;
  std::vector<std::string_view> columns;  // empty for JSON tables
};

const std::vector<TableSpec>& specs() {
  static const std::vector<TableSpec> kSpecs = {
      {TableKind::kGeo, "geo", {"prefix", "cc", "lat", "lon"}},
      {TableKind::kPrefix2As, "prefix2as", {"prefix", "asn"}},
      {TableKind::kIxp, "ixp", {"prefix", "ixp_id", "cc"}},
      {TableKind::kAsAddresses, "as_addresses", {"asn", "count"}},
      {TableKind::kAsUsers, "as_users", {"asn", "count"}},
      {TableKind::kTier1, "tier1", {"asn"}},
      {TableKind::kContentAsns, "content_asns", {"asn"}},
      {TableKind::kCentroids, "centroids", {"cc", "lat", "lon"}},
      {TableKind::kRegions, "regions", {}},
  };
  return kSpecs;
}

const TableSpec& spec_of(TableKind kind) {
  for (const auto& s : specs()) {
    if (s.kind == kind) return s;
  }
  throw ConfigError("unknown table kind");
}

// Row-level parse context; every failure names file and line.
class RowReader {
 public:
  RowReader(const std::string& source, std::size_t line) : source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw LoadError(source_ + ":" + std::to_string(line_) + ": " + msg);
  }

  Prefix prefix(const std::string& text, const TableOptions& options) const {
    auto p = Prefix::parse(text);
    if (!p) fail("malformed CIDR prefix '" + text + "'");
    if (p->length == 0 && !options.allow_default_route)
      fail("default route '" + text + "' is not allowed");
    return *p;
  }

  Asn asn(const std::string& text) const {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() ||
        v > std::numeric_limits<Asn>::max()) {
      fail("malformed ASN '" + text + "'");
    }
    return static_cast<Asn>(v);
  }

  double number(const std::string& text, const char* what) const {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v))
      fail(std::string("malformed ") + what + " '" + text + "'");
    return v;
  }

  CountryCode country(const std::string& text) const {
    auto cc = CountryCode::parse(text);
    if (!cc) fail("malformed country code '" + text + "'");
    return *cc;
  }

  GeoPoint point(const std::string& lat_text, const std::string& lon_text) const {
    GeoPoint p{number(lat_text, "latitude"), number(lon_text, "longitude")};
    if (!geo::valid(p)) fail("coordinates out of range");
    return geo::normalized(p);
  }

 private:
  const std::string& source_;
  std::size_t line_;
};

void load_regions(std::istream& in, const std::string& source, LookupTables& tables) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw LoadError(source + ": expected a JSON object mapping country code to region");
  for (const auto& [key, value] : j.items()) {
    auto cc = CountryCode::parse(key);
    if (!cc) throw LoadError(source + ": malformed country code '" + key + "'");
    if (!value.is_string() || value.get_ref<const std::string&>().empty())
      throw LoadError(source + ": region for '" + key + "' must be a non-empty string");
    tables.region_map[*cc] = value.get<std::string>();
  }
}

template <typename Map, typename Key, typename Value>
void put(Map& map, const Key& key, Value value, const std::string& source, std::size_t line,
         const std::string& key_text, LookupTables& tables) {
  auto [it, inserted] = map.insert_or_assign(key, std::move(value));
  if (!inserted) {
    tables.warnings.push_back(source + ":" + std::to_string(line) + ": duplicate entry '" +
                              key_text + "', last one wins");
  }
}

template <typename T>
void put_prefix(PrefixMap<T>& map, const Prefix& p, T value, const std::string& source,
                std::size_t line, LookupTables& tables) {
  if (map.insert(p, std::move(value))) {
    tables.warnings.push_back(source + ":" + std::to_string(line) + ": duplicate prefix '" +
                              p.to_string() + "', last one wins");
  }
}

}  // namespace

std::set<std::string> LookupTables::region_names() const {
  std::set<std::string> out;
  for (const auto& [cc, region] : region_map) out.insert(region);
  return out;
}

std::string_view table_name(TableKind kind) { return spec_of(kind).name; }

std::optional<TableKind> parse_table_name(std::string_view name) {
  for (const auto& s : specs()) {
    if (s.name == name) return s.kind;
  }
  return std::nullopt;
}

bool is_mandatory(TableKind kind) {
  switch (kind) {
    case TableKind::kIxp:
    case TableKind::kTier1:
    case TableKind::kContentAsns:
      return false;
    default:
      return true;
  }
}

const std::set<Asn>& default_tier1() {
  static const std::set<Asn> kTier1 = {
      174,   // Cogent
      701,   // Verizon
      1239,  // Sprint
      1299,  // Arelion
      2828,  // XO
      2914,  // NTT
      3257,  // GTT
      3320,  // Deutsche Telekom
      3356,  // Lumen
      3491,  // PCCW
      5511,  // Orange
      6453,  // Tata
      6461,  // Zayo
      6762,  // Telecom Italia Sparkle
      6830,  // Liberty Global
      7018,  // AT&T
      12956, // Telxius
  };
  return kTier1;
}

void load_table(TableKind kind, std::istream& in, const std::string& source, LookupTables& tables,
                const TableOptions& options) {
  if (kind == TableKind::kRegions) {
    load_regions(in, source, tables);
    return;
  }

  const TableSpec& spec = spec_of(kind);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    auto fields = csv::split(line);
    RowReader row(source, line_no);
    if (!fields) row.fail("unterminated quoted field");

    if (!header_seen) {
      header_seen = true;
      bool ok = fields->size() == spec.columns.size();
      for (std::size_t i = 0; ok && i < fields->size(); ++i) ok = (*fields)[i] == spec.columns[i];
      if (!ok) {
        std::string expected;
        for (auto c : spec.columns) expected += (expected.empty() ? "" : ",") + std::string(c);
        row.fail("header must be '" + expected + "'");
      }
      continue;
    }
    if (fields->size() != spec.columns.size()) {
      row.fail("expected " + std::to_string(spec.columns.size()) + " fields, got " +
               std::to_string(fields->size()));
    }
    const auto& f = *fields;

    switch (kind) {
      case TableKind::kGeo:
        put_prefix(tables.geo, row.prefix(f[0], options), GeoEntry{row.country(f[1]), row.point(f[2], f[3])},
                   source, line_no, tables);
        break;
      case TableKind::kPrefix2As:
        put_prefix(tables.prefix2as, row.prefix(f[0], options), row.asn(f[1]), source, line_no,
                   tables);
        break;
      case TableKind::kIxp:
        if (f[1].empty()) row.fail("empty ixp_id");
        put_prefix(tables.ixp_lans, row.prefix(f[0], options), IxpEntry{f[1], row.country(f[2])},
                   source, line_no, tables);
        break;
      case TableKind::kAsAddresses:
      case TableKind::kAsUsers: {
        const double count = row.number(f[1], "count");
        if (count < 0) row.fail("count must be >= 0");
        auto& dims = kind == TableKind::kAsAddresses ? tables.as_dim_addresses : tables.as_dim_users;
        put(dims, row.asn(f[0]), count, source, line_no, f[0], tables);
        break;
      }
      case TableKind::kTier1:
        tables.tier1.insert(row.asn(f[0]));
        break;
      case TableKind::kContentAsns:
        tables.content_asns.insert(row.asn(f[0]));
        break;
      case TableKind::kCentroids:
        put(tables.centroids, row.country(f[0]), row.point(f[1], f[2]), source, line_no, f[0],
            tables);
        break;
      case TableKind::kRegions:
        break;
    }
  }
  if (in.bad()) throw IoError(source + ": read error");
  if (!header_seen) throw LoadError(source + ":1: missing header row");
}

LookupTables load_tables(const TablePaths& paths, const TableOptions& options) {
  LookupTables tables;
  bool tier1_loaded = false;
  for (const auto& spec : specs()) {
    auto it = paths.find(spec.kind);
    if (it == paths.end() || it->second.empty()) {
      if (is_mandatory(spec.kind))
        throw ConfigError("missing mandatory table '" + std::string(spec.name) + "'");
      continue;
    }
    std::ifstream in(it->second);
    if (!in) {
      throw ConfigError("table '" + std::string(spec.name) + "' cannot be opened: " +
                        it->second.string());
    }
    load_table(spec.kind, in, it->second.filename().string(), tables, options);
    if (spec.kind == TableKind::kTier1) tier1_loaded = true;
  }
  if (!tier1_loaded) tables.tier1 = default_tier1();
  return tables;
}

}  // namespace pathloc
