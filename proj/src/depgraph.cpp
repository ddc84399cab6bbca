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

#include "pathloc/depgraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pathloc/csv.hpp"
#include "pathloc/errors.hpp"
#include "pathloc/locality.hpp"

namespace pathloc {

namespace {

using HostPair = std::pair<IpAddress, IpAddress>;

// Colour-blind friendly qualitative palette, cycled by region rank.
constexpr const char* kPalette[] = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
};

std::string region_or_empty(const LookupTables& tables, const CountryCode& cc) {
  const std::string* r = tables.region_of(cc);
  return r ? *r : std::string();
}

bool target_in_scope(const DepgraphScope& scope, const LookupTables& tables, const CountryCode& u,
                     const CountryCode& v) {
  if (scope.kind == DepgraphScope::Kind::kWithinRegion) return true;
  const std::string* ru = tables.region_of(u);
  const std::string* rv = tables.region_of(v);
  return !ru || !rv || *ru != *rv;
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string DepgraphScope::label() const {
  return kind == Kind::kInterRegion ? "inter-region" : "intra-region";
}

const DepVertex* DependencyGraph::vertex(const CountryCode& cc) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), cc,
                             [](const DepVertex& v, const CountryCode& c) { return v.cc < c; });
  return it != vertices.end() && it->cc == cc ? &*it : nullptr;
}

DependencyGraph build_dependency_graph(std::span<const EnrichedPath> paths,
                                       const LookupTables& tables, const DepgraphScope& scope,
                                       const DepgraphThresholds& thresholds) {
  DependencyGraph g;
  g.thresholds = thresholds;
  g.scope = scope;

  std::map<CountryCode, std::vector<const EnrichedPath*>> by_country;
  std::map<CountryCode, std::set<HostPair>> host_pairs;
  for (const auto& p : paths) {
    if (p.src_country != p.dst_country) continue;
    by_country[p.src_country].push_back(&p);
    host_pairs[p.src_country].insert({p.source_ip, p.destination_ip});
  }

  std::vector<DepEdge> edges;
  for (const auto& [u, members] : by_country) {
    if (host_pairs[u].size() < thresholds.min_pairs) continue;
    if (scope.kind == DepgraphScope::Kind::kWithinRegion &&
        region_or_empty(tables, u) != scope.region) {
      continue;
    }

    const Area area = Area::country(u);
    std::vector<ClassifiedPath> classified;
    classified.reserve(members.size());
    for (const EnrichedPath* p : members) {
      classified.push_back({*p, classify(*p, area, tables)});
    }
    const PairStats stats = pair_stats(classified, area.name, tables);
    const RegionLocality rl = region_locality(stats, classified, area.name);

    std::map<CountryCode, std::set<HostPair>> through;
    for (const auto& cp : classified) {
      if (cp.verdict.is_local) continue;
      for (const auto& v : cp.verdict.countries_traversed) {
        through[v].insert({cp.path.source_ip, cp.path.destination_ip});
      }
    }

    for (const auto& [v, metric] : rl.per_country_nonlocal) {
      if (metric.paths == 0 || v == u || !target_in_scope(scope, tables, u, v)) continue;
      const std::size_t support = through[v].size();
      SubThresholdEdge rejected{u, v, metric.a, support, {}};
      if (support < thresholds.min_edge_pairs) {
        rejected.reason = "min_edge_pairs";
      } else if (!metric.a) {
        rejected.reason = "no_weight";
      } else if (*metric.a < thresholds.min_nl) {
        rejected.reason = "min_nl";
      } else {
        edges.push_back({u, v, *metric.a, metric.c, support});
        continue;
      }
      g.diagnostics.push_back(std::move(rejected));
    }
  }

  std::set<CountryCode> endpoints;
  std::map<CountryCode, std::size_t> in_degree;
  for (const auto& e : edges) {
    endpoints.insert(e.src);
    endpoints.insert(e.dst);
    ++in_degree[e.dst];
  }
  for (const auto& cc : endpoints) {
    auto hp = host_pairs.find(cc);
    g.vertices.push_back({cc, region_or_empty(tables, cc),
                          hp == host_pairs.end() ? 0 : hp->second.size(), in_degree[cc]});
  }
  std::sort(edges.begin(), edges.end(), [](const DepEdge& a, const DepEdge& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  g.edges = std::move(edges);
  return g;
}

std::string export_graph(const DependencyGraph& g, std::string_view format, bool include_nl_c) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["vertices"] = nlohmann::ordered_json::array();
    for (const auto& v : g.vertices) {
      j["vertices"].push_back(
          {{"cc", v.cc.str()}, {"region", v.region}, {"pairs", v.pairs}, {"in_degree", v.in_degree}});
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges) {
      nlohmann::ordered_json je = {
          {"src", e.src.str()}, {"dst", e.dst.str()}, {"nl_a", e.nl_a}, {"pairs", e.pairs}};
      if (include_nl_c) je["nl_c"] = e.nl_c ? nlohmann::ordered_json(*e.nl_c) : nullptr;
      j["edges"].push_back(std::move(je));
    }
    j["thresholds"] = {{"min_pairs", g.thresholds.min_pairs},
                       {"min_edge_pairs", g.thresholds.min_edge_pairs},
                       {"min_nl", g.thresholds.min_nl}};
    j["scope"] = {{"kind", g.scope.label()}, {"region", g.scope.region}};
    return j.dump(2) + "\n";
  }
  if (format != "dot") {
    throw ConfigError("unknown graph format '" + std::string(format) + "' (expected dot or json)");
  }

  std::set<std::string> regions;
  for (const auto& v : g.vertices) regions.insert(v.region);
  std::map<std::string, const char*> colour;
  std::size_t rank = 0;
  for (const auto& r : regions) colour[r] = kPalette[rank++ % std::size(kPalette)];

  std::ostringstream out;
  out << "digraph dependencies {\n";
  out << "  node [shape=circle, style=filled, fixedsize=true];\n";
  for (const auto& v : g.vertices) {
    // Node width is proportional to in-degree, with a floor for pure sources.
    const double width = std::max(0.3, 0.3 * static_cast<double>(v.in_degree));
    out << "  " << quoted(v.cc.str()) << " [region=" << quoted(v.region)
        << ", fillcolor=" << quoted(colour[v.region]) << ", in_degree=" << v.in_degree
        << ", width=" << csv::fixed(width, 3) << "];\n";
  }
  for (const auto& e : g.edges) {
    out << "  " << quoted(e.src.str()) << " -> " << quoted(e.dst.str())
        << " [label=" << quoted(csv::fixed(e.nl_a, 3));
    if (include_nl_c) {
      out << ", nl_c=" << quoted(e.nl_c ? csv::fixed(*e.nl_c, 3) : std::string("NA"));
    }
    out << ", pairs=" << e.pairs << "];\n";
  }
  out << "}\n";
  return out.str();
}

DependencyGraph parse_graph_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("dependency graph JSON is malformed");
  auto cc = [](const nlohmann::json& v) {
    auto c = CountryCode::parse(v.get<std::string>());
    if (!c) throw ConfigError("bad country code in dependency graph JSON");
    return *c;
  };
  DependencyGraph g;
  try {
    for (const auto& v : j.at("vertices")) {
      g.vertices.push_back({cc(v.at("cc")), v.at("region").get<std::string>(),
                            v.at("pairs").get<std::size_t>(), v.at("in_degree").get<std::size_t>()});
    }
    for (const auto& e : j.at("edges")) {
      DepEdge edge{cc(e.at("src")), cc(e.at("dst")), e.at("nl_a").get<double>(), std::nullopt,
                   e.at("pairs").get<std::size_t>()};
      if (auto it = e.find("nl_c"); it != e.end() && !it->is_null()) edge.nl_c = it->get<double>();
      g.edges.push_back(edge);
    }
    const auto& t = j.at("thresholds");
    g.thresholds = {t.at("min_pairs").get<std::size_t>(), t.at("min_edge_pairs").get<std::size_t>(),
                    t.at("min_nl").get<double>()};
    if (auto s = j.find("scope"); s != j.end()) {
      const auto kind = s->at("kind").get<std::string>();
      g.scope.kind = kind == "intra-region" ? DepgraphScope::Kind::kWithinRegion
                                            : DepgraphScope::Kind::kInterRegion;
      g.scope.region = s->at("region").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("dependency graph JSON: ") + e.what());
  }
  return g;
}

std::string export_graph_diagnostics(const DependencyGraph& g) {
  std::ostringstream out;
  csv::write_row(out, {"src", "dst", "nl_a", "pairs", "reason"});
  for (const auto& d : g.diagnostics) {
    csv::write_row(out, {d.src.str(), d.dst.str(), d.nl_a ? csv::fixed(*d.nl_a, 6) : "",
                         std::to_string(d.pairs), d.reason});
  }
  return out.str();
}

}  // namespace pathloc
