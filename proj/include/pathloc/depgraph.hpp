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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathloc/enrich.hpp"
#include "pathloc/tables.hpp"

namespace pathloc {

struct DepgraphThresholds {
  std::size_t min_pairs = 20;      // intra-country host pairs for a source country
  std::size_t min_edge_pairs = 2;  // host pairs showing the dependency
  double min_nl = 0.01;            // edges below this N^L^A are pruned

  bool operator==(const DepgraphThresholds&) const = default;
};

// Which transit countries may appear as edge targets.
struct DepgraphScope {
  enum class Kind {
    kInterRegion,   // target must be in a different region than the source
    kWithinRegion,  // source restricted to `region`, any target country
  };
  Kind kind = Kind::kInterRegion;
  std::string region;

  static DepgraphScope inter_region() { return {}; }
  static DepgraphScope within_region(std::string r) { return {Kind::kWithinRegion, std::move(r)}; }
  std::string label() const;

  bool operator==(const DepgraphScope&) const = default;
};

struct DepVertex {
  CountryCode cc;
  std::string region;  // empty when the country is not in the region map
  std::size_t pairs = 0;
  std::size_t in_degree = 0;

  bool operator==(const DepVertex&) const = default;
};

struct DepEdge {
  CountryCode src;
  CountryCode dst;
  double nl_a = 0.0;
  std::optional<double> nl_c;
  std::size_t pairs = 0;

  bool operator==(const DepEdge&) const = default;
};

// A (u, v) attribution that did not make it into the graph.
struct SubThresholdEdge {
  CountryCode src;
  CountryCode dst;
  std::optional<double> nl_a;
  std::size_t pairs = 0;
  std::string reason;
};

struct DependencyGraph {
  std::vector<DepVertex> vertices;  // sorted by country code
  std::vector<DepEdge> edges;       // sorted by (src, dst)
  DepgraphThresholds thresholds;
  DepgraphScope scope;
  std::vector<SubThresholdEdge> diagnostics;

  const DepVertex* vertex(const CountryCode& cc) const;
};

// Builds the country dependency graph from paths whose source and
// destination share a country. A source country needs `min_pairs` distinct
// host pairs; an edge u->v needs `min_edge_pairs` distinct non-local host
// pairs through v and a per-country non-locality of at least `min_nl`,
// computed with country u as the area. Countries left without edges are
// dropped.
DependencyGraph build_dependency_graph(std::span<const EnrichedPath> paths,
                                       const LookupTables& tables, const DepgraphScope& scope,
                                       const DepgraphThresholds& thresholds = {});

// "dot" or "json"; anything else throws ConfigError. Output is
// deterministic. `include_nl_c` adds the end-user weighted label to edges.
std::string export_graph(const DependencyGraph& g, std::string_view format,
                         bool include_nl_c = false);

// Inverse of export_graph(g, "json"). Throws ConfigError on bad input.
DependencyGraph parse_graph_json(std::string_view text);

// One row per sub-threshold attribution: src,dst,nl_a,pairs,reason.
std::string export_graph_diagnostics(const DependencyGraph& g);

}  // namespace pathloc
