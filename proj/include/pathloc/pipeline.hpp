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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pathloc/depgraph.hpp"
#include "pathloc/errors.hpp"
#include "pathloc/ip.hpp"
#include "pathloc/stability.hpp"
#include "pathloc/tables.hpp"

namespace pathloc {

inline constexpr const char* kReportFormat = "pathloc-report/1";

struct StabilityConfig {
  bool enabled = true;
  StabilityParams params;
};

struct DepgraphConfig {
  DepgraphScope scope;
  DepgraphThresholds thresholds;
  bool include_nl_c = false;
};

struct PipelineConfig {
  // Paths as written in the config file, and their resolved locations.
  std::map<Family, std::vector<std::string>> inputs;
  std::string input_format = "jsonl";
  std::map<TableKind, std::string> tables;
  std::filesystem::path base_dir;  // relative paths resolve against this

  std::vector<std::string> regions;  // empty: every region in the region map
  std::optional<Family> family;      // restrict to one family
  bool content_targets = false;
  DepgraphConfig depgraph;
  StabilityConfig stability;
  std::filesystem::path output_dir = "out";
  int precision = 3;
  bool lenient = false;
  bool allow_default_route = false;

  std::filesystem::path resolve(const std::string& p) const;
};

// Parses the JSON config. Throws ConfigError on schema violations.
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& file);

// Checks that referenced files exist. Region names are checked once the
// region map is loaded.
void validate_config(const PipelineConfig& config);

enum class Stage { kLocality, kCharacterize, kDepgraph, kStability };

inline const std::set<Stage>& all_stages() {
  static const std::set<Stage> kAll = {Stage::kLocality, Stage::kCharacterize, Stage::kDepgraph,
                                       Stage::kStability};
  return kAll;
}

// An error tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  enum class Kind { kConfig, kIo, kDataQuality, kOther };
  StageError(std::string stage, Kind kind, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)), kind_(kind) {}
  const std::string& stage() const { return stage_; }
  Kind kind() const { return kind_; }

 private:
  std::string stage_;
  Kind kind_;
};

// File name to content; names are relative to the output directory.
using ReportBundle = std::map<std::string, std::string>;

// Executes ingest, enrichment, classification and the requested report
// stages. Output is byte-identical for identical inputs, config and seed.
// Throws StageError.
ReportBundle run_pipeline(const PipelineConfig& config,
                          const std::set<Stage>& stages = all_stages());

void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir);

// Atlas traceroute results (one JSON object or array per line) to the
// native JSON Lines schema. `probes` optionally maps probe id to (asn, cc).
struct AtlasProbeInfo {
  std::optional<Asn> asn;
  std::optional<CountryCode> country;
};

struct ConvertReport {
  std::size_t converted = 0;
  std::size_t skipped = 0;
  std::vector<std::string> diagnostics;  // first few skip reasons
};

ConvertReport convert_atlas(std::istream& in, std::ostream& out,
                            const std::map<std::int64_t, AtlasProbeInfo>& probes = {});

// probe_id,asn,cc CSV (asn and cc may be empty).
std::map<std::int64_t, AtlasProbeInfo> load_probe_metadata(std::istream& in,
                                                           const std::string& source);

// File-name safe form of a region name ("Middle East" -> "Middle_East").
std::string region_slug(const std::string& region);

}  // namespace pathloc
