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

#include "pathloc/pipeline.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include "json.hpp"
#include "pathloc/aggregate.hpp"
#include "pathloc/csv.hpp"
#include "pathloc/enrich.hpp"
#include "pathloc/ingest.hpp"
#include "pathloc/locality.hpp"

namespace pathloc {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxDiagnostics = 10;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + p.string());
  return ss.str();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::string opt_fixed(const std::optional<double>& v, int decimals) {
  return v ? csv::fixed(*v, decimals) : std::string();
}

ojson opt_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

// Runs `fn`, re-throwing library errors as StageError tagged with `stage`.
template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ConfigError& e) {
    throw StageError(stage, StageError::Kind::kConfig, e.what());
  } catch (const IoError& e) {
    throw StageError(stage, StageError::Kind::kIo, e.what());
  } catch (const DataQualityError& e) {
    std::string msg = e.what();
    for (const auto& s : e.samples()) msg += "\n  " + s;
    throw StageError(stage, StageError::Kind::kDataQuality, msg);
  } catch (const LoadError& e) {
    throw StageError(stage, StageError::Kind::kDataQuality, e.what());
  } catch (const Error& e) {
    throw StageError(stage, StageError::Kind::kOther, e.what());
  }
}

template <typename T>
T get_or(const nlohmann::json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->get<T>();
}

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

ojson config_echo(const PipelineConfig& c) {
  ojson j;
  ojson inputs = ojson::object();
  for (const auto& [family, files] : c.inputs) inputs[std::string(to_string(family))] = files;
  j["inputs"] = inputs;
  j["input_format"] = c.input_format;
  ojson tables = ojson::object();
  for (const auto& [kind, path] : c.tables) tables[std::string(table_name(kind))] = path;
  j["tables"] = tables;
  j["regions"] = c.regions;
  j["family"] = c.family ? ojson(std::string(to_string(*c.family))) : ojson(nullptr);
  j["content_targets"] = c.content_targets;
  j["depgraph"] = {{"scope", c.depgraph.scope.label()},
                   {"region", c.depgraph.scope.region},
                   {"min_pairs", c.depgraph.thresholds.min_pairs},
                   {"min_edge_pairs", c.depgraph.thresholds.min_edge_pairs},
                   {"min_nl", c.depgraph.thresholds.min_nl},
                   {"include_nl_c", c.depgraph.include_nl_c}};
  j["stability"] = {{"enabled", c.stability.enabled},
                    {"cardinalities", c.stability.params.cardinalities},
                    {"repetitions", c.stability.params.repetitions},
                    {"seed", c.stability.params.seed},
                    {"threads", c.stability.params.threads}};
  j["output_dir"] = c.output_dir.generic_string();
  j["precision"] = c.precision;
  j["lenient"] = c.lenient;
  j["allow_default_route"] = c.allow_default_route;
  return j;
}

struct FamilyCounts {
  std::size_t lines = 0;
  std::size_t parsed = 0;
  std::size_t malformed = 0;
  std::size_t dropped_unreached = 0;
  std::size_t dropped_self = 0;
  std::size_t successful = 0;
  std::size_t deduplicated = 0;
  std::map<RejectReason, std::size_t> rejected;
  std::size_t enriched = 0;
  std::optional<std::size_t> content_targets;
  std::size_t classified = 0;
  std::size_t cross_region = 0;
  std::size_t unmapped_region = 0;
  std::size_t other_region = 0;
  std::size_t hops_with_ip = 0;
  std::size_t hops_located = 0;
  std::size_t speed_reverted = 0;
  std::size_t ixp_conflicts = 0;

  ojson to_json() const {
    ojson rej = ojson::object();
    for (RejectReason r :
         {RejectReason::kNotSuccessful, RejectReason::kUnknownSourceCountry,
          RejectReason::kUnknownDestinationCountry, RejectReason::kUnknownSourceAsn,
          RejectReason::kUnknownDestinationAsn}) {
      auto it = rejected.find(r);
      rej[std::string(to_string(r))] = it == rejected.end() ? 0 : it->second;
    }
    ojson j;
    j["lines"] = lines;
    j["parsed"] = parsed;
    j["malformed"] = malformed;
    j["dropped_unreached"] = dropped_unreached;
    j["dropped_self"] = dropped_self;
    j["successful"] = successful;
    j["deduplicated"] = deduplicated;
    j["rejected"] = rej;
    j["enriched"] = enriched;
    j["content_targets"] = content_targets ? ojson(*content_targets) : ojson(nullptr);
    j["classified"] = classified;
    j["cross_region"] = cross_region;
    j["unmapped_region"] = unmapped_region;
    j["other_region"] = other_region;
    j["geolocated_hop_fraction"] =
        hops_with_ip == 0 ? ojson(nullptr)
                          : ojson(static_cast<double>(hops_located) /
                                  static_cast<double>(hops_with_ip));
    j["speed_reverted_hops"] = speed_reverted;
    j["ixp_country_conflicts"] = ixp_conflicts;
    return j;
  }
};

struct RegionFamilyKey {
  std::string region;
  Family family;
  auto operator<=>(const RegionFamilyKey&) const = default;
};

std::string locality_csv(const std::map<RegionFamilyKey, RegionLocality>& results, int prec) {
  std::ostringstream out;
  csv::write_row(out, {"region", "family", "scope", "country", "paths", "local_paths",
                       "nonlocal_paths", "l_hat_a", "l_hat_c", "nl_hat_a", "nl_hat_c"});
  for (const auto& [key, rl] : results) {
    const std::string fam(to_string(key.family));
    csv::write_row(out, {key.region, fam, "region", "", std::to_string(rl.paths_total),
                         std::to_string(rl.paths_local),
                         std::to_string(rl.paths_total - rl.paths_local),
                         opt_fixed(rl.l_hat_a, prec), opt_fixed(rl.l_hat_c, prec),
                         opt_fixed(rl.nl_hat_a, prec), opt_fixed(rl.nl_hat_c, prec)});
    for (const auto& [cc, local] : rl.per_country_local) {
      const CountryMetric& nonlocal = rl.per_country_nonlocal.at(cc);
      csv::write_row(out, {key.region, fam, "country", cc.str(),
                           std::to_string(local.paths + nonlocal.paths),
                           std::to_string(local.paths), std::to_string(nonlocal.paths),
                           opt_fixed(local.a, prec), opt_fixed(local.c, prec),
                           opt_fixed(nonlocal.a, prec), opt_fixed(nonlocal.c, prec)});
    }
  }
  return out.str();
}

std::string locality_json(const std::map<RegionFamilyKey, RegionLocality>& results,
                          const std::map<RegionFamilyKey, PairStats>& stats) {
  ojson regions = ojson::array();
  for (const auto& [key, rl] : results) {
    ojson j;
    j["region"] = key.region;
    j["family"] = std::string(to_string(key.family));
    j["paths_total"] = rl.paths_total;
    j["paths_local"] = rl.paths_local;
    j["l_hat_a"] = opt_json(rl.l_hat_a);
    j["l_hat_c"] = opt_json(rl.l_hat_c);
    j["nl_hat_a"] = opt_json(rl.nl_hat_a);
    j["nl_hat_c"] = opt_json(rl.nl_hat_c);
    j["excluded_pairs_a"] = rl.excluded_pairs_a;
    j["excluded_pairs_c"] = rl.excluded_pairs_c;
    ojson countries = ojson::array();
    for (const auto& [cc, local] : rl.per_country_local) {
      const CountryMetric& nonlocal = rl.per_country_nonlocal.at(cc);
      countries.push_back({{"cc", cc.str()},
                           {"local_paths", local.paths},
                           {"nonlocal_paths", nonlocal.paths},
                           {"l_hat_a", opt_json(local.a)},
                           {"l_hat_c", opt_json(local.c)},
                           {"nl_hat_a", opt_json(nonlocal.a)},
                           {"nl_hat_c", opt_json(nonlocal.c)}});
    }
    j["countries"] = countries;
    ojson pairs = ojson::array();
    for (const auto& p : stats.at(key).pairs) {
      pairs.push_back({{"src_asn", p.src_asn},
                       {"dst_asn", p.dst_asn},
                       {"total", p.total},
                       {"local", p.local},
                       {"weight_a", opt_json(p.weight_a)},
                       {"weight_c", opt_json(p.weight_c)}});
    }
    j["pairs"] = pairs;
    regions.push_back(std::move(j));
  }
  ojson root;
  root["regions"] = regions;
  return root.dump(2) + "\n";
}

void means_row(std::ostream& out, const RegionFamilyKey& key, const char* cls, const PathMeans& m,
               int prec) {
  csv::write_row(out, {key.region, std::string(to_string(key.family)), cls,
                       std::to_string(m.paths), opt_fixed(m.ip_length, prec),
                       opt_fixed(m.as_length, prec), opt_fixed(m.rtt_ms, prec),
                       opt_fixed(m.km, prec)});
}

void facility_row(std::ostream& out, const RegionFamilyKey& key, const char* cls,
                  const FacilityCounts& f, int prec) {
  auto pct = [&](std::size_t part) {
    return csv::fixed(FacilityCounts::percent(part, f.total), prec);
  };
  csv::write_row(out, {key.region, std::string(to_string(key.family)), cls,
                       std::to_string(f.total), std::to_string(f.via_ixp), pct(f.via_ixp),
                       std::to_string(f.via_tier1), pct(f.via_tier1),
                       std::to_string(f.via_other), pct(f.via_other)});
}

std::string stability_summary_csv(const std::vector<StabilityRun>& runs) {
  std::ostringstream out;
  csv::write_row(out, {"region", "available", "cardinality", "repetitions", "defined", "mean",
                       "min", "max", "full_value", "truncated"});
  for (const auto& run : runs) {
    for (const auto& [k, values] : run.results) {
      std::size_t defined = 0;
      double sum = 0.0;
      double lo = 0.0;
      double hi = 0.0;
      for (const auto& v : values) {
        if (!v) continue;
        if (defined == 0 || *v < lo) lo = *v;
        if (defined == 0 || *v > hi) hi = *v;
        sum += *v;
        ++defined;
      }
      const bool any = defined > 0;
      csv::write_row(
          out, {run.region, std::to_string(run.available), std::to_string(k),
                std::to_string(run.repetitions), std::to_string(defined),
                any ? csv::fixed(sum / static_cast<double>(defined), 9) : "",
                any ? csv::fixed(lo, 9) : "", any ? csv::fixed(hi, 9) : "",
                opt_fixed(run.full_value, 9), run.truncated ? "true" : "false"});
    }
  }
  return out.str();
}

}  // namespace

fs::path PipelineConfig::resolve(const std::string& p) const {
  fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

std::string region_slug(const std::string& region) {
  std::string out;
  for (char c : region) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '.';
    out.push_back(keep ? c : '_');
  }
  return out;
}

PipelineConfig parse_config(const std::string& text, const fs::path& base_dir) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("config is not a JSON object");

  PipelineConfig c;
  c.base_dir = base_dir;
  try {
    reject_unknown_keys(j,
                        {"inputs", "input_format", "tables", "regions", "family",
                         "content_targets", "depgraph", "stability", "output_dir", "precision",
                         "lenient", "allow_default_route"},
                        "config");

    if (auto in = j.find("inputs"); in != j.end()) {
      for (const auto& [fam, files] : in->items()) {
        auto family = parse_family(fam);
        if (!family) throw ConfigError("unknown address family '" + fam + "' in inputs");
        c.inputs[*family] = files.get<std::vector<std::string>>();
      }
    }
    c.input_format = get_or<std::string>(j, "input_format", c.input_format);
    if (auto t = j.find("tables"); t != j.end()) {
      for (const auto& [name, path] : t->items()) {
        auto kind = parse_table_name(name);
        if (!kind) throw ConfigError("unknown table '" + name + "'");
        c.tables[*kind] = path.get<std::string>();
      }
    }
    c.regions = get_or<std::vector<std::string>>(j, "regions", {});
    if (auto f = j.find("family"); f != j.end() && !f->is_null()) {
      c.family = parse_family(f->get<std::string>());
      if (!c.family) throw ConfigError("family must be v4 or v6");
    }
    c.content_targets = get_or<bool>(j, "content_targets", false);

    if (auto d = j.find("depgraph"); d != j.end()) {
      reject_unknown_keys(*d,
                          {"scope", "region", "min_pairs", "min_edge_pairs", "min_nl",
                           "include_nl_c"},
                          "depgraph");
      const auto scope = get_or<std::string>(*d, "scope", "inter-region");
      if (scope == "inter-region") {
        c.depgraph.scope = DepgraphScope::inter_region();
      } else if (scope == "intra-region") {
        const auto region = get_or<std::string>(*d, "region", "");
        if (region.empty()) throw ConfigError("intra-region depgraph scope needs a region");
        c.depgraph.scope = DepgraphScope::within_region(region);
      } else {
        throw ConfigError("depgraph scope must be inter-region or intra-region");
      }
      auto& t = c.depgraph.thresholds;
      t.min_pairs = get_or<std::size_t>(*d, "min_pairs", t.min_pairs);
      t.min_edge_pairs = get_or<std::size_t>(*d, "min_edge_pairs", t.min_edge_pairs);
      t.min_nl = get_or<double>(*d, "min_nl", t.min_nl);
      c.depgraph.include_nl_c = get_or<bool>(*d, "include_nl_c", false);
    }

    if (auto s = j.find("stability"); s != j.end()) {
      reject_unknown_keys(*s, {"enabled", "cardinalities", "repetitions", "seed", "threads"},
                          "stability");
      auto& p = c.stability.params;
      c.stability.enabled = get_or<bool>(*s, "enabled", true);
      p.cardinalities = get_or<std::vector<std::size_t>>(*s, "cardinalities", p.cardinalities);
      p.repetitions = get_or<int>(*s, "repetitions", p.repetitions);
      p.seed = get_or<std::uint64_t>(*s, "seed", p.seed);
      p.threads = get_or<unsigned>(*s, "threads", p.threads);
      if (p.repetitions <= 0) throw ConfigError("stability repetitions must be positive");
    }

    c.output_dir = get_or<std::string>(j, "output_dir", "out");
    c.precision = get_or<int>(j, "precision", 3);
    if (c.precision < 0 || c.precision > 17) throw ConfigError("precision must be in [0, 17]");
    c.lenient = get_or<bool>(j, "lenient", false);
    c.allow_default_route = get_or<bool>(j, "allow_default_route", false);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const fs::path& file) {
  PipelineConfig c = parse_config(read_file(file), file.parent_path());
  if (c.output_dir.is_relative()) c.output_dir = c.base_dir / c.output_dir;
  return c;
}

void validate_config(const PipelineConfig& config) {
  if (config.input_format != "jsonl") {
    throw ConfigError("unknown input format '" + config.input_format + "' (expected jsonl)");
  }
  for (TableKind kind :
       {TableKind::kGeo, TableKind::kPrefix2As, TableKind::kIxp, TableKind::kAsAddresses,
        TableKind::kAsUsers, TableKind::kTier1, TableKind::kContentAsns, TableKind::kCentroids,
        TableKind::kRegions}) {
    auto it = config.tables.find(kind);
    if (it == config.tables.end()) {
      if (is_mandatory(kind)) {
        throw ConfigError("missing mandatory table '" + std::string(table_name(kind)) + "'");
      }
      continue;
    }
    const fs::path p = config.resolve(it->second);
    if (!fs::is_regular_file(p)) {
      throw ConfigError("table '" + std::string(table_name(kind)) + "' not found: " + p.string());
    }
  }
  if (config.content_targets && !config.tables.count(TableKind::kContentAsns)) {
    throw ConfigError("content-target mode needs the 'content_asns' table");
  }
  std::size_t files = 0;
  for (const auto& [family, list] : config.inputs) {
    if (config.family && *config.family != family) continue;
    for (const auto& f : list) {
      const fs::path p = config.resolve(f);
      if (!fs::is_regular_file(p)) throw ConfigError("input not found: " + p.string());
      ++files;
    }
  }
  if (files == 0) throw ConfigError("no traceroute inputs for the selected family");
}

ReportBundle run_pipeline(const PipelineConfig& config, const std::set<Stage>& stages) {
  in_stage("config", [&] { validate_config(config); });
  const int prec = config.precision;

  // Tables.
  ojson table_digests = ojson::object();
  const LookupTables tables = in_stage("tables", [&] {
    TablePaths paths;
    for (const auto& [kind, p] : config.tables) {
      paths[kind] = config.resolve(p);
      table_digests[std::string(table_name(kind))] = {
          {"path", p}, {"fnv1a64", hex64(fnv1a64(read_file(paths[kind])))}};
    }
    return load_tables(paths, TableOptions{config.allow_default_route});
  });

  std::vector<std::string> regions = config.regions;
  in_stage("config", [&] {
    const auto known = tables.region_names();
    if (regions.empty()) regions.assign(known.begin(), known.end());
    for (const auto& r : regions) {
      if (!known.count(r)) throw ConfigError("region '" + r + "' is not in the region map");
    }
    if (config.depgraph.scope.kind == DepgraphScope::Kind::kWithinRegion &&
        !known.count(config.depgraph.scope.region)) {
      throw ConfigError("depgraph region '" + config.depgraph.scope.region +
                        "' is not in the region map");
    }
  });
  std::sort(regions.begin(), regions.end());
  regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
  const std::set<std::string> region_set(regions.begin(), regions.end());

  // Ingest and enrichment, per family.
  ojson input_digests = ojson::array();
  std::map<Family, FamilyCounts> counts;
  std::vector<EnrichedPath> enriched;
  std::size_t total_parsed = 0;
  for (const auto& [family, files] : config.inputs) {
    if (config.family && *config.family != family) continue;
    FamilyCounts& fc = counts[family];
    MeasurementSet merged{family, {}};
    in_stage("ingest", [&] {
      for (const auto& f : files) {
        const std::string bytes = read_file(config.resolve(f));
        input_digests.push_back({{"path", f},
                                 {"family", std::string(to_string(family))},
                                 {"fnv1a64", hex64(fnv1a64(bytes))}});
        std::istringstream in(bytes);
        ParseReport report = parse_traceroutes(in, config.input_format, family, config.lenient);
        fc.lines += report.lines;
        fc.malformed += report.malformed_count;
        for (auto& r : report.set.records) merged.records.push_back(std::move(r));
      }
    });
    fc.parsed = merged.records.size();
    total_parsed += fc.parsed;

    const FilterReport filtered = filter_successful(merged);
    fc.dropped_unreached = filtered.dropped_unreached;
    fc.dropped_self = filtered.dropped_self;
    fc.successful = filtered.set.records.size();
    const MeasurementSet unique = dedup_min_rtt(filtered.set);
    fc.deduplicated = unique.records.size();

    in_stage("enrich", [&] {
      std::vector<EnrichedPath> paths;
      for (const auto& raw : unique.records) {
        AnnotateResult r = annotate(raw, tables);
        if (auto* rej = std::get_if<Rejection>(&r)) {
          ++fc.rejected[rej->reason];
          continue;
        }
        paths.push_back(speed_filter(std::get<EnrichedPath>(std::move(r))));
      }
      fc.enriched = paths.size();
      if (config.content_targets) {
        paths = filter_content_targets(paths, tables);
        fc.content_targets = paths.size();
      }
      for (auto& p : paths) {
        for (const auto& h : p.hops) {
          if (!h.ip) continue;
          ++fc.hops_with_ip;
          if (h.located()) ++fc.hops_located;
        }
        for (const auto& h : p.hops) {
          if (h.speed_reverted) ++fc.speed_reverted;
          if (h.ixp_country_conflict) ++fc.ixp_conflicts;
        }
        enriched.push_back(std::move(p));
      }
    });
  }
  if (total_parsed == 0 && !config.lenient) {
    throw StageError("ingest", StageError::Kind::kDataQuality,
                     "no traceroutes in the inputs (use --lenient to accept empty input)");
  }

  // Classification: paths whose endpoints share an analysed region.
  std::map<RegionFamilyKey, std::vector<ClassifiedPath>> classified;
  std::map<std::string, std::vector<ClassifiedPath>> by_region;
  in_stage("locality", [&] {
    for (const auto& p : enriched) {
      FamilyCounts& fc = counts[p.family];
      const std::string* rs = tables.region_of(p.src_country);
      const std::string* rd = tables.region_of(p.dst_country);
      if (!rs || !rd) {
        ++fc.unmapped_region;
      } else if (*rs != *rd) {
        ++fc.cross_region;
      } else if (!region_set.count(*rs)) {
        ++fc.other_region;
      } else {
        ClassifiedPath cp{p, classify(p, *rs, tables)};
        by_region[*rs].push_back(cp);
        classified[{*rs, p.family}].push_back(std::move(cp));
        ++fc.classified;
      }
    }
  });

  ReportBundle bundle;

  if (stages.count(Stage::kLocality)) {
    in_stage("locality", [&] {
      std::map<RegionFamilyKey, RegionLocality> results;
      std::map<RegionFamilyKey, PairStats> stats;
      for (const auto& [key, paths] : classified) {
        PairStats s = pair_stats(paths, key.region, tables);
        results[key] = region_locality(s, paths, key.region);
        stats[key] = std::move(s);
      }
      bundle["locality.csv"] = locality_csv(results, prec);
      bundle["locality.json"] = locality_json(results, stats);
    });
  }

  if (stages.count(Stage::kCharacterize)) {
    in_stage("characterize", [&] {
      std::ostringstream chars;
      std::ostringstream props;
      std::ostringstream facs;
      csv::write_row(chars, {"region", "family", "traceroutes", "addresses", "networks", "ases"});
      csv::write_row(props, {"region", "family", "class", "paths", "ip_length", "as_length",
                             "rtt_ms", "km"});
      csv::write_row(facs, {"region", "family", "class", "paths", "via_ixp", "via_ixp_pct",
                            "via_tier1", "via_tier1_pct", "via_other", "via_other_pct"});
      for (const auto& [key, paths] : classified) {
        std::vector<EnrichedPath> plain;
        plain.reserve(paths.size());
        for (const auto& cp : paths) plain.push_back(cp.path);
        const Characterization ch = characterize(plain, key.family);
        csv::write_row(chars, {key.region, std::string(to_string(key.family)),
                               std::to_string(ch.traceroutes), std::to_string(ch.addresses),
                               std::to_string(ch.networks), std::to_string(ch.ases)});
        const PathProperties pp = path_properties(paths, tables);
        means_row(props, key, "local", pp.local, prec);
        means_row(props, key, "nonlocal", pp.nonlocal, prec);
        const FacilityBreakdown fb = facility_breakdown(paths, tables);
        facility_row(facs, key, "local", fb.local, prec);
        facility_row(facs, key, "nonlocal", fb.nonlocal, prec);
      }
      bundle["characterization.csv"] = chars.str();
      bundle["path_properties.csv"] = props.str();
      bundle["facilities.csv"] = facs.str();
    });
  }

  if (stages.count(Stage::kDepgraph)) {
    in_stage("depgraph", [&] {
      const DependencyGraph g = build_dependency_graph(enriched, tables, config.depgraph.scope,
                                                       config.depgraph.thresholds);
      bundle["depgraph.dot"] = export_graph(g, "dot", config.depgraph.include_nl_c);
      bundle["depgraph.json"] = export_graph(g, "json", config.depgraph.include_nl_c);
      bundle["depgraph_diagnostics.csv"] = export_graph_diagnostics(g);
    });
  }

  if (stages.count(Stage::kStability) && config.stability.enabled) {
    in_stage("stability", [&] {
      std::vector<StabilityRun> runs;
      for (const auto& region : regions) {
        auto it = by_region.find(region);
        static const std::vector<ClassifiedPath> kNone;
        const auto& paths = it == by_region.end() ? kNone : it->second;
        StabilityRun run = subsample_locality(paths, region, tables, config.stability.params);
        bundle["stability_" + region_slug(region) + ".csv"] = stability_csv(run);
        runs.push_back(std::move(run));
      }
      bundle["stability_summary.csv"] = stability_summary_csv(runs);
    });
  }

  ojson manifest;
  manifest["revision"] = kReportFormat;
  manifest["config"] = config_echo(config);
  manifest["rng"] = {{"generator", "splitmix64-counter"}, {"seed", config.stability.params.seed}};
  manifest["inputs"] = input_digests;
  manifest["tables"] = table_digests;
  ojson stage_counts = ojson::object();
  for (const auto& [family, fc] : counts) stage_counts[std::string(to_string(family))] = fc.to_json();
  manifest["counts"] = stage_counts;
  manifest["regions"] = regions;
  ojson outputs = ojson::object();
  for (const auto& [name, content] : bundle) outputs[name] = hex64(fnv1a64(content));
  manifest["outputs"] = outputs;
  manifest["table_warnings"] = tables.warnings;
  bundle["manifest.json"] = manifest.dump(2) + "\n";
  return bundle;
}

void write_bundle(const ReportBundle& bundle, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw StageError("output", StageError::Kind::kIo, "cannot create " + dir.string());
  }
  for (const auto& [name, content] : bundle) {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw StageError("output", StageError::Kind::kIo, "cannot write " + p.string());
  }
}

std::map<std::int64_t, AtlasProbeInfo> load_probe_metadata(std::istream& in,
                                                           const std::string& source) {
  std::map<std::int64_t, AtlasProbeInfo> probes;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw LoadError(source + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = csv::split(line);
    if (!fields) fail("unterminated quote");
    if (lineno == 1) {
      if (*fields != std::vector<std::string>{"probe_id", "asn", "cc"}) {
        fail("expected header probe_id,asn,cc");
      }
      continue;
    }
    if (line.empty()) continue;
    if (fields->size() != 3) fail("expected 3 fields");
    AtlasProbeInfo info;
    std::int64_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoll((*fields)[0], &used);
      if (used != (*fields)[0].size()) fail("bad probe id");
      if (!(*fields)[1].empty()) {
        const unsigned long long asn = std::stoull((*fields)[1], &used);
        if (used != (*fields)[1].size() || asn > 0xffffffffull) fail("bad asn");
        info.asn = static_cast<Asn>(asn);
      }
    } catch (const std::logic_error&) {
      fail("bad number");
    }
    if (!(*fields)[2].empty()) {
      info.country = CountryCode::parse((*fields)[2]);
      if (!info.country) fail("bad country code");
    }
    probes[id] = info;
  }
  return probes;
}

namespace {

// Maps one Atlas result object; returns an error message when it is unusable.
std::optional<RawTraceroute> atlas_record(const nlohmann::json& r,
                                          const std::map<std::int64_t, AtlasProbeInfo>& probes,
                                          std::string& error) {
  if (!r.is_object()) {
    error = "record is not an object";
    return std::nullopt;
  }
  auto str = [&](const char* key) -> std::string {
    auto it = r.find(key);
    return it != r.end() && it->is_string() ? it->get<std::string>() : std::string();
  };
  const std::string dst = str("dst_addr");
  if (dst.empty()) {
    error = "missing dst_addr";
    return std::nullopt;
  }
  std::string src = str("from");
  if (src.empty()) src = str("src_addr");

  RawTraceroute t;
  auto dst_ip = IpAddress::parse(dst);
  auto src_ip = IpAddress::parse(src);
  if (!dst_ip || !src_ip) {
    error = "unparseable source or destination address";
    return std::nullopt;
  }
  if (dst_ip->family() != src_ip->family()) {
    error = "source and destination families differ";
    return std::nullopt;
  }
  t.destination_ip = *dst_ip;
  t.source_ip = *src_ip;

  auto msm = r.find("msm_id");
  auto prb = r.find("prb_id");
  auto ts = r.find("timestamp");
  if (msm == r.end() || !msm->is_number_integer() || prb == r.end() ||
      !prb->is_number_integer() || ts == r.end() || !ts->is_number_integer()) {
    error = "missing msm_id, prb_id or timestamp";
    return std::nullopt;
  }
  const auto probe_id = prb->get<std::int64_t>();
  t.measurement_id = std::to_string(msm->get<std::int64_t>()) + "/" + std::to_string(probe_id);
  t.timestamp = ts->get<std::int64_t>();
  if (auto it = probes.find(probe_id); it != probes.end()) {
    t.source_asn = it->second.asn;
    t.source_country = it->second.country;
  }

  auto result = r.find("result");
  if (result == r.end() || !result->is_array()) {
    error = "missing result array";
    return std::nullopt;
  }
  int last = 0;
  for (const auto& hop : *result) {
    auto pos = hop.find("hop");
    if (!hop.is_object() || pos == hop.end() || !pos->is_number_integer()) {
      error = "hop without a number";
      return std::nullopt;
    }
    RawHop h;
    h.position = pos->get<int>();
    if (h.position <= last) {
      error = "hop numbers not increasing";
      return std::nullopt;
    }
    last = h.position;
    if (auto replies = hop.find("result"); replies != hop.end() && replies->is_array()) {
      for (const auto& reply : *replies) {
        auto from = reply.find("from");
        if (!reply.is_object() || from == reply.end() || !from->is_string()) continue;
        auto ip = IpAddress::parse(from->get<std::string>());
        if (!ip || ip->family() != t.source_ip.family()) continue;
        std::optional<double> rtt;
        if (auto rt = reply.find("rtt"); rt != reply.end() && rt->is_number()) {
          rtt = rt->get<double>();
        }
        const bool better = !h.ip || (rtt && (!h.rtt_ms || *rtt < *h.rtt_ms));
        if (better) {
          h.ip = ip;
          h.rtt_ms = rtt;
        }
      }
    }
    t.hops.push_back(h);
  }
  return t;
}

}  // namespace

ConvertReport convert_atlas(std::istream& in, std::ostream& out,
                            const std::map<std::int64_t, AtlasProbeInfo>& probes) {
  ConvertReport report;
  std::string line;
  std::size_t lineno = 0;
  auto skip = [&](const std::string& why) {
    ++report.skipped;
    if (report.diagnostics.size() < kMaxDiagnostics) {
      report.diagnostics.push_back("line " + std::to_string(lineno) + ": " + why);
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      skip("not valid JSON");
      continue;
    }
    const nlohmann::json records = j.is_array() ? j : nlohmann::json::array({j});
    for (const auto& r : records) {
      std::string error;
      auto t = atlas_record(r, probes, error);
      if (!t) {
        skip(error);
        continue;
      }
      out << traceroute_to_json_line(*t) << '\n';
      ++report.converted;
    }
  }
  if (in.bad()) throw IoError("read error in Atlas input");
  return report;
}

}  // namespace pathloc
