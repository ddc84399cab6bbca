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

// pathloc: batch path-locality analysis of traceroute measurements.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pathloc/errors.hpp"
#include "pathloc/pipeline.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kConfigFailure = 2,
  kIoFailure = 3,
  kDataFailure = 4,
};

struct RunFlags {
  std::string config;
  std::vector<std::string> regions;
  std::string family;
  bool content_targets = false;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool lenient = false;
  std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "Pipeline config (JSON)")->required();
  cmd->add_option("--region", f.regions, "Region to analyse (repeatable)");
  cmd->add_option("--family", f.family, "Restrict to one address family")
      ->check(CLI::IsMember({"v4", "v6"}));
  cmd->add_flag("--content-targets", f.content_targets,
                "Keep only paths towards content networks");
  cmd->add_option("--seed", f.seed, "Seed for the stability subsampling");
  cmd->add_option("--threads", f.threads, "Worker threads for subsampling");
  cmd->add_flag("--lenient", f.lenient, "Accept empty or mostly malformed input");
  cmd->add_option("--out", f.out, "Output directory");
}

int exit_code(pathloc::StageError::Kind kind) {
  using Kind = pathloc::StageError::Kind;
  switch (kind) {
    case Kind::kConfig: return kConfigFailure;
    case Kind::kIo: return kIoFailure;
    case Kind::kDataQuality: return kDataFailure;
    case Kind::kOther: break;
  }
  return kFailure;
}

int run(const RunFlags& f, const std::set<pathloc::Stage>& stages) {
  pathloc::PipelineConfig config;
  try {
    config = pathloc::load_config(f.config);
  } catch (const pathloc::IoError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kIoFailure;
  } catch (const pathloc::Error& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kConfigFailure;
  }
  if (!f.regions.empty()) config.regions = f.regions;
  if (!f.family.empty()) config.family = pathloc::parse_family(f.family);
  if (f.content_targets) config.content_targets = true;
  if (f.seed) config.stability.params.seed = *f.seed;
  if (f.threads) config.stability.params.threads = *f.threads;
  if (f.lenient) config.lenient = true;
  if (!f.out.empty()) config.output_dir = f.out;

  try {
    const pathloc::ReportBundle bundle = pathloc::run_pipeline(config, stages);
    pathloc::write_bundle(bundle, config.output_dir);
    std::cerr << "wrote " << bundle.size() << " files to " << config.output_dir.string() << "\n";
  } catch (const pathloc::StageError& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.kind());
  }
  return kOk;
}

int convert(const std::string& in_path, const std::string& out_path,
            const std::string& probes_path) {
  try {
    std::map<std::int64_t, pathloc::AtlasProbeInfo> probes;
    if (!probes_path.empty()) {
      std::ifstream p(probes_path);
      if (!p) throw pathloc::IoError("cannot open " + probes_path);
      probes = pathloc::load_probe_metadata(p, probes_path);
    }
    std::ifstream in_file;
    std::istream* in = &std::cin;
    if (in_path != "-") {
      in_file.open(in_path);
      if (!in_file) throw pathloc::IoError("cannot open " + in_path);
      in = &in_file;
    }
    std::ofstream out_file;
    std::ostream* out = &std::cout;
    if (out_path != "-") {
      out_file.open(out_path, std::ios::trunc);
      if (!out_file) throw pathloc::IoError("cannot write " + out_path);
      out = &out_file;
    }
    const pathloc::ConvertReport report = pathloc::convert_atlas(*in, *out, probes);
    for (const auto& d : report.diagnostics) std::cerr << "convert-atlas: skipped " << d << "\n";
    std::cerr << "convert-atlas: " << report.converted << " converted, " << report.skipped
              << " skipped\n";
    out->flush();
    if (!*out) throw pathloc::IoError("write failed");
  } catch (const pathloc::IoError& e) {
    std::cerr << "convert-atlas: " << e.what() << "\n";
    return kIoFailure;
  } catch (const pathloc::Error& e) {
    std::cerr << "convert-atlas: " << e.what() << "\n";
    return kDataFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path locality analysis of traceroute measurements"};
  app.require_subcommand(1);

  std::string in_path = "-";
  std::string out_path = "-";
  std::string probes_path;
  auto* conv = app.add_subcommand("convert-atlas", "Normalise Atlas traceroute results");
  conv->add_option("--in", in_path, "Atlas results, one JSON document per line ('-' = stdin)");
  conv->add_option("--out", out_path, "Normalised JSON Lines ('-' = stdout)");
  conv->add_option("--probes", probes_path, "probe_id,asn,cc metadata CSV");

  using pathloc::Stage;
  struct Sub {
    const char* name;
    const char* help;
    std::set<Stage> stages;
  };
  const std::vector<Sub> subs = {
      {"run", "Run every analysis stage", pathloc::all_stages()},
      {"locality", "Locality metrics only", {Stage::kLocality}},
      {"depgraph", "Country dependency graph only", {Stage::kDepgraph}},
      {"stability", "Subsampling stability only", {Stage::kStability}},
      {"characterize", "Dataset and path characterisation only", {Stage::kCharacterize}},
  };
  std::vector<RunFlags> flags(subs.size());
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    cmds.push_back(app.add_subcommand(subs[i].name, subs[i].help));
    add_run_flags(cmds.back(), flags[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigFailure;
  }

  if (conv->parsed()) return convert(in_path, out_path, probes_path);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (cmds[i]->parsed()) return run(flags[i], subs[i].stages);
  }
  return kFailure;
}
