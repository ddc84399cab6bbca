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

#include "pathloc/ingest.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "json.hpp"
#include "pathloc/errors.hpp"

namespace pathloc {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxSamples = 5;

bool fail(std::string* error, std::string msg) {
  if (error) *error = std::move(msg);
  return false;
}

std::optional<IpAddress> ip_field(const json& v) {
  if (!v.is_string()) return std::nullopt;
  return IpAddress::parse(v.get_ref<const std::string&>());
}

bool parse_hop(const json& h, Family family, RawHop* hop, std::string* error) {
  if (!h.is_object()) return fail(error, "hop is not an object");
  auto pos = h.find("pos");
  if (pos == h.end() || !pos->is_number_integer()) return fail(error, "hop.pos must be an integer");
  hop->position = pos->get<int>();
  if (hop->position < 1) return fail(error, "hop.pos must be >= 1");

  auto ip = h.find("ip");
  if (ip != h.end() && !ip->is_null()) {
    hop->ip = ip_field(*ip);
    if (!hop->ip) return fail(error, "hop.ip is not an IP address");
    if (hop->ip->family() != family) return fail(error, "hop.ip family differs from src");
  }
  auto rtt = h.find("rtt");
  if (rtt != h.end() && !rtt->is_null()) {
    if (!rtt->is_number()) return fail(error, "hop.rtt must be a number");
    const double v = rtt->get<double>();
    if (!(v >= 0.0) || v == std::numeric_limits<double>::infinity())
      return fail(error, "hop.rtt must be finite and >= 0");
    hop->rtt_ms = v;
  }
  return true;
}

}  // namespace

std::optional<double> RawTraceroute::destination_rtt() const {
  if (hops.empty() || hops.back().ip != destination_ip) return std::nullopt;
  return hops.back().rtt_ms;
}

std::optional<RawTraceroute> parse_traceroute_line(std::string_view line, std::string* error) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    fail(error, "not valid JSON");
    return std::nullopt;
  }
  if (!j.is_object()) {
    fail(error, "record is not an object");
    return std::nullopt;
  }

  RawTraceroute t;
  auto field = [&j](const char* key) -> const json* {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  };

  const json* msm = field("msm_id");
  if (!msm || !msm->is_string()) {
    fail(error, "msm_id must be a string");
    return std::nullopt;
  }
  t.measurement_id = msm->get<std::string>();

  const json* src = field("src");
  const json* dst = field("dst");
  auto src_ip = src ? ip_field(*src) : std::nullopt;
  auto dst_ip = dst ? ip_field(*dst) : std::nullopt;
  if (!src_ip || !dst_ip) {
    fail(error, "src and dst must be IP addresses");
    return std::nullopt;
  }
  if (src_ip->family() != dst_ip->family()) {
    fail(error, "src and dst belong to different address families");
    return std::nullopt;
  }
  t.source_ip = *src_ip;
  t.destination_ip = *dst_ip;

  if (const json* asn = field("src_asn"); asn && !asn->is_null()) {
    if (!asn->is_number_unsigned() || asn->get<std::uint64_t>() > std::numeric_limits<Asn>::max()) {
      fail(error, "src_asn must be a 32-bit unsigned integer or null");
      return std::nullopt;
    }
    t.source_asn = asn->get<Asn>();
  }
  if (const json* cc = field("src_cc"); cc && !cc->is_null()) {
    std::optional<CountryCode> code;
    if (cc->is_string()) code = CountryCode::parse(cc->get_ref<const std::string&>());
    if (!code) {
      fail(error, "src_cc must be an ISO 3166-1 alpha-2 code or null");
      return std::nullopt;
    }
    t.source_country = code;
  }

  const json* ts = field("ts");
  if (!ts || !ts->is_number_integer() || ts->get<std::int64_t>() <= 0) {
    fail(error, "ts must be a positive integer");
    return std::nullopt;
  }
  t.timestamp = ts->get<std::int64_t>();

  const json* hops = field("hops");
  if (!hops || !hops->is_array()) {
    fail(error, "hops must be an array");
    return std::nullopt;
  }
  t.hops.reserve(hops->size());
  for (const auto& h : *hops) {
    RawHop hop;
    if (!parse_hop(h, t.source_ip.family(), &hop, error)) return std::nullopt;
    if (!t.hops.empty() && hop.position <= t.hops.back().position) {
      fail(error, "hop positions must be strictly increasing");
      return std::nullopt;
    }
    t.hops.push_back(std::move(hop));
  }
  return t;
}

ParseReport parse_traceroutes(std::istream& in, std::string_view format,
                              std::optional<Family> family, bool lenient) {
  if (format != "jsonl") {
    throw ConfigError("unsupported traceroute format '" + std::string(format) +
                      "' (expected 'jsonl')");
  }
  if (!in) throw IoError("traceroute stream is not readable");

  ParseReport report;
  std::string line;
  std::size_t line_no = 0;
  auto reject = [&report, &line_no](const std::string& reason) {
    ++report.malformed_count;
    if (report.malformed_samples.size() < kMaxSamples)
      report.malformed_samples.push_back("line " + std::to_string(line_no) + ": " + reason);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++report.lines;

    std::string error;
    auto record = parse_traceroute_line(line, &error);
    if (!record) {
      reject(error);
      continue;
    }
    if (!family) family = record->source_ip.family();
    if (record->source_ip.family() != *family) {
      reject("address family differs from the measurement set");
      continue;
    }
    report.set.records.push_back(std::move(*record));
  }
  if (in.bad()) throw IoError("error while reading traceroute stream");

  report.set.family = family.value_or(Family::kV4);
  if (!lenient && report.malformed_count * 2 > report.lines) {
    throw DataQualityError(std::to_string(report.malformed_count) + " of " +
                               std::to_string(report.lines) + " traceroute lines are malformed",
                           report.malformed_samples);
  }
  return report;
}

std::string traceroute_to_json_line(const RawTraceroute& t) {
  nlohmann::ordered_json j;
  j["msm_id"] = t.measurement_id;
  j["src"] = t.source_ip.to_string();
  j["src_asn"] = t.source_asn ? nlohmann::ordered_json(*t.source_asn) : nullptr;
  j["src_cc"] = t.source_country ? nlohmann::ordered_json(t.source_country->str()) : nullptr;
  j["dst"] = t.destination_ip.to_string();
  j["ts"] = t.timestamp;
  auto hops = nlohmann::ordered_json::array();
  for (const auto& h : t.hops) {
    nlohmann::ordered_json hop;
    hop["pos"] = h.position;
    hop["ip"] = h.ip ? nlohmann::ordered_json(h.ip->to_string()) : nullptr;
    hop["rtt"] = h.rtt_ms ? nlohmann::ordered_json(*h.rtt_ms) : nullptr;
    hops.push_back(std::move(hop));
  }
  j["hops"] = std::move(hops);
  return j.dump();
}

void write_traceroutes(std::ostream& out, const MeasurementSet& set) {
  for (const auto& t : set.records) out << traceroute_to_json_line(t) << '\n';
}

FilterReport filter_successful(const MeasurementSet& set) {
  FilterReport report;
  report.set.family = set.family;
  for (const auto& t : set.records) {
    if (t.source_ip == t.destination_ip) {
      ++report.dropped_self;
    } else if (!t.destination_rtt()) {
      ++report.dropped_unreached;
    } else {
      report.set.records.push_back(t);
    }
  }
  return report;
}

MeasurementSet dedup_min_rtt(const MeasurementSet& set) {
  using Key = std::pair<IpAddress, IpAddress>;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::map<Key, const RawTraceroute*> best;
  for (const auto& t : set.records) {
    auto [it, inserted] = best.try_emplace(Key{t.source_ip, t.destination_ip}, &t);
    if (!inserted) {
      const double a = t.destination_rtt().value_or(kInf);
      const double b = it->second->destination_rtt().value_or(kInf);
      if (std::tie(a, t.timestamp, t.measurement_id) <
          std::tie(b, it->second->timestamp, it->second->measurement_id)) {
        it->second = &t;
      }
    }
  }

  MeasurementSet out;
  out.family = set.family;
  out.records.reserve(best.size());
  for (const auto& [key, t] : best) out.records.push_back(*t);
  return out;
}

}  // namespace pathloc
