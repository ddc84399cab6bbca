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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathloc/ip.hpp"
#include "pathloc/types.hpp"

namespace pathloc {

struct RawHop {
  int position = 0;                // 1-based, strictly increasing
  std::optional<IpAddress> ip;     // absent for a non-responding hop
  std::optional<double> rtt_ms;    // minimum over the hop's replies

  bool operator==(const RawHop&) const = default;
};

struct RawTraceroute {
  std::string measurement_id;
  IpAddress source_ip;
  std::optional<Asn> source_asn;
  std::optional<CountryCode> source_country;
  IpAddress destination_ip;
  std::int64_t timestamp = 0;  // UTC seconds
  std::vector<RawHop> hops;

  // RTT of the final hop when it is the destination's reply.
  std::optional<double> destination_rtt() const;

  bool operator==(const RawTraceroute&) const = default;
};

struct MeasurementSet {
  Family family = Family::kV4;
  std::vector<RawTraceroute> records;

  bool operator==(const MeasurementSet&) const = default;
};

struct ParseReport {
  MeasurementSet set;
  std::size_t lines = 0;            // non-blank lines seen
  std::size_t malformed_count = 0;
  std::vector<std::string> malformed_samples;  // "line N: reason", first few
};

// Reads newline-delimited JSON traceroutes. `format` must be "jsonl". When
// `family` is unset it is taken from the first well-formed record; records of
// the other family count as malformed. Throws ConfigError for an unknown
// format, IoError for an unreadable stream and DataQualityError when more than
// half of the non-blank lines are malformed (unless `lenient`).
ParseReport parse_traceroutes(std::istream& in, std::string_view format,
                              std::optional<Family> family = std::nullopt,
                              bool lenient = false);

// Parses one line; returns nullopt and fills `error` when malformed.
std::optional<RawTraceroute> parse_traceroute_line(std::string_view line, std::string* error);

void write_traceroutes(std::ostream& out, const MeasurementSet& set);
std::string traceroute_to_json_line(const RawTraceroute& t);

struct FilterReport {
  MeasurementSet set;
  std::size_t dropped_unreached = 0;
  std::size_t dropped_self = 0;
};

// Keeps records whose last hop answered from the destination address with a
// measured RTT. Records probing their own source address are dropped.
FilterReport filter_successful(const MeasurementSet& set);

// One record per ordered (source, destination) pair: lowest destination RTT,
// then earliest timestamp, then smallest measurement id. Output is sorted by
// (source_ip, destination_ip).
MeasurementSet dedup_min_rtt(const MeasurementSet& set);

}  // namespace pathloc
