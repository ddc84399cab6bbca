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

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pathloc {

using Asn = std::uint32_t;

// ISO 3166-1 alpha-2 code, always two upper-case ASCII letters.
class CountryCode {
 public:
  CountryCode() = default;

  static std::optional<CountryCode> parse(std::string_view text) {
    if (text.size() != 2) return std::nullopt;
    CountryCode cc;
    for (int i = 0; i < 2; ++i) {
      char c = text[i];
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c < 'A' || c > 'Z') return std::nullopt;
      cc.code_[i] = c;
    }
    return cc;
  }

  std::string str() const { return std::string(code_.data(), 2); }
  bool empty() const { return code_[0] == '\0'; }

  auto operator<=>(const CountryCode&) const = default;

 private:
  std::array<char, 2> code_{};
};

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, (-180, 180]

  bool operator==(const GeoPoint&) const = default;
};

}  // namespace pathloc
