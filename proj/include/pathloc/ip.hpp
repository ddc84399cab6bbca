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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace pathloc {

enum class Family : std::uint8_t { kV4 = 4, kV6 = 6 };

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view s);

// An IPv4 or IPv6 address. IPv4 octets occupy the first four bytes of the
// backing array; the rest stay zero so the defaulted ordering is
// (family, network-order bytes).
class IpAddress {
 public:
  IpAddress() = default;

  // Dotted-quad IPv4 or RFC 4291 IPv6 text. Returns nullopt on bad input.
  static std::optional<IpAddress> parse(std::string_view text);
  static IpAddress v4(std::uint32_t host_order);

  Family family() const { return family_; }
  int bit_width() const { return family_ == Family::kV4 ? 32 : 128; }
  std::span<const std::uint8_t> bytes() const {
    return {bytes_.data(), family_ == Family::kV4 ? 4u : 16u};
  }
  // Bit i counted from the most significant bit.
  bool bit(int i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1; }

  // Address with every bit past `length` cleared.
  IpAddress masked(int length) const;

  // Canonical text: dotted quad, or RFC 5952 compressed IPv6.
  std::string to_string() const;

  auto operator<=>(const IpAddress&) const = default;

 private:
  Family family_ = Family::kV4;
  std::array<std::uint8_t, 16> bytes_{};
};

struct Prefix {
  IpAddress network;
  int length = 0;

  // Parses "a.b.c.d/n" or "x::/n". Host bits must be zero.
  static std::optional<Prefix> parse(std::string_view text);
  bool contains(const IpAddress& ip) const;
  std::string to_string() const;

  auto operator<=>(const Prefix&) const = default;
};

// RFC 1918, IPv4 link-local, IPv6 unique-local and link-local space.
bool is_private(const IpAddress& ip);

// The /24 (IPv4) or /48 (IPv6) network containing ip.
IpAddress network_of(const IpAddress& ip);

}  // namespace pathloc

template <>
struct std::hash<pathloc::IpAddress> {
  std::size_t operator()(const pathloc::IpAddress& ip) const noexcept;
};
