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

#include "pathloc/ip.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <cstring>

namespace pathloc {

std::string_view to_string(Family f) { return f == Family::kV4 ? "v4" : "v6"; }

std::optional<Family> parse_family(std::string_view s) {
  if (s == "v4" || s == "4") return Family::kV4;
  if (s == "v6" || s == "6") return Family::kV6;
  return std::nullopt;
}

std::optional<IpAddress> IpAddress::parse(std::string_view text) {
  // inet_pton wants a NUL-terminated buffer; 45 chars covers the longest
  // IPv6 form with an embedded IPv4 tail.
  char buf[64];
  if (text.empty() || text.size() >= sizeof(buf)) return std::nullopt;
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';

  IpAddress ip;
  if (text.find(':') == std::string_view::npos) {
    if (inet_pton(AF_INET, buf, ip.bytes_.data()) != 1) return std::nullopt;
    ip.family_ = Family::kV4;
  } else {
    if (inet_pton(AF_INET6, buf, ip.bytes_.data()) != 1) return std::nullopt;
    ip.family_ = Family::kV6;
  }
  return ip;
}

IpAddress IpAddress::v4(std::uint32_t host_order) {
  IpAddress ip;
  ip.family_ = Family::kV4;
  ip.bytes_[0] = static_cast<std::uint8_t>(host_order >> 24);
  ip.bytes_[1] = static_cast<std::uint8_t>(host_order >> 16);
  ip.bytes_[2] = static_cast<std::uint8_t>(host_order >> 8);
  ip.bytes_[3] = static_cast<std::uint8_t>(host_order);
  return ip;
}

IpAddress IpAddress::masked(int length) const {
  IpAddress out = *this;
  const int width = bit_width();
  for (int i = 0; i < 16; ++i) {
    const int first_bit = i * 8;
    if (first_bit >= width) {
      out.bytes_[i] = 0;
    } else if (first_bit + 8 <= length) {
      continue;
    } else if (first_bit >= length) {
      out.bytes_[i] = 0;
    } else {
      const int keep = length - first_bit;
      out.bytes_[i] &= static_cast<std::uint8_t>(0xFF << (8 - keep));
    }
  }
  return out;
}

std::string IpAddress::to_string() const {
  char buf[INET6_ADDRSTRLEN];
  const int af = family_ == Family::kV4 ? AF_INET : AF_INET6;
  if (inet_ntop(af, bytes_.data(), buf, sizeof(buf)) == nullptr) return {};
  return buf;
}

std::optional<Prefix> Prefix::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto ip = IpAddress::parse(text.substr(0, slash));
  if (!ip) return std::nullopt;
  const auto len_text = text.substr(slash + 1);
  int length = -1;
  auto [ptr, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), length);
  if (ec != std::errc() || ptr != len_text.data() + len_text.size()) return std::nullopt;
  if (length < 0 || length > ip->bit_width()) return std::nullopt;
  if (ip->masked(length) != *ip) return std::nullopt;
  return Prefix{*ip, length};
}

bool Prefix::contains(const IpAddress& ip) const {
  return ip.family() == network.family() && ip.masked(length) == network;
}

std::string Prefix::to_string() const {
  return network.to_string() + "/" + std::to_string(length);
}

bool is_private(const IpAddress& ip) {
  static const Prefix kPrivate[] = {
      *Prefix::parse("10.0.0.0/8"),  *Prefix::parse("172.16.0.0/12"),
      *Prefix::parse("192.168.0.0/16"), *Prefix::parse("169.254.0.0/16"),
      *Prefix::parse("fc00::/7"),    *Prefix::parse("fe80::/10"),
  };
  for (const auto& p : kPrivate) {
    if (p.contains(ip)) return true;
  }
  return false;
}

IpAddress network_of(const IpAddress& ip) {
  return ip.masked(ip.family() == Family::kV4 ? 24 : 48);
}

}  // namespace pathloc

std::size_t std::hash<pathloc::IpAddress>::operator()(
    const pathloc::IpAddress& ip) const noexcept {
  // FNV-1a over family tag and address bytes.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint8_t b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint8_t>(ip.family()));
  for (auto b : ip.bytes()) mix(b);
  return static_cast<std::size_t>(h);
}
