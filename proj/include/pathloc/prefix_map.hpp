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
#include <optional>
#include <vector>

#include "pathloc/ip.hpp"

namespace pathloc {

// Longest-prefix-match map from CIDR prefixes to values, one uncompressed
// binary trie per address family. Nodes live in a flat vector and refer to
// children by index, so the structure is trivially copyable and cheap to
// share read-only once built.
template <typename T>
class PrefixMap {
 public:
  PrefixMap() { clear(); }

  // Inserts or overwrites. Returns true when an entry for exactly this
  // prefix already existed.
  bool insert(const Prefix& prefix, T value) {
    std::uint32_t node = root(prefix.network.family());
    for (int i = 0; i < prefix.length; ++i) {
      const int b = prefix.network.bit(i);
      if (nodes_[node].child[b] == kNone) {
        nodes_[node].child[b] = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
      }
      node = nodes_[node].child[b];
    }
    const bool existed = nodes_[node].value.has_value();
    nodes_[node].value = std::move(value);
    if (!existed) ++size_;
    return existed;
  }

  // Value of the longest prefix covering ip, or nullptr.
  const T* lookup(const IpAddress& ip) const {
    std::uint32_t node = root(ip.family());
    const T* best = nodes_[node].value ? &*nodes_[node].value : nullptr;
    const int width = ip.bit_width();
    for (int i = 0; i < width; ++i) {
      node = nodes_[node].child[ip.bit(i)];
      if (node == kNone) break;
      if (nodes_[node].value) best = &*nodes_[node].value;
    }
    return best;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  void clear() {
    nodes_.assign(2, Node{});
    size_ = 0;
  }

 private:
  static constexpr std::uint32_t kNone = 0;  // index 0 is a root; never a child

  struct Node {
    std::uint32_t child[2] = {kNone, kNone};
    std::optional<T> value;
  };

  static std::uint32_t root(Family f) { return f == Family::kV4 ? 0 : 1; }

  std::vector<Node> nodes_;
  std::size_t size_ = 0;
};

}  // namespace pathloc
