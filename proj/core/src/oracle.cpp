// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/oracle.hpp"

namespace cramlens {

BinaryTrie::BinaryTrie(Family family, NextHop default_hop)
    : family_(family), default_hop_(default_hop) {
  nodes_.emplace_back();
}

std::uint32_t BinaryTrie::allocate() {
  if (!free_.empty()) {
    auto id = free_.back();
    free_.pop_back();
    nodes_[id] = Node{};
    return id;
  }
  nodes_.emplace_back();
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

void BinaryTrie::insert(const IpPrefix& prefix, NextHop hop) {
  std::uint32_t cur = 0;
  const int width = family_.width;
  for (int i = 0; i < prefix.length(); ++i) {
    const int b = static_cast<int>((prefix.value() >> (width - 1 - i)) & 1);
    if (nodes_[cur].child[b] == kNull) {
      const auto fresh = allocate();
      nodes_[cur].child[b] = fresh;
    }
    cur = nodes_[cur].child[b];
  }
  if (nodes_[cur].hop.is_none()) ++hop_count_;
  nodes_[cur].hop = hop;
}

bool BinaryTrie::erase(const IpPrefix& prefix) {
  std::vector<std::uint32_t> path{0};
  const int width = family_.width;
  for (int i = 0; i < prefix.length(); ++i) {
    const int b = static_cast<int>((prefix.value() >> (width - 1 - i)) & 1);
    const auto next = nodes_[path.back()].child[b];
    if (next == kNull) return false;
    path.push_back(next);
  }
  if (nodes_[path.back()].hop.is_none()) return false;
  nodes_[path.back()].hop = NextHop::none();
  --hop_count_;
  // Prune childless, hop-less nodes bottom-up (never the root).
  for (int i = static_cast<int>(path.size()) - 1; i > 0; --i) {
    const Node& n = nodes_[path[i]];
    if (!n.hop.is_none() || n.child[0] != kNull || n.child[1] != kNull) break;
    const int b = static_cast<int>(
        (prefix.value() >> (width - i)) & 1);  // bit i-1 selects path[i]
    nodes_[path[i - 1]].child[b] = kNull;
    free_.push_back(path[i]);
  }
  return true;
}

NextHop BinaryTrie::lookup(Address addr) const {
  NextHop best = nodes_[0].hop;
  std::uint32_t cur = 0;
  const int width = family_.width;
  for (int i = 0; i < width; ++i) {
    const int b = static_cast<int>((addr >> (width - 1 - i)) & 1);
    cur = nodes_[cur].child[b];
    if (cur == kNull) break;
    if (!nodes_[cur].hop.is_none()) best = nodes_[cur].hop;
  }
  return best.is_none() ? default_hop_ : best;
}

BinaryTrie build_trie(const Fib& fib) {
  BinaryTrie trie(fib.family(), fib.default_hop());
  for (const auto& r : fib) trie.insert(r.prefix, r.hop);
  return trie;
}

NextHop scan_lookup(const Fib& fib, Address addr) {
  int best_len = -1;
  NextHop best = fib.default_hop();
  for (const auto& r : fib) {
    if (r.prefix.length() > best_len && r.prefix.contains(addr)) {
      best_len = r.prefix.length();
      best = r.hop;
    }
  }
  return best;
}

}  // namespace cramlens
