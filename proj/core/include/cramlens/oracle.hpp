// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// Reference longest-prefix match. Two independent routes to the answer: a
// unibit binary trie and a linear scan over the routing table. Neither is
// fast; both are meant to be obviously correct.

#ifndef CRAMLENS_ORACLE_HPP_
#define CRAMLENS_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "cramlens/fib.hpp"

namespace cramlens {

class BinaryTrie {
 public:
  static constexpr std::uint32_t kNull = 0xffffffffu;

  explicit BinaryTrie(Family family = Family::ipv4(),
                      NextHop default_hop = NextHop::none());

  void insert(const IpPrefix& prefix, NextHop hop);
  // Returns false if the prefix was not stored.
  bool erase(const IpPrefix& prefix);

  NextHop lookup(Address addr) const;

  Family family() const { return family_; }
  NextHop default_hop() const { return default_hop_; }
  std::size_t node_count() const { return nodes_.size() - free_.size(); }
  std::size_t hop_count() const { return hop_count_; }

 private:
  struct Node {
    std::uint32_t child[2] = {kNull, kNull};
    NextHop hop = NextHop::none();
  };

  std::uint32_t allocate();

  Family family_;
  NextHop default_hop_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> free_;
  std::size_t hop_count_ = 0;
};

BinaryTrie build_trie(const Fib& fib);

inline NextHop oracle_lookup(const BinaryTrie& trie, Address addr) {
  return trie.lookup(addr);
}

NextHop scan_lookup(const Fib& fib, Address addr);

}  // namespace cramlens

#endif  // CRAMLENS_ORACLE_HPP_
