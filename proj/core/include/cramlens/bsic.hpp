// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// BSIC: a ternary initial table over the first k address bits, then a
// binary search over the left endpoints of the residual range list of each
// slice that needs one. Depth-l nodes of every tree share one table, so a
// lookup touches each level table at most once.

#ifndef CRAMLENS_BSIC_HPP_
#define CRAMLENS_BSIC_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cramlens/cram.hpp"
#include "cramlens/fib.hpp"
#include "cramlens/prefix_tcam.hpp"
#include "json.hpp"

namespace cramlens {

struct BsicConfig {
  int k = 16;

  // 16 for IPv4, 24 for IPv6, width/2 for toy tables.
  static BsicConfig defaults_for(Family family);
  void validate(Family family) const;
};

inline constexpr std::uint32_t kNoNode = 0xffffffffu;

struct InitialAction {
  bool bst = false;
  NextHop hop = NextHop::none();
  std::uint32_t root = kNoNode;  // index into level 0 when bst
  friend bool operator==(const InitialAction&,
                         const InitialAction&) = default;
};

struct InitialEntry {
  std::uint64_t bits = 0;  // right-aligned, `length` significant bits
  int length = 0;          // also the priority
  InitialAction action;
};

// Residual routes of one slice, plus the hop inherited from the longest
// route of length <= k covering the slice.
struct BstGroup {
  std::uint64_t slice = 0;
  NextHop inherited = NextHop::none();
  struct Residual {
    std::uint64_t bits;  // right-aligned
    int length;
    NextHop hop;
  };
  std::vector<Residual> residuals;
};

struct InitialTable {
  std::vector<InitialEntry> entries;  // sorted by (length desc, bits)
  std::vector<BstGroup> groups;       // sorted by slice
};

InitialTable build_initial_table(const Fib& fib, const BsicConfig& cfg);

struct Interval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  NextHop hop = NextHop::none();
  friend bool operator==(const Interval&, const Interval&) = default;
};

using RangeList = std::vector<Interval>;

// Covers [0, 2^width - 1]; neighbours carry distinct hops.
RangeList expand_ranges(const std::vector<BstGroup::Residual>& residuals,
                        int width, NextHop inherited);

// "0000 - 0011 C" lines, one per interval.
std::string format_ranges(const RangeList& ranges, int width,
                          const std::function<std::string(NextHop)>& label);

struct BstNode {
  std::uint64_t endpoint = 0;
  NextHop hop = NextHop::none();
  int left = -1;
  int right = -1;
};

// Balanced tree by lower-median selection. nodes[root] is the root.
struct Bst {
  std::vector<BstNode> nodes;
  int root = -1;
  int depth() const;
  std::vector<std::uint64_t> in_order() const;
};

Bst build_bst(const RangeList& ranges);

class BsicStructure {
 public:
  struct LevelNode {
    std::uint64_t endpoint = 0;
    NextHop hop = NextHop::none();
    std::uint32_t left = kNoNode;
    std::uint32_t right = kNoNode;
  };

  static BsicStructure build(const Fib& fib, const BsicConfig& cfg);

  NextHop lookup(Address addr) const;
  CramProgram to_program() const;

  Family family() const { return family_; }
  int hop_bits() const { return hop_bits_; }
  NextHop default_hop() const { return default_hop_; }
  const BsicConfig& config() const { return cfg_; }
  const PrefixTcam<InitialAction>& initial() const { return initial_; }
  const std::vector<std::vector<LevelNode>>& levels() const { return levels_; }
  // Residual bits searched by the trees.
  int residual_width() const { return family_.width - cfg_.k; }
  // Bits of a child reference stored at `level` (0 at the deepest level).
  int ref_bits(std::size_t level) const;

  nlohmann::json to_json() const;
  static BsicStructure from_json(const nlohmann::json& j);

  // Test hook: overwrite the hop of one tree node.
  void corrupt_node(std::size_t level, std::size_t index, NextHop hop);

 private:
  BsicStructure(Family family, int hop_bits, NextHop default_hop,
                const BsicConfig& cfg);
  std::uint32_t place(const Bst& tree, int node, std::size_t depth);

  Family family_;
  int hop_bits_;
  NextHop default_hop_;
  BsicConfig cfg_;
  PrefixTcam<InitialAction> initial_;
  std::vector<std::vector<LevelNode>> levels_;
};

inline BsicStructure build_bsic(const Fib& fib, const BsicConfig& cfg) {
  return BsicStructure::build(fib, cfg);
}

// Updates are a full rebuild on the edited table.
inline BsicStructure bsic_rebuild(const Fib& fib, const BsicConfig& cfg) {
  return BsicStructure::build(fib, cfg);
}

}  // namespace cramlens

#endif  // CRAMLENS_BSIC_HPP_
