// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// MashUp: a fixed-stride multibit trie whose nodes are individually stored
// as TCAM (compact ternary entries) or SRAM (prefix-expanded arrays), with
// same-level same-kind nodes packed into tagged super-tables.

#ifndef CRAMLENS_MASHUP_HPP_
#define CRAMLENS_MASHUP_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cramlens/cram.hpp"
#include "cramlens/fib.hpp"
#include "cramlens/prefix_tcam.hpp"
#include "json.hpp"

namespace cramlens {

struct StridePlan {
  std::vector<int> strides;

  // Parses "16-4-4-8".
  static StridePlan parse(const std::string& text);
  std::string to_string() const;
  int total() const;
  // Bit offset where level `level` starts.
  int start(std::size_t level) const;
  void validate(Family family) const;
  // 16-4-4-8 for IPv4, 20-12-16-16 for IPv6, width/2 split for toy tables.
  static StridePlan defaults_for(Family family);
};

struct MashupConfig {
  StridePlan plan;
  // SRAM iff 2^stride <= hybrid_factor * ternary entries.
  int hybrid_factor = 3;
  // Coalescing budgets: entries per TCAM block, rows per SRAM page.
  std::uint64_t tcam_unit = 512;
  std::uint64_t sram_unit = 1024;

  static MashupConfig defaults_for(Family family);
};

enum class NodeKind { kTcam, kSram };

inline constexpr std::uint32_t kNoTrieNode = 0xffffffffu;

struct TrieEntry {
  NextHop hop = NextHop::none();
  std::uint32_t child = kNoTrieNode;
  bool empty() const { return hop.is_none() && child == kNoTrieNode; }
  friend bool operator==(const TrieEntry&, const TrieEntry&) = default;
};

// A ternary entry local to one node: `length` bits of the node's stride.
struct LocalEntry {
  std::uint64_t bits = 0;
  int length = 0;
  TrieEntry entry;
};

// Stride choice from a length histogram. Candidates are lengths that are
// multiples of `align` and rise above at least one neighbour; the most
// populated (at most `levels`-1) become boundaries, the first no deeper
// than `max_first`. align 0 means 4 for families of 16 bits or more, else
// 1. Falls back to mass quantiles when there is no candidate.
StridePlan choose_strides(const LengthHistogram& hist, int width,
                          int levels = 4, int max_first = 20, int align = 0);
StridePlan choose_strides(const Fib& fib, int levels = 4, int max_first = 20,
                          int align = 0);

// 2^stride <= factor * ternary_entries.
NodeKind hybridize(int stride, std::uint64_t ternary_entries,
                   int factor = 3);

// Greedy packing: the largest unplaced item seeds a group whose budget is
// its size rounded up to `unit`; the smallest unplaced items are absorbed
// while they fit. Returns item indices per group, in tag order.
std::vector<std::vector<std::size_t>> coalesce(
    const std::vector<std::uint64_t>& sizes, std::uint64_t unit);

class MashupStructure {
 public:
  struct Node {
    int level = 0;
    std::uint64_t path = 0;  // the start(level) address bits above the node
    std::uint32_t parent = kNoTrieNode;
    bool alive = false;
    // Routes ending inside this node, keyed locally.
    std::map<std::pair<int, std::uint64_t>, NextHop> routes;  // (len, bits)
    std::map<std::uint64_t, std::uint32_t> children;          // slot -> id
  };

  struct TcamSuperTable {
    int tag_width = 0;
    std::vector<std::uint32_t> members;  // index = tag
    PrefixTcam<TrieEntry> table;
    std::uint64_t entries() const { return table.size(); }
  };

  struct SramSuperTable {
    int tag_width = 0;
    std::vector<std::uint32_t> members;
    std::vector<TrieEntry> slots;  // members.size() << stride rows
  };

  struct Placement {
    NodeKind kind = NodeKind::kTcam;
    std::uint32_t table = 0;
    std::uint32_t tag = 0;
  };

  struct Level {
    std::vector<TcamSuperTable> tcam;
    std::vector<SramSuperTable> sram;
  };

  struct LevelStats {
    int level = 0;
    int stride = 0;
    std::uint64_t tcam_nodes = 0;
    std::uint64_t sram_nodes = 0;
    std::uint64_t tcam_entries = 0;
    std::uint64_t sram_rows = 0;
    std::uint64_t tcam_tables = 0;
    std::uint64_t sram_tables = 0;
  };

  static MashupStructure build(const Fib& fib, const MashupConfig& cfg);

  NextHop lookup(Address addr) const;
  // Throws UpdateError.
  void update(UpdateOp op, const Route& route);
  CramProgram to_program() const;

  Family family() const { return family_; }
  int hop_bits() const { return hop_bits_; }
  NextHop default_hop() const { return default_hop_; }
  const MashupConfig& config() const { return cfg_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Level>& levels() const { return levels_; }
  const Placement& placement(std::uint32_t node) const {
    return placement_.at(node);
  }
  std::uint32_t root() const { return 0; }

  // Ternary form of a node: routes plus full-stride child entries, each
  // child entry carrying the best hop of the node covering its slot.
  std::vector<LocalEntry> ternary_entries(std::uint32_t node) const;
  // Prefix-expanded form: 2^stride rows.
  std::vector<TrieEntry> expanded_entries(std::uint32_t node) const;
  NodeKind node_kind(std::uint32_t node) const {
    return placement_.at(node).kind;
  }
  std::vector<LevelStats> level_stats() const;
  // Bits of a child reference stored at `level` (0 at the last level).
  int ref_bits(std::size_t level) const;

  nlohmann::json to_json() const;
  static MashupStructure from_json(const nlohmann::json& j);

  // Test hook: overwrite the hop of every physical entry owned by `node`.
  void corrupt_node(std::uint32_t node, NextHop hop);

 private:
  MashupStructure(Family family, int hop_bits, NextHop default_hop,
                  const MashupConfig& cfg);

  int stride(std::size_t level) const { return cfg_.plan.strides[level]; }
  std::uint32_t new_node(int level, std::uint64_t path, std::uint32_t parent);
  void rebuild_level(std::size_t level);
  // Level that holds a route of length `len`.
  std::size_t level_for(int len) const;

  Family family_;
  int hop_bits_;
  NextHop default_hop_;
  MashupConfig cfg_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> free_;
  std::vector<Placement> placement_;
  std::vector<Level> levels_;
};

inline MashupStructure build_mashup(const Fib& fib, const MashupConfig& cfg) {
  return MashupStructure::build(fib, cfg);
}

}  // namespace cramlens

#endif  // CRAMLENS_MASHUP_HPP_
