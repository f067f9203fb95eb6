// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// RESAIL: search on prefix lengths with a look-aside TCAM.
//
//   * prefixes longer than the pivot live in a look-aside ternary table;
//   * every length i in [min_bmp, pivot] has a bitmap B_i of 2^i bits;
//   * prefixes shorter than min_bmp are expanded into B_min_bmp;
//   * one d-left hash table keyed by bit-marked prefixes holds the hops.
//
// A lookup probes the look-aside table and all bitmaps in parallel (one
// step), then reads the hash table once (second step).

#ifndef CRAMLENS_RESAIL_HPP_
#define CRAMLENS_RESAIL_HPP_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cramlens/cram.hpp"
#include "cramlens/dleft.hpp"
#include "cramlens/fib.hpp"
#include "cramlens/prefix_tcam.hpp"
#include "json.hpp"

namespace cramlens {

struct ResailConfig {
  int pivot = 24;
  int min_bmp = 13;
  int dleft_ways = 4;
  double dleft_load = 0.8;
  std::uint64_t seed = 1;

  // Defaults for a family: pivot 24 for IPv4/IPv6, width-2 for toy tables.
  static ResailConfig defaults_for(Family family);
  void validate(Family family) const;
};

class Bitmap {
 public:
  explicit Bitmap(int level = 0);

  int level() const { return level_; }
  std::uint64_t size() const { return std::uint64_t{1} << level_; }
  bool test(std::uint64_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::uint64_t i) {
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  std::uint64_t count() const;
  std::vector<std::uint64_t> set_indices() const;

 private:
  int level_;
  std::vector<std::uint64_t> words_;
};

// (value bits || 1) << (pivot - length): a (pivot+1)-bit key whose lowest
// set bit marks where the prefix ends.
std::uint64_t bit_mark_key(const IpPrefix& p, const ResailConfig& cfg);

class ResailStructure {
 public:
  // Throws BuildError.
  static ResailStructure build(const Fib& fib, const ResailConfig& cfg);

  NextHop lookup(Address addr) const;

  // Throws UpdateError (absent route on delete/change) or BuildError (hash
  // table could not absorb the entry).
  void update(UpdateOp op, const Route& route);

  CramProgram to_program() const;

  Family family() const { return family_; }
  int hop_bits() const { return hop_bits_; }
  NextHop default_hop() const { return default_hop_; }
  const ResailConfig& config() const { return cfg_; }
  const PrefixTcam<NextHop>& look_aside() const { return look_aside_; }
  const Bitmap& bitmap(int level) const {
    return bitmaps_.at(level - cfg_.min_bmp);
  }
  const DLeftHashTable& hash_table() const { return hash_; }

  nlohmann::json to_json() const;
  static ResailStructure from_json(const nlohmann::json& j);

  // Test hook: overwrite the stored hop of a hash key.
  void corrupt_hash_entry(std::uint64_t key, NextHop hop);

 private:
  ResailStructure(Family family, int hop_bits, NextHop default_hop,
                  const ResailConfig& cfg);

  std::uint64_t marked_key(std::uint64_t index, int level) const;
  void hash_put(std::uint64_t key, NextHop hop);
  void reconcile_expansion(const IpPrefix& changed);
  NextHop longest_low_route(std::uint64_t index) const;

  Family family_;
  int hop_bits_;
  NextHop default_hop_;
  ResailConfig cfg_;
  PrefixTcam<NextHop> look_aside_;
  std::vector<Bitmap> bitmaps_;  // levels min_bmp..pivot
  DLeftHashTable hash_;
  std::uint64_t next_seed_;
  // Routes of length <= min_bmp: the sources of B_min_bmp.
  std::unordered_map<IpPrefix, NextHop, IpPrefixHash> low_routes_;
};

inline ResailStructure build_resail(const Fib& fib, const ResailConfig& cfg) {
  return ResailStructure::build(fib, cfg);
}

}  // namespace cramlens

#endif  // CRAMLENS_RESAIL_HPP_
