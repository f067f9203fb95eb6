// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// d-left hash table with single-slot buckets. Each key has one candidate
// bucket per subtable; a new key goes to the least-loaded candidate, ties
// broken to the left. When every candidate is taken, a bounded cuckoo-style
// displacement walk runs before the insert is reported as failed.

#ifndef CRAMLENS_DLEFT_HPP_
#define CRAMLENS_DLEFT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cramlens/prefix.hpp"

namespace cramlens {

class DLeftHashTable {
 public:
  struct Slot {
    std::uint64_t key = 0;
    NextHop value = NextHop::none();
    bool used = false;
  };

  enum class InsertResult { kInserted, kUpdated, kFull };

  static constexpr int kMaxKicks = 512;

  DLeftHashTable() : DLeftHashTable(1, 4, 0) {}
  DLeftHashTable(std::size_t capacity, int ways, std::uint64_t seed);

  // Slots needed to keep `entries` at or below `load`.
  static std::size_t capacity_for(std::size_t entries, double load);

  InsertResult insert(std::uint64_t key, NextHop value);
  bool erase(std::uint64_t key);
  std::optional<NextHop> find(std::uint64_t key) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int ways() const { return static_cast<int>(subtables_.size()); }
  std::uint64_t seed() const { return seed_; }
  double load() const {
    return capacity_ ? static_cast<double>(size_) / capacity_ : 0.0;
  }
  std::span<const Slot> subtable(int way) const { return subtables_[way]; }
  std::vector<std::pair<std::uint64_t, NextHop>> items() const;

  // Replaces contents with `items` under a fresh seed and capacity. Returns
  // false (leaving a partially filled table) if some key could not be placed.
  bool rebuild(std::span<const std::pair<std::uint64_t, NextHop>> items,
               std::size_t capacity, std::uint64_t seed);

  // Restores a table from explicit slot contents (deserialization).
  static DLeftHashTable from_slots(std::uint64_t seed,
                                   std::vector<std::vector<Slot>> subtables);

 private:
  std::size_t bucket(int way, std::uint64_t key) const;
  void reset(std::size_t capacity, int ways, std::uint64_t seed);

  std::vector<std::vector<Slot>> subtables_;
  std::vector<std::uint64_t> way_seeds_;
  std::size_t capacity_ = 0;
  std::size_t size_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t walk_state_ = 0;
};

}  // namespace cramlens

#endif  // CRAMLENS_DLEFT_HPP_
