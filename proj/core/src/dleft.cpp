// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/dleft.hpp"

#include <cmath>
#include <stdexcept>

namespace cramlens {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

DLeftHashTable::DLeftHashTable(std::size_t capacity, int ways,
                               std::uint64_t seed) {
  reset(capacity, ways, seed);
}

void DLeftHashTable::reset(std::size_t capacity, int ways,
                           std::uint64_t seed) {
  if (ways < 1) throw std::invalid_argument("d-left needs at least one way");
  if (capacity < 1) capacity = 1;
  capacity_ = capacity;
  seed_ = seed;
  walk_state_ = splitmix64(seed ^ 0x5eedull);
  size_ = 0;
  subtables_.assign(ways, {});
  way_seeds_.resize(ways);
  for (int w = 0; w < ways; ++w) {
    const std::size_t n = capacity / ways + (static_cast<std::size_t>(w) <
                                                     capacity % ways
                                                 ? 1
                                                 : 0);
    subtables_[w].assign(n, Slot{});
    way_seeds_[w] = splitmix64(seed + 0x1000193ull * (w + 1));
  }
}

std::size_t DLeftHashTable::capacity_for(std::size_t entries, double load) {
  if (!(load > 0.0 && load <= 1.0)) {
    throw std::invalid_argument("load factor must be in (0, 1]");
  }
  // Guard against 1000/0.8 = 1250.0000000000002 style rounding.
  const double exact = static_cast<double>(entries) / load;
  auto cap = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return cap < 1 ? 1 : cap;
}

std::size_t DLeftHashTable::bucket(int way, std::uint64_t key) const {
  return splitmix64(key ^ way_seeds_[way]) % subtables_[way].size();
}

std::optional<NextHop> DLeftHashTable::find(std::uint64_t key) const {
  for (int w = 0; w < ways(); ++w) {
    if (subtables_[w].empty()) continue;
    const Slot& s = subtables_[w][bucket(w, key)];
    if (s.used && s.key == key) return s.value;
  }
  return std::nullopt;
}

DLeftHashTable::InsertResult DLeftHashTable::insert(std::uint64_t key,
                                                    NextHop value) {
  for (int w = 0; w < ways(); ++w) {
    if (subtables_[w].empty()) continue;
    Slot& s = subtables_[w][bucket(w, key)];
    if (s.used && s.key == key) {
      s.value = value;
      return InsertResult::kUpdated;
    }
  }
  // Buckets hold one slot, so least-loaded is the leftmost empty candidate.
  for (int w = 0; w < ways(); ++w) {
    if (subtables_[w].empty()) continue;
    Slot& s = subtables_[w][bucket(w, key)];
    if (!s.used) {
      s = Slot{key, value, true};
      ++size_;
      return InsertResult::kInserted;
    }
  }

  Slot cur{key, value, true};
  std::vector<std::pair<int, std::size_t>> path;
  int came_from = -1;
  for (int kick = 0; kick < kMaxKicks; ++kick) {
    walk_state_ = splitmix64(walk_state_);
    int w = static_cast<int>(walk_state_ % ways());
    if (w == came_from || subtables_[w].empty()) {
      w = (w + 1) % ways();
      if (subtables_[w].empty()) continue;
    }
    const std::size_t i = bucket(w, cur.key);
    std::swap(cur, subtables_[w][i]);
    path.emplace_back(w, i);
    came_from = w;
    for (int w2 = 0; w2 < ways(); ++w2) {
      if (w2 == w || subtables_[w2].empty()) continue;
      Slot& s = subtables_[w2][bucket(w2, cur.key)];
      if (!s.used) {
        s = cur;
        ++size_;
        return InsertResult::kInserted;
      }
    }
  }
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    std::swap(cur, subtables_[it->first][it->second]);
  }
  return InsertResult::kFull;
}

bool DLeftHashTable::erase(std::uint64_t key) {
  for (int w = 0; w < ways(); ++w) {
    if (subtables_[w].empty()) continue;
    Slot& s = subtables_[w][bucket(w, key)];
    if (s.used && s.key == key) {
      s = Slot{};
      --size_;
      return true;
    }
  }
  return false;
}

std::vector<std::pair<std::uint64_t, NextHop>> DLeftHashTable::items() const {
  std::vector<std::pair<std::uint64_t, NextHop>> out;
  out.reserve(size_);
  for (const auto& t : subtables_) {
    for (const auto& s : t) {
      if (s.used) out.emplace_back(s.key, s.value);
    }
  }
  return out;
}

bool DLeftHashTable::rebuild(
    std::span<const std::pair<std::uint64_t, NextHop>> items,
    std::size_t capacity, std::uint64_t seed) {
  reset(capacity, ways(), seed);
  for (const auto& [k, v] : items) {
    if (insert(k, v) == InsertResult::kFull) return false;
  }
  return true;
}

DLeftHashTable DLeftHashTable::from_slots(
    std::uint64_t seed, std::vector<std::vector<Slot>> subtables) {
  std::size_t cap = 0;
  for (const auto& t : subtables) cap += t.size();
  DLeftHashTable table(cap, static_cast<int>(subtables.size()), seed);
  for (std::size_t w = 0; w < subtables.size(); ++w) {
    if (subtables[w].size() != table.subtables_[w].size()) {
      throw std::invalid_argument("d-left subtable geometry mismatch");
    }
  }
  table.subtables_ = std::move(subtables);
  for (const auto& t : table.subtables_) {
    for (const auto& s : t) table.size_ += s.used ? 1 : 0;
  }
  return table;
}

}  // namespace cramlens
