// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic routing tables for scalability curves: per-length scaling,
// multiverse cloning of IPv6 tables, and sweeps that map each size onto a
// chip.

#ifndef CRAMLENS_SCALING_HPP_
#define CRAMLENS_SCALING_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cramlens/fib.hpp"
#include "cramlens/rmt.hpp"
#include "cramlens/schemes.hpp"

namespace cramlens {

// Keeps every route and adds uniformly random new prefixes per length until
// each count reaches round(count * factor). New hops are drawn from the
// table's own hop set. Throws std::invalid_argument when a length runs out
// of address space or factor < 1.
Fib scale_by_length(const Fib& fib, double factor, std::uint64_t seed);

// Clones the table into n universes by rewriting the top three bits.
// Every route must start with 000 and be at least 3 bits long.
Fib multiverse_scale(const Fib& fib, int n_universes);

// Multiverse scaling to an exact size: whole universes, then a seeded
// random subset of the routes in the next universe.
Fib multiverse_to_size(const Fib& fib, std::size_t target,
                       std::uint64_t seed);

// Random table with the given length histogram, all prefixes inside
// `under`, hops uniform in [0, hop_count).
Fib synthesize(const LengthHistogram& hist, Family family,
               std::uint32_t hop_count, std::uint64_t seed,
               std::optional<IpPrefix> under = std::nullopt,
               int hop_bits = kDefaultHopBits);

enum class ScaleMode { kByLength, kMultiverse };

struct SweepRow {
  std::size_t size = 0;
  std::uint64_t tcam_blocks = 0;
  std::uint64_t sram_pages = 0;
  int stages = 0;
  bool feasible = true;
  std::uint64_t seed = 0;
  std::optional<int> k;  // k-sweep rows only
};

SweepRow sweep_row(Scheme scheme, const Fib& fib, const ChipSpec& chip,
                   const SchemeParams& params);

// One row per target size. A size equal to the input size maps the input
// unchanged. Sizes must be ascending.
std::vector<SweepRow> sweep(Scheme scheme, const Fib& fib,
                            const std::vector<std::size_t>& sizes,
                            const ChipSpec& chip, const SchemeParams& params,
                            ScaleMode mode, std::uint64_t seed);

// BSIC on one table for each slice size.
std::vector<SweepRow> k_sweep(const Fib& fib, const std::vector<int>& ks,
                              const ChipSpec& chip, std::uint64_t seed);

// size,tcam_blocks,sram_pages,stages,feasible,seed (k first when present).
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace cramlens

#endif  // CRAMLENS_SCALING_HPP_
