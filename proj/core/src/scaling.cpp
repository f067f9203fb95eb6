// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace cramlens {

namespace {

constexpr int kEnumerateLimit = 26;

// Adds `want` distinct new values of `free_bits` bits (not in `taken`).
std::vector<std::uint64_t> fresh_values(std::unordered_set<std::uint64_t>&
                                            taken,
                                        int free_bits, std::uint64_t want,
                                        std::mt19937_64& rng) {
  std::vector<std::uint64_t> out;
  if (want == 0) return out;
  const bool small = free_bits < 64;
  const std::uint64_t space = small ? std::uint64_t{1} << free_bits : 0;
  if (small && taken.size() + want > space) {
    throw std::invalid_argument("address space of length exhausted");
  }
  out.reserve(want);
  if (small && free_bits <= kEnumerateLimit && (taken.size() + want) * 2 > space) {
    std::vector<std::uint64_t> pool;
    pool.reserve(space - taken.size());
    for (std::uint64_t v = 0; v < space; ++v) {
      if (!taken.count(v)) pool.push_back(v);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(want);
    for (auto v : pool) taken.insert(v);
    return pool;
  }
  while (out.size() < want) {
    const std::uint64_t v = rng() & bits::low_mask(free_bits);
    if (taken.insert(v).second) out.push_back(v);
  }
  return out;
}

std::vector<NextHop> hop_alphabet(const Fib& fib) {
  std::set<std::uint32_t> ids;
  for (const auto& r : fib) ids.insert(r.hop.id);
  std::vector<NextHop> out;
  for (auto id : ids) out.push_back(NextHop{id});
  return out;
}

}  // namespace

Fib scale_by_length(const Fib& fib, double factor, std::uint64_t seed) {
  if (!(factor >= 1.0)) {
    throw std::invalid_argument("scaling factor must be >= 1");
  }
  const Family fam = fib.family();
  const auto hops = hop_alphabet(fib);
  std::vector<std::unordered_set<std::uint64_t>> taken(
      static_cast<std::size_t>(fam.width) + 1);
  for (const auto& r : fib) {
    taken[static_cast<std::size_t>(r.prefix.length())].insert(r.prefix.bits());
  }
  std::mt19937_64 rng(seed);
  std::vector<Route> routes(fib.begin(), fib.end());
  for (int len = 0; len <= fam.width; ++len) {
    auto& t = taken[static_cast<std::size_t>(len)];
    if (t.empty()) continue;
    const auto target = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(t.size()) * factor));
    if (target <= t.size()) continue;
    std::vector<std::uint64_t> vals;
    try {
      vals = fresh_values(t, len, target - t.size(), rng);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("length " + std::to_string(len) +
                                  " cannot hold " + std::to_string(target) +
                                  " prefixes");
    }
    std::uniform_int_distribution<std::size_t> pick(0, hops.size() - 1);
    for (auto v : vals) {
      routes.push_back({IpPrefix::from_bits(fam, v, len), hops[pick(rng)]});
    }
  }
  Fib out = Fib::from_routes(fam, std::move(routes), fib.hop_bits());
  out.set_default_hop(fib.default_hop());
  return out;
}

namespace {

void check_universe(const Fib& fib) {
  if (fib.family().width < 3) {
    throw std::invalid_argument("multiverse scaling needs width >= 3");
  }
  for (const auto& r : fib) {
    if (r.prefix.length() < 3 || r.prefix.first_bits(3) != 0) {
      throw std::invalid_argument("route " + r.prefix.to_string() +
                                  " is not inside the 000 universe");
    }
  }
}

Route in_universe(const Route& r, std::uint64_t u) {
  const Family fam = r.prefix.family();
  const Address v = r.prefix.value() | (u << (fam.width - 3));
  return {IpPrefix(fam, v, r.prefix.length()), r.hop};
}

}  // namespace

Fib multiverse_scale(const Fib& fib, int n_universes) {
  if (n_universes < 1 || n_universes > 8) {
    throw std::invalid_argument("universe count must be in 1..8");
  }
  check_universe(fib);
  std::vector<Route> routes;
  routes.reserve(fib.size() * static_cast<std::size_t>(n_universes));
  for (int u = 0; u < n_universes; ++u) {
    for (const auto& r : fib) {
      routes.push_back(in_universe(r, static_cast<std::uint64_t>(u)));
    }
  }
  Fib out = Fib::from_routes(fib.family(), std::move(routes), fib.hop_bits());
  out.set_default_hop(fib.default_hop());
  return out;
}

Fib multiverse_to_size(const Fib& fib, std::size_t target,
                       std::uint64_t seed) {
  check_universe(fib);
  if (fib.empty()) return fib;
  if (target > fib.size() * 8) {
    throw std::invalid_argument("target exceeds eight universes");
  }
  const std::size_t full = target / fib.size();
  const std::size_t part = target % fib.size();
  std::vector<Route> routes;
  routes.reserve(target);
  for (std::size_t u = 0; u < full; ++u) {
    for (const auto& r : fib) routes.push_back(in_universe(r, u));
  }
  if (part > 0) {
    std::vector<std::size_t> idx(fib.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(part);
    std::sort(idx.begin(), idx.end());
    const auto all = fib.routes();
    for (auto i : idx) routes.push_back(in_universe(all[i], full));
  }
  Fib out = Fib::from_routes(fib.family(), std::move(routes), fib.hop_bits());
  out.set_default_hop(fib.default_hop());
  return out;
}

Fib synthesize(const LengthHistogram& hist, Family family,
               std::uint32_t hop_count, std::uint64_t seed,
               std::optional<IpPrefix> under, int hop_bits) {
  if (hop_count == 0) throw std::invalid_argument("need at least one hop");
  const IpPrefix base = under.value_or(IpPrefix(family, 0, 0));
  if (!(base.family() == family)) {
    throw std::invalid_argument("`under` prefix has the wrong family");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, hop_count - 1);
  std::vector<Route> routes;
  for (std::size_t len = 0; len < hist.counts.size(); ++len) {
    const std::uint64_t want = hist.counts[len];
    if (want == 0) continue;
    const int L = static_cast<int>(len);
    if (L > family.width) {
      throw std::invalid_argument("histogram longer than family width");
    }
    if (L <= base.length()) {
      // Only one prefix of this length fits inside `base`.
      routes.push_back({IpPrefix::from_bits(family, base.first_bits(L), L),
                        NextHop{pick(rng)}});
      continue;
    }
    const int free_bits = L - base.length();
    std::unordered_set<std::uint64_t> taken;
    for (auto v : fresh_values(taken, free_bits, want, rng)) {
      const std::uint64_t b = (base.bits() << free_bits) | v;
      routes.push_back({IpPrefix::from_bits(family, b, L), NextHop{pick(rng)}});
    }
  }
  return Fib::from_routes(family, std::move(routes), hop_bits);
}

SweepRow sweep_row(Scheme scheme, const Fib& fib, const ChipSpec& chip,
                   const SchemeParams& params) {
  const CramProgram prog = scheme_program(scheme, fib, params);
  const RmtMapping m = map_program(prog, chip);
  SweepRow row;
  row.size = fib.size();
  row.tcam_blocks = m.total_blocks;
  row.sram_pages = m.total_pages;
  row.stages = m.stage_total;
  row.feasible = m.feasible;
  row.seed = params.seed;
  return row;
}

std::vector<SweepRow> sweep(Scheme scheme, const Fib& fib,
                            const std::vector<std::size_t>& sizes,
                            const ChipSpec& chip, const SchemeParams& params,
                            ScaleMode mode, std::uint64_t seed) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw std::invalid_argument("sweep sizes must be ascending");
  }
  std::vector<SweepRow> rows;
  for (auto size : sizes) {
    Fib scaled = fib;
    if (size != fib.size()) {
      if (mode == ScaleMode::kMultiverse) {
        scaled = multiverse_to_size(fib, size, seed);
      } else {
        if (fib.empty()) throw std::invalid_argument("cannot scale empty table");
        scaled = scale_by_length(
            fib, static_cast<double>(size) / static_cast<double>(fib.size()),
            seed);
      }
    }
    SweepRow row = sweep_row(scheme, scaled, chip, params);
    row.seed = seed;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> k_sweep(const Fib& fib, const std::vector<int>& ks,
                              const ChipSpec& chip, std::uint64_t seed) {
  std::vector<SweepRow> rows;
  for (int k : ks) {
    SchemeParams p;
    p.k = k;
    p.seed = seed;
    SweepRow row = sweep_row(Scheme::kBsic, fib, chip, p);
    row.k = k;
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  const bool with_k = !rows.empty() && rows.front().k.has_value();
  if (with_k) out << "k,";
  out << "size,tcam_blocks,sram_pages,stages,feasible,seed\n";
  for (const auto& r : rows) {
    if (with_k) out << r.k.value_or(0) << ',';
    out << r.size << ',' << r.tcam_blocks << ',' << r.sram_pages << ','
        << r.stages << ',' << (r.feasible ? "true" : "false") << ','
        << r.seed << '\n';
  }
}

}  // namespace cramlens
