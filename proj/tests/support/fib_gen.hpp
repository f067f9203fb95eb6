// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// Random routing tables and address streams for property tests.

#ifndef CRAMLENS_TESTS_FIB_GEN_HPP_
#define CRAMLENS_TESTS_FIB_GEN_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "cramlens/fib.hpp"

namespace cramlens::testing {

// Length mix of a full IPv4 table (Sep 2023 shape), scaled to `total`.
LengthHistogram v4_reference_histogram(std::uint64_t total = 930000);
// Length mix of a full IPv6 table (Sep 2023 shape), scaled to `total`.
LengthHistogram v6_reference_histogram(std::uint64_t total = 190000);

struct GenOptions {
  std::uint32_t hop_count = 16;
  // Share of routes created by extending an existing route, so that
  // nesting is common.
  double nested_share = 0.3;
  int hop_bits = kDefaultHopBits;
};

// v4: reference length mix; v6: reference mix under 2000::/3;
// toy: lengths uniform in 0..width.
Fib random_fib(Family family, std::size_t routes, std::uint64_t seed,
               const GenOptions& opts = {});

// Half the addresses fall inside a random route, half are uniform.
std::vector<Address> random_addresses(const Fib& fib, std::size_t count,
                                      std::uint64_t seed);

// Random insert/delete/change operations valid against the evolving table.
struct Op {
  UpdateOp op;
  Route route;
};
std::vector<Op> random_churn(Fib& fib, std::size_t count, std::uint64_t seed,
                             std::uint32_t hop_count = 16);

}  // namespace cramlens::testing

#endif  // CRAMLENS_TESTS_FIB_GEN_HPP_
