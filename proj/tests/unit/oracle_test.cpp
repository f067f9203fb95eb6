// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "cramlens/fib.hpp"
#include "cramlens/oracle.hpp"
#include "fib_gen.hpp"

namespace cramlens {
namespace {

Fixture table1() {
  return load_fib_file(std::string(CRAMLENS_FIXTURE_DIR) + "/table1.fib");
}

TEST(Oracle, EmptyFibReturnsDefault) {
  Fib f(Family::ipv4());
  f.set_default_hop(NextHop{9});
  auto t = build_trie(f);
  EXPECT_EQ(t.node_count(), 1u);
  EXPECT_EQ(t.lookup(0x01020304u), NextHop{9});
  EXPECT_EQ(scan_lookup(f, 0x01020304u), NextHop{9});
}

TEST(Oracle, TableOneHopNodes) {
  auto t = build_trie(table1().fib);
  EXPECT_EQ(t.hop_count(), 8u);
}

TEST(Oracle, TableOneLookups) {
  auto fx = table1();
  auto t = build_trie(fx.fib);
  struct Case {
    Address addr;
    NextHop want;
  } cases[] = {{0b10010101, fx.hop("D")},
               {0b10010100, fx.hop("A")},
               {0b00000000, NextHop::none()},
               {0b01110000, fx.hop("B")}};
  for (const auto& c : cases) {
    EXPECT_EQ(t.lookup(c.addr), c.want);
    EXPECT_EQ(scan_lookup(fx.fib, c.addr), c.want);
  }
}

TEST(Oracle, TrieAgreesWithScan) {
  for (auto fam : {Family::ipv4(), Family::ipv6()}) {
    Fib f = testing::random_fib(fam, 1000, 5);
    auto t = build_trie(f);
    EXPECT_EQ(t.hop_count(), f.size());
    for (auto a : testing::random_addresses(f, 100000, 6)) {
      ASSERT_EQ(t.lookup(a), scan_lookup(f, a));
    }
  }
}

TEST(Oracle, AgreesOnLargeTable) {
  Fib f = testing::random_fib(Family::ipv4(), 50000, 8);
  auto t = build_trie(f);
  for (auto a : testing::random_addresses(f, 2000, 9)) {
    ASSERT_EQ(t.lookup(a), scan_lookup(f, a));
  }
}

TEST(Oracle, InsertThenEraseRestores) {
  Fib f = testing::random_fib(Family::toy(8), 40, 3);
  auto t = build_trie(f);
  std::vector<NextHop> before;
  for (Address a = 0; a < 256; ++a) before.push_back(t.lookup(a));
  const auto extra = IpPrefix::from_bits(Family::toy(8), 0b1011, 4);
  const bool had = f.find(extra).has_value();
  if (!had) {
    t.insert(extra, NextHop{77});
    EXPECT_TRUE(t.erase(extra));
  }
  for (Address a = 0; a < 256; ++a) EXPECT_EQ(t.lookup(a), before[a]);
}

}  // namespace
}  // namespace cramlens
