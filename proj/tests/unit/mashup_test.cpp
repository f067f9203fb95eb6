// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <functional>
#include <numeric>

#include "cramlens/mashup.hpp"
#include "cramlens/oracle.hpp"
#include "fib_gen.hpp"

namespace cramlens {
namespace {

const std::string kFixtures = CRAMLENS_FIXTURE_DIR;

MashupConfig plan(const std::string& s) {
  MashupConfig c;
  c.plan = StridePlan::parse(s);
  return c;
}

void expect_exhaustive(const MashupStructure& s, const Fib& fib) {
  const auto t = build_trie(fib);
  for (Address a = 0; a < (Address{1} << fib.family().width); ++a) {
    ASSERT_EQ(s.lookup(a), t.lookup(a)) << "addr " << a;
  }
}

// Every composition of `width` into positive parts.
std::vector<std::string> all_plans(int width) {
  std::vector<std::string> out;
  for (std::uint32_t cuts = 0; cuts < (1u << (width - 1)); ++cuts) {
    std::string s;
    int run = 1;
    for (int i = 0; i < width - 1; ++i) {
      if (cuts >> i & 1) {
        s += std::to_string(run) + "-";
        run = 1;
      } else {
        ++run;
      }
    }
    out.push_back(s + std::to_string(run));
  }
  return out;
}

TEST(StridePlan, ParseAndValidate) {
  auto p = StridePlan::parse("16-4-4-8");
  EXPECT_EQ(p.strides, (std::vector<int>{16, 4, 4, 8}));
  EXPECT_EQ(p.to_string(), "16-4-4-8");
  EXPECT_EQ(p.start(2), 20);
  EXPECT_NO_THROW(p.validate(Family::ipv4()));
  EXPECT_THROW(p.validate(Family::ipv6()), BuildError);
  EXPECT_THROW(StridePlan::parse("16--4"), std::invalid_argument);
  EXPECT_THROW(StridePlan::parse("a-4"), std::invalid_argument);
  EXPECT_THROW(StridePlan::parse("0-32"), std::invalid_argument);
  EXPECT_EQ(StridePlan::defaults_for(Family::ipv6()).to_string(),
            "20-12-16-16");
  EXPECT_EQ(all_plans(8).size(), 128u);
}

TEST(MashupFigure, RootChildrenAndKind) {
  auto fx = load_fib_file(kFixtures + "/fig3.fib");
  auto s = MashupStructure::build(fx.fib, plan("2-2"));
  const auto& root = s.nodes()[s.root()];
  std::vector<std::uint64_t> slots;
  for (const auto& [slot, child] : root.children) slots.push_back(slot);
  EXPECT_EQ(slots, (std::vector<std::uint64_t>{0b00, 0b10, 0b11}));
  // Formula output: 4 expanded slots <= 3 * 3 entries.
  EXPECT_EQ(s.node_kind(s.root()), NodeKind::kSram);
  EXPECT_EQ(s.lookup(0b1100), fx.hop("P3"));
  EXPECT_EQ(s.lookup(0b0100), NextHop::none());
  EXPECT_EQ(s.lookup(0b0001), fx.hop("P1"));
  expect_exhaustive(s, fx.fib);
}

TEST(MashupFigure, ThreeBitUniverse) {
  auto fx = load_fib_file(kFixtures + "/fig3.fib");
  Fib f(Family::toy(3));
  for (const auto& r : fx.fib) {
    f.assign(IpPrefix::from_bits(Family::toy(3), r.prefix.bits(), 3), r.hop);
  }
  auto s = MashupStructure::build(f, plan("2-1"));
  EXPECT_EQ(s.nodes()[s.root()].children.size(), 3u);
  expect_exhaustive(s, f);
}

TEST(MashupBuild, DefaultRouteFillsRoot) {
  Fib f(Family::toy(8));
  f.assign(IpPrefix(Family::toy(8), 0, 0), NextHop{4});
  auto s = MashupStructure::build(f, plan("3-5"));
  for (const auto& e : s.expanded_entries(s.root())) EXPECT_EQ(e.hop, NextHop{4});
  expect_exhaustive(s, f);
}

TEST(MashupBuild, AllSramHasNoTcam) {
  Fib f(Family::toy(2));
  f.assign(IpPrefix(Family::toy(2), 0, 0), NextHop{1});
  auto s = MashupStructure::build(f, plan("1-1"));
  EXPECT_EQ(tcam_bits(s.to_program()), 0u);
}

TEST(Hybridize, Formula) {
  EXPECT_EQ(hybridize(2, 3), NodeKind::kSram);
  EXPECT_EQ(hybridize(4, 1), NodeKind::kTcam);
  EXPECT_EQ(hybridize(4, 16), NodeKind::kSram);
  EXPECT_EQ(hybridize(4, 5), NodeKind::kTcam);
  EXPECT_EQ(hybridize(4, 6), NodeKind::kSram);
  // Chosen kind never costs more under the 3:1 weighting.
  for (int s = 1; s <= 16; ++s) {
    for (std::uint64_t e = 1; e <= 200; ++e) {
      const std::uint64_t sram = std::uint64_t{1} << s;
      const std::uint64_t tcam = 3 * e;
      const auto k = hybridize(s, e);
      EXPECT_LE(k == NodeKind::kSram ? sram : tcam, std::max(sram, tcam));
      EXPECT_EQ(k == NodeKind::kSram, sram <= tcam);
    }
  }
}

TEST(Coalesce, Examples) {
  using G = std::vector<std::vector<std::size_t>>;
  EXPECT_EQ(coalesce({1, 1}, 512), (G{{0, 1}}));
  EXPECT_EQ(coalesce({7}, 512), (G{{0}}));
  auto g = coalesce({100, 40, 30, 20, 10}, 128);
  EXPECT_EQ(g, (G{{0, 4}, {1, 3, 2}}));
  EXPECT_TRUE(coalesce({}, 8).empty());
}

TEST(Coalesce, ConservesAndRespectsBudget) {
  std::mt19937_64 rng(1);
  for (int round = 0; round < 200; ++round) {
    std::vector<std::uint64_t> sizes(1 + rng() % 40);
    for (auto& s : sizes) s = rng() % 700;
    const std::uint64_t unit = 1 + rng() % 512;
    auto groups = coalesce(sizes, unit);
    std::vector<int> seen(sizes.size(), 0);
    for (const auto& g : groups) {
      std::uint64_t used = 0;
      for (auto i : g) {
        ++seen[i];
        used += sizes[i];
      }
      const std::uint64_t seed = std::max<std::uint64_t>(sizes[g[0]], 1);
      EXPECT_LE(used, (seed + unit - 1) / unit * unit);
    }
    for (int c : seen) EXPECT_EQ(c, 1);
  }
}

TEST(ChooseStrides, ReferenceMixes) {
  EXPECT_EQ(choose_strides(testing::v4_reference_histogram(), 32).to_string(),
            "16-4-4-8");
  EXPECT_EQ(choose_strides(testing::v6_reference_histogram(), 64).to_string(),
            "20-12-16-16");
}

TEST(ChooseStrides, SpikesAt16_20_24) {
  LengthHistogram h;
  h.counts.assign(33, 1);
  h.counts[16] = 50;
  h.counts[20] = 80;
  h.counts[24] = 500;
  EXPECT_EQ(choose_strides(h, 32).to_string(), "16-4-4-8");
}

TEST(ChooseStrides, UniformSplitsAtMedian) {
  LengthHistogram h;
  h.counts.assign(9, 10);
  // Cumulative mass reaches half at length 4.
  EXPECT_EQ(choose_strides(h, 8, 2).to_string(), "4-4");
}

TEST(ChooseStrides, SingleLength) {
  Fib f(Family::ipv4());
  for (std::uint32_t i = 0; i < 50; ++i) {
    f.assign(IpPrefix(Family::ipv4(), (0x0a0000u + i) << 8, 24), NextHop{1});
  }
  auto p = choose_strides(f);
  EXPECT_EQ(p.total(), 32);
  EXPECT_EQ(p.start(p.strides.size() - 1), 24);
}

TEST(MashupLookup, ExhaustiveEveryPlan) {
  auto t1 = load_fib_file(kFixtures + "/table1.fib").fib;
  std::vector<Fib> fibs{t1};
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    fibs.push_back(testing::random_fib(Family::toy(8), 20 + seed * 20, seed));
  }
  for (const auto& f : fibs) {
    for (const auto& p : all_plans(8)) {
      auto s = MashupStructure::build(f, plan(p));
      expect_exhaustive(s, f);
      EXPECT_EQ(latency_steps(s.to_program()), s.config().plan.strides.size());
    }
  }
  auto fig = load_fib_file(kFixtures + "/fig3.fib").fib;
  for (const auto& p : all_plans(4)) {
    expect_exhaustive(MashupStructure::build(fig, plan(p)), fig);
  }
}

TEST(MashupLookup, RandomV4AndV6) {
  for (auto fam : {Family::ipv4(), Family::ipv6()}) {
    Fib f = testing::random_fib(fam, 10000, 51);
    auto s = MashupStructure::build(f, MashupConfig::defaults_for(fam));
    auto t = build_trie(f);
    for (auto a : testing::random_addresses(f, 20000, 52)) {
      ASSERT_EQ(s.lookup(a), t.lookup(a));
    }
  }
}

TEST(MashupCoalescing, EntryConservationAndTags) {
  Fib f = testing::random_fib(Family::ipv4(), 20000, 61);
  auto s = MashupStructure::build(f, MashupConfig::defaults_for(f.family()));
  std::vector<std::uint64_t> node_entries(s.levels().size(), 0);
  std::vector<std::uint64_t> sram_nodes(s.levels().size(), 0);
  std::uint64_t installed = 0;
  for (std::uint32_t id = 0; id < s.nodes().size(); ++id) {
    const auto& n = s.nodes()[id];
    if (!n.alive) continue;
    installed += n.routes.size();
    const auto l = static_cast<std::size_t>(n.level);
    if (s.node_kind(id) == NodeKind::kTcam) {
      node_entries[l] += s.ternary_entries(id).size();
    } else {
      ++sram_nodes[l];
    }
  }
  EXPECT_EQ(installed, f.size());
  auto stats = s.level_stats();
  for (std::size_t l = 0; l < stats.size(); ++l) {
    EXPECT_EQ(stats[l].tcam_entries, node_entries[l]) << l;
    EXPECT_EQ(stats[l].sram_rows, sram_nodes[l] << stats[l].stride) << l;
    for (const auto& t : s.levels()[l].tcam) {
      EXPECT_LE(t.members.size(), std::size_t{1} << t.tag_width);
      EXPECT_EQ(t.tag_width, bits::ceil_log2(t.members.size()));
    }
    for (const auto& t : s.levels()[l].sram) {
      EXPECT_EQ(t.tag_width, bits::ceil_log2(t.members.size()));
    }
  }
}

TEST(MashupProgram, ToyTcamBitsRecount) {
  auto f = load_fib_file(kFixtures + "/table1.fib").fib;
  auto s = MashupStructure::build(f, plan("4-4"));
  std::uint64_t want = 0;
  for (std::size_t l = 0; l < s.levels().size(); ++l) {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    for (const auto& t : s.levels()[l].tcam) {
      n += t.entries();
      if (t.entries()) {
        k = std::max<std::uint64_t>(k, t.tag_width + s.config().plan.strides[l]);
      }
    }
    want += n * k;
  }
  EXPECT_EQ(tcam_bits(s.to_program()), want);
  EXPECT_FALSE(validate_dag(s.to_program()).has_value());
}

TEST(MashupProgram, FourStrides) {
  Fib f = testing::random_fib(Family::ipv4(), 5000, 71);
  auto s = MashupStructure::build(f, plan("16-4-4-8"));
  EXPECT_EQ(latency_steps(s.to_program()), 4u);
}

TEST(MashupUpdate, HopChangeReachesExpandedSlots) {
  auto fx = load_fib_file(kFixtures + "/fig3.fib");
  auto s = MashupStructure::build(fx.fib, plan("3-1"));
  const auto p2 = IpPrefix::from_bits(Family::toy(4), 0b100, 3);
  s.update(UpdateOp::kChange, {p2, fx.hop("P4")});
  fx.fib.assign(p2, fx.hop("P4"));
  expect_exhaustive(s, fx.fib);
  EXPECT_EQ(s.lookup(0b1001), fx.hop("P4"));
}

TEST(MashupUpdate, InsertDeleteIdentityAndErrors) {
  auto f = load_fib_file(kFixtures + "/table1.fib").fib;
  for (const auto& p : {std::string("2-3-3"), std::string("8"),
                        std::string("1-1-1-1-1-1-1-1")}) {
    auto s = MashupStructure::build(f, plan(p));
    const auto extra = IpPrefix::from_bits(Family::toy(8), 0b1110111, 7);
    s.update(UpdateOp::kInsert, {extra, NextHop{9}});
    EXPECT_EQ(s.lookup(0b11101110), NextHop{9});
    s.update(UpdateOp::kDelete, {extra, NextHop{9}});
    expect_exhaustive(s, f);
    EXPECT_THROW(s.update(UpdateOp::kDelete, {extra, NextHop{9}}), UpdateError);
    EXPECT_THROW(s.update(UpdateOp::kInsert, {f.routes()[0].prefix, NextHop{1}}),
                 UpdateError);
  }
}

TEST(MashupUpdate, ChurnMatchesOracle) {
  for (const auto& p : {std::string("4-4-4"), std::string("6-6"),
                        std::string("2-5-5")}) {
    Fib f = testing::random_fib(Family::toy(12), 200, 77);
    auto s = MashupStructure::build(f, plan(p));
    for (const auto& op : testing::random_churn(f, 300, 78, 16)) {
      s.update(op.op, op.route);
    }
    expect_exhaustive(s, f);
    // A fresh build of the final table agrees as well.
    auto fresh = MashupStructure::build(f, plan(p));
    for (Address a = 0; a < 4096; ++a) ASSERT_EQ(fresh.lookup(a), s.lookup(a));
  }
}

TEST(MashupJson, RoundTrip) {
  Fib f = testing::random_fib(Family::toy(10), 150, 5);
  auto s = MashupStructure::build(f, plan("3-3-4"));
  auto back = MashupStructure::from_json(s.to_json());
  EXPECT_EQ(back.to_json(), s.to_json());
  for (Address a = 0; a < 1024; ++a) ASSERT_EQ(back.lookup(a), s.lookup(a));
}

TEST(MashupCorrupt, MismatchIsVisible) {
  auto fx = load_fib_file(kFixtures + "/fig3.fib");
  auto s = MashupStructure::build(fx.fib, plan("2-2"));
  const auto child = s.nodes()[s.root()].children.at(0b11);
  s.corrupt_node(child, fx.hop("P1"));
  EXPECT_EQ(s.lookup(0b1100), fx.hop("P1"));
}

}  // namespace
}  // namespace cramlens
