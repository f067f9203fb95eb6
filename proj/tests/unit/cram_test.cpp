// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "cramlens/cram.hpp"

namespace cramlens {
namespace {

TableSpec ternary(std::uint64_t n, std::uint64_t k, std::uint64_t d) {
  TableSpec t;
  t.name = "t";
  t.match_kind = MatchKind::kTernary;
  t.max_entries = n;
  t.key_bits = k;
  t.data_bits = d;
  return t;
}

TableSpec exact(std::uint64_t n, std::uint64_t k, std::uint64_t d,
                bool direct = false) {
  TableSpec t;
  t.name = "e";
  t.max_entries = n;
  t.key_bits = k;
  t.data_bits = d;
  t.direct_indexed = direct;
  return t;
}

TEST(CramMetrics, TernaryKeyBits) {
  CramProgram p;
  p.add_step(ternary(1000, 32, 0), {}, {"hop"});
  EXPECT_EQ(tcam_bits(p), 32000u);
  EXPECT_EQ(sram_bits(p), 0u);
}

TEST(CramMetrics, NoTernaryTables) {
  CramProgram p;
  p.add_step(exact(10, 4, 8), {}, {"x"});
  EXPECT_EQ(tcam_bits(p), 0u);
}

TEST(CramMetrics, DirectIndexedStoresDataOnly) {
  EXPECT_EQ(table_sram_bits(exact(1024, 10, 8, true)), 8192u);
}

TEST(CramMetrics, HashedStoresKeyAndData) {
  EXPECT_EQ(table_sram_bits(exact(1000, 25, 8)), 33000u);
}

TEST(CramMetrics, TernaryDataIsSram) {
  EXPECT_EQ(table_sram_bits(ternary(1000, 32, 8)), 8000u);
  EXPECT_EQ(table_tcam_bits(ternary(1000, 32, 8)), 32000u);
}

TEST(CramProgram, RejectsBadTables) {
  CramProgram p;
  EXPECT_ANY_THROW(p.add_step(exact(0, 4, 1), {}, {}));
  EXPECT_ANY_THROW(p.add_step(exact(17, 4, 1, true), {}, {}));
  auto t = ternary(4, 4, 1);
  t.direct_indexed = true;
  EXPECT_ANY_THROW(p.add_step(t, {}, {}));
}

TEST(Latency, SingleStep) {
  CramProgram p;
  p.add_step(std::nullopt, {}, {});
  EXPECT_EQ(latency_steps(p), 1u);
}

TEST(Latency, LongestPath) {
  CramProgram p;
  for (int i = 0; i < 5; ++i) p.add_step(std::nullopt, {}, {});
  p.add_edge(0, 1);
  p.add_edge(1, 2);
  p.add_edge(0, 3);
  p.add_edge(3, 2);
  EXPECT_EQ(latency_steps(p), 3u);
  p.add_edge(2, 4);
  EXPECT_EQ(latency_steps(p), 4u);
}

TEST(Latency, CycleThrows) {
  CramProgram p;
  p.add_step(std::nullopt, {}, {});
  p.add_step(std::nullopt, {}, {});
  p.add_edge(0, 1);
  p.add_edge(1, 0);
  EXPECT_THROW(latency_steps(p), CycleError);
  EXPECT_TRUE(validate_dag(p).has_value());
}

TEST(ValidateDag, DisjointParallelIsFine) {
  CramProgram p;
  p.add_step(std::nullopt, {"a"}, {"b"});
  p.add_step(std::nullopt, {"c"}, {"d"});
  EXPECT_FALSE(validate_dag(p).has_value());
}

TEST(ValidateDag, UnorderedWriteReadIsReported) {
  CramProgram p;
  p.add_step(std::nullopt, {}, {"r"});
  p.add_step(std::nullopt, {"r"}, {});
  auto v = validate_dag(p);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->first, 0u);
  EXPECT_EQ(v->second, 1u);
  EXPECT_EQ(v->reg, "r");
  p.add_edge(0, 1);
  EXPECT_FALSE(validate_dag(p).has_value());
}

TEST(ValidateDag, WriteWriteNeedsOrder) {
  CramProgram p;
  p.add_step(std::nullopt, {}, {"r"});
  p.add_step(std::nullopt, {}, {"r"});
  EXPECT_TRUE(validate_dag(p).has_value());
}

// Random DAG: metrics survive relabeling, adding edges never lowers
// latency, adding tables never lowers memory.
TEST(CramProperties, RelabelAndMonotone) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 2 + rng() % 10;
    CramProgram p;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 2) {
        p.add_step(ternary(1 + rng() % 100, 1 + rng() % 40, rng() % 9), {}, {});
      } else {
        p.add_step(exact(1 + rng() % 100, 1 + rng() % 40, rng() % 9), {}, {});
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        if (rng() % 3 == 0) edges.emplace_back(u, v);
      }
    }
    for (auto [u, v] : edges) p.add_edge(u, v);
    const CramMetrics m = metrics(p);

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = n - 1 - i;
    CramProgram q;
    std::vector<std::size_t> inverse(n);
    for (std::size_t i = 0; i < n; ++i) inverse[perm[i]] = i;
    for (std::size_t i = 0; i < n; ++i) {
      q.add_step(p.steps()[inverse[i]].table, {}, {});
    }
    for (auto [u, v] : edges) q.add_edge(perm[u], perm[v]);
    EXPECT_EQ(metrics(q), m);

    CramProgram more = p;
    const std::size_t u = rng() % (n - 1);
    more.add_edge(u, u + 1 + rng() % (n - 1 - u));
    EXPECT_GE(latency_steps(more), m.steps);
    more.add_step(ternary(5, 5, 5), {}, {});
    EXPECT_GE(tcam_bits(more), m.tcam_bits);
    EXPECT_GE(sram_bits(more), m.sram_bits);
  }
}

TEST(CramJson, RoundTrip) {
  CramProgram p;
  auto a = p.add_step(ternary(12, 8, 3), {"addr"}, {"x"});
  auto b = p.add_step(exact(64, 6, 2, true), {"x"}, {"hop"});
  p.add_edge(a, b);
  p.notes.push_back("n");
  auto j = program_to_json(p);
  EXPECT_EQ(j["metrics"]["tcam_bits"], 96);
  CramProgram back = program_from_json(j);
  EXPECT_EQ(metrics(back), metrics(p));
  EXPECT_EQ(back.edges(), p.edges());
  EXPECT_EQ(back.notes, p.notes);
  EXPECT_EQ(program_to_json(back), j);
}

}  // namespace
}  // namespace cramlens
