// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/cram.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace cramlens {

void TableSpec::validate() const {
  if (max_entries < 1) {
    throw std::invalid_argument("table " + name + ": max_entries must be >= 1");
  }
  if (direct_indexed) {
    if (match_kind != MatchKind::kExact) {
      throw std::invalid_argument("table " + name +
                                  ": only exact tables can be direct-indexed");
    }
    if (key_bits < 64 && max_entries > (std::uint64_t{1} << key_bits)) {
      throw std::invalid_argument("table " + name +
                                  ": more rows than the key can address");
    }
  }
}

std::size_t CramProgram::add_step(std::optional<TableSpec> table,
                                  std::set<std::string> reads,
                                  std::set<std::string> writes) {
  if (table) table->validate();
  StepNode s;
  s.id = steps_.size();
  s.table = std::move(table);
  s.reads = std::move(reads);
  s.writes = std::move(writes);
  steps_.push_back(std::move(s));
  return steps_.back().id;
}

void CramProgram::add_edge(std::size_t from, std::size_t to) {
  if (from >= steps_.size() || to >= steps_.size()) {
    throw std::out_of_range("edge references an unknown step");
  }
  edges_.emplace_back(from, to);
}

std::vector<const TableSpec*> CramProgram::tables() const {
  std::vector<const TableSpec*> out;
  for (const auto& s : steps_) {
    if (s.table) out.push_back(&*s.table);
  }
  return out;
}

std::vector<std::size_t> CramProgram::topological_order() const {
  const std::size_t n = steps_.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (auto [u, v] : edges_) {
    succ[u].push_back(v);
    ++indegree[v];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>,
                      std::greater<std::size_t>>
      ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    auto u = ready.top();
    ready.pop();
    order.push_back(u);
    for (auto v : succ[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  if (order.size() != n) throw CycleError("step graph contains a cycle");
  return order;
}

std::uint64_t table_tcam_bits(const TableSpec& t) {
  // Only the value half of a ternary key is counted.
  return t.match_kind == MatchKind::kTernary ? t.max_entries * t.key_bits : 0;
}

std::uint64_t table_sram_bits(const TableSpec& t) {
  std::uint64_t bits = t.max_entries * t.data_bits;
  if (t.match_kind == MatchKind::kExact && !t.direct_indexed) {
    bits += t.max_entries * t.key_bits;
  }
  return bits;
}

std::uint64_t tcam_bits(const CramProgram& program) {
  std::uint64_t total = 0;
  for (const auto* t : program.tables()) total += table_tcam_bits(*t);
  return total;
}

std::uint64_t sram_bits(const CramProgram& program) {
  std::uint64_t total = 0;
  for (const auto* t : program.tables()) total += table_sram_bits(*t);
  return total;
}

std::uint64_t latency_steps(const CramProgram& program) {
  const auto order = program.topological_order();
  const auto& steps = program.steps();
  std::vector<std::vector<std::size_t>> pred(steps.size());
  for (auto [u, v] : program.edges()) pred[v].push_back(u);
  std::vector<std::uint64_t> depth(steps.size(), 0);
  std::uint64_t longest = 0;
  for (auto v : order) {
    std::uint64_t d = 1;
    for (auto u : pred[v]) d = std::max(d, depth[u] + 1);
    depth[v] = d;
    longest = std::max(longest, d);
  }
  return longest;
}

CramMetrics metrics(const CramProgram& program) {
  return {tcam_bits(program), sram_bits(program), latency_steps(program)};
}

std::vector<std::vector<bool>> reachability(const CramProgram& program) {
  const auto order = program.topological_order();
  const std::size_t n = program.steps().size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (auto [u, v] : program.edges()) succ[u].push_back(v);
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto u = *it;
    for (auto v : succ[u]) {
      reach[u][v] = true;
      for (std::size_t w = 0; w < n; ++w) {
        if (reach[v][w]) reach[u][w] = true;
      }
    }
  }
  return reach;
}

std::optional<DagViolation> validate_dag(const CramProgram& program) {
  std::vector<std::vector<bool>> reach;
  try {
    reach = reachability(program);
  } catch (const CycleError& e) {
    return DagViolation{0, 0, "", e.what()};
  }
  const auto& steps = program.steps();
  for (std::size_t u = 0; u < steps.size(); ++u) {
    for (const auto& r : steps[u].writes) {
      for (std::size_t v = 0; v < steps.size(); ++v) {
        if (v == u) continue;
        if (!steps[v].reads.contains(r) && !steps[v].writes.contains(r)) {
          continue;
        }
        if (!reach[u][v] && !reach[v][u]) {
          return DagViolation{u, v, r,
                              "steps " + std::to_string(u) + " and " +
                                  std::to_string(v) +
                                  " conflict on register '" + r +
                                  "' without an ordering path"};
        }
      }
    }
  }
  return std::nullopt;
}

nlohmann::json to_json(const TableSpec& t) {
  return {{"name", t.name},
          {"match_kind",
           t.match_kind == MatchKind::kTernary ? "ternary" : "exact"},
          {"key_bits", t.key_bits},
          {"max_entries", t.max_entries},
          {"data_bits", t.data_bits},
          {"direct_indexed", t.direct_indexed},
          {"default_value", t.default_value},
          {"tcam_bits", table_tcam_bits(t)},
          {"sram_bits", table_sram_bits(t)}};
}

TableSpec table_from_json(const nlohmann::json& j) {
  TableSpec t;
  t.name = j.at("name").get<std::string>();
  const auto kind = j.at("match_kind").get<std::string>();
  if (kind == "ternary") {
    t.match_kind = MatchKind::kTernary;
  } else if (kind == "exact") {
    t.match_kind = MatchKind::kExact;
  } else {
    throw std::invalid_argument("unknown match kind '" + kind + "'");
  }
  t.key_bits = j.at("key_bits").get<std::uint64_t>();
  t.max_entries = j.at("max_entries").get<std::uint64_t>();
  t.data_bits = j.at("data_bits").get<std::uint64_t>();
  t.direct_indexed = j.value("direct_indexed", false);
  t.default_value = j.value("default_value", std::uint64_t{0});
  t.validate();
  return t;
}

nlohmann::json program_to_json(const CramProgram& program) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : program.steps()) {
    nlohmann::json js = {{"id", s.id},
                         {"reads", s.reads},
                         {"writes", s.writes},
                         {"table", nullptr}};
    if (s.table) js["table"] = to_json(*s.table);
    steps.push_back(std::move(js));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : program.edges()) edges.push_back({u, v});
  const auto m = metrics(program);
  return {{"steps", steps},
          {"edges", edges},
          {"metrics",
           {{"tcam_bits", m.tcam_bits},
            {"sram_bits", m.sram_bits},
            {"steps", m.steps},
            {"tcam_mib", m.tcam_bits / kBitsPerMiB},
            {"sram_mib", m.sram_bits / kBitsPerMiB}}},
          {"notes", program.notes}};
}

CramProgram program_from_json(const nlohmann::json& j) {
  CramProgram p;
  const auto& steps = j.at("steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& js = steps[i];
    if (js.value("id", i) != i) {
      throw std::invalid_argument("step ids must be dense and ordered");
    }
    std::optional<TableSpec> table;
    if (js.contains("table") && !js["table"].is_null()) {
      table = table_from_json(js["table"]);
    }
    p.add_step(std::move(table),
               js.value("reads", std::set<std::string>{}),
               js.value("writes", std::set<std::string>{}));
  }
  for (const auto& e : j.at("edges")) {
    p.add_edge(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  }
  p.notes = j.value("notes", std::vector<std::string>{});
  return p;
}

}  // namespace cramlens
