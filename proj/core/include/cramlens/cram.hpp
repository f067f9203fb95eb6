// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// Abstract CAM+RAM program: lookup tables attached to steps of a dependency
// DAG. Only what the space/time metrics need is modeled. Statement bodies
// appear as the register sets they read and write.

#ifndef CRAMLENS_CRAM_HPP_
#define CRAMLENS_CRAM_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cramlens {

enum class MatchKind { kExact, kTernary };

struct TableSpec {
  std::string name;
  MatchKind match_kind = MatchKind::kExact;
  std::uint64_t key_bits = 0;
  std::uint64_t max_entries = 1;
  std::uint64_t data_bits = 0;
  // Key is used as the row address and not stored. Rows are allocated up
  // to max_entries, which may be below 2^key_bits for pointer-indexed
  // tables (see DESIGN note in README).
  bool direct_indexed = false;
  std::uint64_t default_value = 0;

  // Throws std::invalid_argument on a malformed spec.
  void validate() const;
};

struct StepNode {
  std::size_t id = 0;
  std::optional<TableSpec> table;
  std::set<std::string> reads;
  std::set<std::string> writes;
};

struct CramMetrics {
  std::uint64_t tcam_bits = 0;
  std::uint64_t sram_bits = 0;
  std::uint64_t steps = 0;
  friend bool operator==(const CramMetrics&, const CramMetrics&) = default;
};

class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CramProgram {
 public:
  // Appends a step and returns its id (ids are dense, in insertion order).
  std::size_t add_step(std::optional<TableSpec> table,
                       std::set<std::string> reads,
                       std::set<std::string> writes);
  void add_edge(std::size_t from, std::size_t to);

  const std::vector<StepNode>& steps() const { return steps_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }
  std::vector<const TableSpec*> tables() const;

  // Kahn order, smallest id first among ready steps. Throws CycleError.
  std::vector<std::size_t> topological_order() const;

  // Free-form notes carried into reports (modeling assumptions).
  std::vector<std::string> notes;

 private:
  std::vector<StepNode> steps_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

std::uint64_t tcam_bits(const CramProgram& program);
std::uint64_t sram_bits(const CramProgram& program);
std::uint64_t table_tcam_bits(const TableSpec& t);
std::uint64_t table_sram_bits(const TableSpec& t);
// Node count of the longest directed path. Throws CycleError.
std::uint64_t latency_steps(const CramProgram& program);
CramMetrics metrics(const CramProgram& program);

struct DagViolation {
  std::size_t first = 0;
  std::size_t second = 0;
  std::string reg;  // empty for a cycle
  std::string message;
};

// Empty when every conflicting register access is ordered by a path.
std::optional<DagViolation> validate_dag(const CramProgram& program);

// Reachability matrix: reach[u][v] iff a directed path u -> v exists.
std::vector<std::vector<bool>> reachability(const CramProgram& program);

nlohmann::json to_json(const TableSpec& t);
TableSpec table_from_json(const nlohmann::json& j);
// Tables, steps, edges, metrics and notes.
nlohmann::json program_to_json(const CramProgram& program);
CramProgram program_from_json(const nlohmann::json& j);

// Unit conversions used in reports.
inline constexpr double kBitsPerMiB = 8.0 * 1024.0 * 1024.0;

}  // namespace cramlens

#endif  // CRAMLENS_CRAM_HPP_
