// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// Placement of a CramProgram on an RMT-style pipeline: each table is cut
// into TCAM blocks and SRAM pages, and steps are assigned to stages in
// dependency order with per-stage budgets.

#ifndef CRAMLENS_RMT_HPP_
#define CRAMLENS_RMT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cramlens/cram.hpp"
#include "cramlens/fib.hpp"
#include "json.hpp"

namespace cramlens {

struct ChipSpec {
  std::string name = "ideal_rmt";
  int tcam_block_width = 44;
  int tcam_block_entries = 512;
  int sram_page_width = 128;
  int sram_page_entries = 1024;
  int blocks_per_stage = 24;
  int pages_per_stage = 80;
  int stage_count = 20;
  double sram_utilization = 1.0;

  static ChipSpec ideal_rmt() { return {}; }
  // Same geometry, half of each SRAM word usable.
  static ChipSpec tofino2_like();

  std::uint64_t page_bits() const {
    return static_cast<std::uint64_t>(sram_page_width) *
           static_cast<std::uint64_t>(sram_page_entries);
  }
  std::uint64_t total_blocks() const {
    return static_cast<std::uint64_t>(blocks_per_stage) *
           static_cast<std::uint64_t>(stage_count);
  }
  std::uint64_t total_pages() const {
    return static_cast<std::uint64_t>(pages_per_stage) *
           static_cast<std::uint64_t>(stage_count);
  }
  void validate() const;

  // key=value lines; '#' comments. Unknown keys are an error.
  static ChipSpec parse(std::istream& in);
  static ChipSpec parse(const std::string& text);
  static ChipSpec load(const std::string& path);
  // Canonical key=value text; parse(to_text()) round-trips.
  std::string to_text() const;
  // FNV-1a 64 of to_text(), for reports.
  std::uint64_t config_hash() const;
};

nlohmann::json to_json(const ChipSpec& chip);

struct Footprint {
  std::uint64_t blocks = 0;
  std::uint64_t pages = 0;
  friend bool operator==(const Footprint&, const Footprint&) = default;
};

Footprint table_footprint(const TableSpec& t, const ChipSpec& chip);

// Raw bit counts converted to blocks/pages without per-table rounding.
double bits_to_blocks(std::uint64_t tcam_bits, const ChipSpec& chip);
double bits_to_pages(std::uint64_t sram_bits, const ChipSpec& chip);

class MappingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RmtMapping {
  struct TableAlloc {
    std::size_t step = 0;
    std::string name;
    std::uint64_t blocks = 0;
    std::uint64_t pages = 0;
    int first_stage = 0;  // 1-based
    int last_stage = 0;
  };
  struct StageUse {
    std::uint64_t blocks = 0;
    std::uint64_t pages = 0;
  };

  static constexpr const char* kRule = "topological-greedy-spill";

  std::vector<TableAlloc> tables;
  std::vector<int> step_first;  // per step, 1-based
  std::vector<int> step_last;
  std::vector<StageUse> stages;  // index 0 = stage 1
  std::uint64_t total_blocks = 0;
  std::uint64_t total_pages = 0;
  int stage_total = 0;
  bool feasible = true;
  std::vector<std::string> issues;
};

struct MapOptions {
  // Throw MappingError when one table exceeds whole-chip capacity instead
  // of recording it as an issue.
  bool strict = false;
};

RmtMapping map_program(const CramProgram& program, const ChipSpec& chip,
                       const MapOptions& opts = {});
nlohmann::json to_json(const RmtMapping& m);

struct LogicalTcamCost {
  std::uint64_t blocks = 0;
  std::uint64_t capacity = 0;
  std::uint64_t stages = 0;
  bool feasible = true;
};

// One ternary table holding every route, key = family width.
LogicalTcamCost logical_tcam_cost(std::uint64_t routes, int key_width,
                                  const ChipSpec& chip);
LogicalTcamCost logical_tcam_cost(const Fib& fib, const ChipSpec& chip);
CramProgram logical_tcam_program(const Fib& fib);

struct SailCost {
  std::uint64_t pages = 0;
  std::uint64_t chunks = 0;
  int stages = 0;
  bool feasible = true;
  CramProgram program;
  RmtMapping mapping;
};

// SAIL with bitmaps B_0..B_pivot, next-hop arrays N_i for the populated
// lengths up to the pivot, and one 2^(width-pivot)-row chunk per distinct
// pivot-length parent of a longer route. Throws BuildError for IPv6.
CramProgram sail_program(const Fib& fib, int pivot = 24);
SailCost sail_cost_model(const Fib& fib, const ChipSpec& chip,
                         int pivot = 24);

}  // namespace cramlens

#endif  // CRAMLENS_RMT_HPP_
