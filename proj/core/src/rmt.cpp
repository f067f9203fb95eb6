// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace cramlens {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return b == 0 ? 0 : (a + b - 1) / b;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

ChipSpec ChipSpec::tofino2_like() {
  ChipSpec c;
  c.name = "tofino2_like";
  c.sram_utilization = 0.5;
  return c;
}

void ChipSpec::validate() const {
  if (tcam_block_width <= 0 || tcam_block_entries <= 0 ||
      sram_page_width <= 0 || sram_page_entries <= 0 ||
      blocks_per_stage <= 0 || pages_per_stage <= 0 || stage_count <= 0) {
    throw std::invalid_argument("chip dimensions must be positive");
  }
  if (!(sram_utilization > 0.0 && sram_utilization <= 1.0)) {
    throw std::invalid_argument("sram_utilization must be in (0, 1]");
  }
}

ChipSpec ChipSpec::parse(std::istream& in) {
  ChipSpec c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(lineno, "expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto as_int = [&]() {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != val.size()) {
        throw ParseError(lineno, "bad integer for " + key);
      }
      return v;
    };
    if (key == "name") {
      c.name = val;
    } else if (key == "tcam_block_width") {
      c.tcam_block_width = as_int();
    } else if (key == "tcam_block_entries") {
      c.tcam_block_entries = as_int();
    } else if (key == "sram_page_width") {
      c.sram_page_width = as_int();
    } else if (key == "sram_page_entries") {
      c.sram_page_entries = as_int();
    } else if (key == "blocks_per_stage") {
      c.blocks_per_stage = as_int();
    } else if (key == "pages_per_stage") {
      c.pages_per_stage = as_int();
    } else if (key == "stage_count") {
      c.stage_count = as_int();
    } else if (key == "sram_utilization") {
      std::size_t used = 0;
      try {
        c.sram_utilization = std::stod(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != val.size()) {
        throw ParseError(lineno, "bad number for sram_utilization");
      }
    } else {
      throw ParseError(lineno, "unknown key '" + key + "'");
    }
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return c;
}

ChipSpec ChipSpec::parse(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

ChipSpec ChipSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open chip config " + path);
  return parse(in);
}

std::string ChipSpec::to_text() const {
  std::ostringstream o;
  o << "name=" << name << "\n"
    << "tcam_block_width=" << tcam_block_width << "\n"
    << "tcam_block_entries=" << tcam_block_entries << "\n"
    << "sram_page_width=" << sram_page_width << "\n"
    << "sram_page_entries=" << sram_page_entries << "\n"
    << "blocks_per_stage=" << blocks_per_stage << "\n"
    << "pages_per_stage=" << pages_per_stage << "\n"
    << "stage_count=" << stage_count << "\n"
    << "sram_utilization=" << std::setprecision(17) << sram_utilization
    << "\n";
  return o.str();
}

std::uint64_t ChipSpec::config_hash() const { return fnv1a(to_text()); }

nlohmann::json to_json(const ChipSpec& c) {
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << c.config_hash();
  return {{"name", c.name},
          {"tcam_block", {c.tcam_block_width, c.tcam_block_entries}},
          {"sram_page", {c.sram_page_width, c.sram_page_entries}},
          {"blocks_per_stage", c.blocks_per_stage},
          {"pages_per_stage", c.pages_per_stage},
          {"stage_count", c.stage_count},
          {"sram_utilization", c.sram_utilization},
          {"config_hash", hash.str()}};
}

namespace {

std::uint64_t pages_for(std::uint64_t bits_needed, const ChipSpec& chip) {
  if (bits_needed == 0) return 0;
  const double usable =
      static_cast<double>(chip.page_bits()) * chip.sram_utilization;
  return static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(bits_needed) / usable - 1e-9));
}

}  // namespace

Footprint table_footprint(const TableSpec& t, const ChipSpec& chip) {
  Footprint f;
  if (t.match_kind == MatchKind::kTernary) {
    const std::uint64_t width_units = ceil_div(
        std::max<std::uint64_t>(t.key_bits, 1),
        static_cast<std::uint64_t>(chip.tcam_block_width));
    f.blocks = width_units *
               ceil_div(t.max_entries,
                        static_cast<std::uint64_t>(chip.tcam_block_entries));
    f.pages = pages_for(t.max_entries * t.data_bits, chip);
  } else if (t.direct_indexed) {
    f.pages = pages_for(t.max_entries * t.data_bits, chip);
  } else {
    f.pages = pages_for(t.max_entries * (t.key_bits + t.data_bits), chip);
  }
  return f;
}

double bits_to_blocks(std::uint64_t tcam_bits, const ChipSpec& chip) {
  return static_cast<double>(tcam_bits) /
         (static_cast<double>(chip.tcam_block_width) * chip.tcam_block_entries);
}

double bits_to_pages(std::uint64_t sram_bits, const ChipSpec& chip) {
  return static_cast<double>(sram_bits) /
         (static_cast<double>(chip.page_bits()) * chip.sram_utilization);
}

RmtMapping map_program(const CramProgram& program, const ChipSpec& chip,
                       const MapOptions& opts) {
  chip.validate();
  RmtMapping m;
  const auto& steps = program.steps();
  const std::size_t n = steps.size();
  std::vector<std::vector<std::size_t>> preds(n);
  for (auto [u, v] : program.edges()) preds[v].push_back(u);
  m.step_first.assign(n, 0);
  m.step_last.assign(n, 0);

  const auto bps = static_cast<std::uint64_t>(chip.blocks_per_stage);
  const auto pps = static_cast<std::uint64_t>(chip.pages_per_stage);
  auto stage = [&](int s) -> RmtMapping::StageUse& {
    if (static_cast<std::size_t>(s) > m.stages.size()) {
      m.stages.resize(static_cast<std::size_t>(s));
    }
    return m.stages[static_cast<std::size_t>(s - 1)];
  };

  for (std::size_t u : program.topological_order()) {
    int earliest = 1;
    for (auto p : preds[u]) earliest = std::max(earliest, m.step_last[p] + 1);
    if (!steps[u].table) {
      stage(earliest);
      m.step_first[u] = m.step_last[u] = earliest;
      continue;
    }
    const TableSpec& t = *steps[u].table;
    const Footprint fp = table_footprint(t, chip);
    if (fp.blocks > chip.total_blocks() || fp.pages > chip.total_pages()) {
      const std::string msg =
          "table " + t.name + " needs " + std::to_string(fp.blocks) +
          " blocks / " + std::to_string(fp.pages) +
          " pages, more than the whole chip";
      if (opts.strict) throw MappingError(msg);
      m.issues.push_back(msg);
      m.feasible = false;
    }
    std::uint64_t need_b = fp.blocks;
    std::uint64_t need_p = fp.pages;
    int first = 0;
    int last = earliest;
    int s = earliest;
    while (need_b > 0 || need_p > 0) {
      auto& use = stage(s);
      const std::uint64_t take_b = std::min(need_b, bps - use.blocks);
      const std::uint64_t take_p = std::min(need_p, pps - use.pages);
      if (take_b > 0 || take_p > 0) {
        use.blocks += take_b;
        use.pages += take_p;
        need_b -= take_b;
        need_p -= take_p;
        if (first == 0) first = s;
        last = s;
      }
      ++s;
    }
    if (first == 0) {
      stage(earliest);
      first = earliest;
    }
    m.step_first[u] = first;
    m.step_last[u] = last;
    m.tables.push_back({u, t.name, fp.blocks, fp.pages, first, last});
    m.total_blocks += fp.blocks;
    m.total_pages += fp.pages;
  }
  for (std::size_t u = 0; u < n; ++u) {
    m.stage_total = std::max(m.stage_total, m.step_last[u]);
  }
  if (m.stage_total > chip.stage_count) {
    m.feasible = false;
    m.issues.push_back("needs " + std::to_string(m.stage_total) +
                       " stages, chip has " +
                       std::to_string(chip.stage_count));
  }
  return m;
}

nlohmann::json to_json(const RmtMapping& m) {
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : m.tables) {
    tables.push_back({{"step", t.step},
                      {"name", t.name},
                      {"tcam_blocks", t.blocks},
                      {"sram_pages", t.pages},
                      {"first_stage", t.first_stage},
                      {"last_stage", t.last_stage}});
  }
  nlohmann::json stages = nlohmann::json::array();
  for (std::size_t i = 0; i < m.stages.size(); ++i) {
    stages.push_back({{"stage", i + 1},
                      {"tcam_blocks", m.stages[i].blocks},
                      {"sram_pages", m.stages[i].pages}});
  }
  return {{"rule", RmtMapping::kRule},
          {"tables", tables},
          {"stages", stages},
          {"tcam_blocks", m.total_blocks},
          {"sram_pages", m.total_pages},
          {"stage_count", m.stage_total},
          {"feasible", m.feasible},
          {"issues", m.issues}};
}

LogicalTcamCost logical_tcam_cost(std::uint64_t routes, int key_width,
                                  const ChipSpec& chip) {
  chip.validate();
  LogicalTcamCost c;
  const std::uint64_t units =
      ceil_div(static_cast<std::uint64_t>(std::max(key_width, 1)),
               static_cast<std::uint64_t>(chip.tcam_block_width));
  const auto entries = static_cast<std::uint64_t>(chip.tcam_block_entries);
  c.blocks = units * ceil_div(routes, entries);
  c.capacity = chip.total_blocks() / units * entries;
  c.stages = ceil_div(c.blocks,
                      static_cast<std::uint64_t>(chip.blocks_per_stage));
  c.feasible = routes <= c.capacity;
  return c;
}

LogicalTcamCost logical_tcam_cost(const Fib& fib, const ChipSpec& chip) {
  return logical_tcam_cost(fib.size(), fib.family().width, chip);
}

CramProgram logical_tcam_program(const Fib& fib) {
  CramProgram prog;
  if (fib.empty()) {
    prog.add_step(std::nullopt, {"addr"}, {"hop"});
  } else {
    TableSpec t;
    t.name = "logical_tcam";
    t.match_kind = MatchKind::kTernary;
    t.key_bits = static_cast<std::uint64_t>(fib.family().width);
    t.max_entries = fib.size();
    // Hops sit in the action, not in RAM.
    t.data_bits = 0;
    prog.add_step(t, {"addr"}, {"hop"});
  }
  prog.notes.push_back("logical TCAM baseline: no SRAM data counted");
  return prog;
}

CramProgram sail_program(const Fib& fib, int pivot) {
  const Family fam = fib.family();
  if (fam.kind == FamilyKind::kIpv6) {
    throw BuildError("the SAIL cost model covers IPv4 tables only");
  }
  if (pivot < 0 || pivot > fam.width || pivot > 32) {
    throw BuildError("SAIL pivot out of range");
  }
  const auto d = static_cast<std::uint64_t>(fib.hop_bits());
  std::vector<bool> populated(static_cast<std::size_t>(pivot) + 1, false);
  std::set<std::uint64_t> parents;
  for (const auto& r : fib) {
    const int len = r.prefix.length();
    if (len <= pivot) {
      populated[static_cast<std::size_t>(len)] = true;
    } else {
      parents.insert(r.prefix.first_bits(pivot));
    }
  }

  // Bitmaps are probed longest first as a chain; N_i is read after B_i
  // hits and the chunk array after B_pivot. The chain steps get the lowest
  // ids so the mapper places them before the arrays hanging off them.
  CramProgram prog;
  std::vector<std::size_t> bstep(static_cast<std::size_t>(pivot) + 1);
  for (int i = pivot; i >= 0; --i) {
    TableSpec b;
    b.name = "B" + std::to_string(i);
    b.key_bits = static_cast<std::uint64_t>(i);
    b.max_entries = std::uint64_t{1} << i;
    b.data_bits = 1;
    b.direct_indexed = true;
    const std::string li = std::to_string(i);
    const std::size_t bs =
        prog.add_step(b, {"addr", "found"}, {"hit_" + li, "found"});
    if (i < pivot) prog.add_edge(bstep[static_cast<std::size_t>(i) + 1], bs);
    bstep[static_cast<std::size_t>(i)] = bs;
  }
  for (int i = pivot; i >= 0; --i) {
    if (!populated[static_cast<std::size_t>(i)]) continue;
    const std::string li = std::to_string(i);
    TableSpec nh;
    nh.name = "N" + li;
    nh.key_bits = static_cast<std::uint64_t>(i);
    nh.max_entries = std::uint64_t{1} << i;
    nh.data_bits = d;
    nh.direct_indexed = true;
    const std::size_t ns =
        prog.add_step(nh, {"addr", "hit_" + li}, {"hop_" + li});
    prog.add_edge(bstep[static_cast<std::size_t>(i)], ns);
  }
  if (!parents.empty()) {
    const int rest = fam.width - pivot;
    TableSpec c;
    c.name = "N" + std::to_string(fam.width) + "_chunks";
    c.max_entries = parents.size() << rest;
    c.key_bits = static_cast<std::uint64_t>(bits::ceil_log2(c.max_entries));
    c.data_bits = d;
    c.direct_indexed = true;
    const std::size_t cs = prog.add_step(
        c, {"addr", "hit_" + std::to_string(pivot)}, {"hop_long"});
    prog.add_edge(bstep[static_cast<std::size_t>(pivot)], cs);
  }
  prog.notes.push_back("SAIL: one " +
                       std::to_string(std::uint64_t{1} << (fam.width - pivot)) +
                       "-row chunk per distinct /" + std::to_string(pivot) +
                       " parent of a longer route");
  return prog;
}

SailCost sail_cost_model(const Fib& fib, const ChipSpec& chip, int pivot) {
  SailCost c;
  c.program = sail_program(fib, pivot);
  c.mapping = map_program(c.program, chip);
  c.pages = c.mapping.total_pages;
  c.stages = c.mapping.stage_total;
  c.feasible = c.mapping.feasible;
  for (const auto* t : c.program.tables()) {
    if (t->name.find("_chunks") != std::string::npos) {
      c.chunks = t->max_entries >> (fib.family().width - pivot);
    }
  }
  return c;
}

}  // namespace cramlens
