// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "cramlens/bsic.hpp"
#include "cramlens/mashup.hpp"
#include "cramlens/oracle.hpp"
#include "cramlens/resail.hpp"
#include "cramlens/rmt.hpp"
#include "cramlens/scaling.hpp"
#include "cramlens/schemes.hpp"
#include "report.hpp"

namespace cramlens::cli {

namespace {

using nlohmann::json;

ChipSpec load_chip(const CommonOptions& c) {
  return c.chip.empty() ? ChipSpec{} : ChipSpec::load(c.chip);
}

SchemeParams scheme_params(const CommonOptions& c) {
  SchemeParams p;
  p.min_bmp = c.min_bmp;
  p.pivot = c.pivot;
  p.k = c.k;
  if (!c.strides.empty()) p.strides = StridePlan::parse(c.strides);
  p.seed = c.seed;
  return p;
}

json params_json(const CommonOptions& c) {
  json j = json::object();
  if (c.min_bmp) j["min_bmp"] = *c.min_bmp;
  if (c.pivot) j["pivot"] = *c.pivot;
  if (c.k) j["k"] = *c.k;
  if (!c.strides.empty()) j["strides"] = c.strides;
  return j;
}

Fixture load_table(const std::string& path, int hop_bits) {
  std::ifstream probe(path);
  if (!probe) throw UsageError("cannot open '" + path + "'");
  return load_fib_file(path, hop_bits);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return json::parse(in);
}

// Writes to --out when given, else stdout.
void emit(const CommonOptions& c, const Report& r) {
  const Format f = parse_format(c.format);
  if (c.out.empty()) {
    render(std::cout, r, f);
    return;
  }
  std::ofstream out(c.out);
  if (!out) throw UsageError("cannot write '" + c.out + "'");
  render(out, r, f);
}

std::string hop_label(const Fixture& fx, NextHop h) {
  return h.is_none() ? "-" : fx.label(h);
}

std::string binary(std::uint64_t v, int width) {
  std::string s;
  for (int i = width - 1; i >= 0; --i) s += (v >> i & 1) ? '1' : '0';
  return s;
}

void dump_resail(std::ostream& out, const ResailStructure& s,
                 const Fixture& fx) {
  const auto& cfg = s.config();
  for (const auto& e : s.look_aside().entries()) {
    out << "look_aside " << binary(e.value, e.length) << "/" << e.length
        << " " << hop_label(fx, e.payload) << "\n";
  }
  for (int l = cfg.min_bmp; l <= cfg.pivot; ++l) {
    out << "bitmap " << l << " " << s.bitmap(l).count() << "\n";
  }
  auto items = s.hash_table().items();
  std::sort(items.begin(), items.end());
  for (const auto& [k, v] : items) {
    out << "hash " << binary(k, cfg.pivot + 1) << " " << hop_label(fx, v)
        << "\n";
  }
}

void dump_bsic(std::ostream& out, const Fib& fib, const BsicConfig& cfg,
               const Fixture& fx) {
  const auto it = build_initial_table(fib, cfg);
  for (const auto& e : it.entries) {
    out << "initial " << binary(e.bits, e.length) << "/" << e.length << " "
        << (e.action.bst ? std::string("bst") : hop_label(fx, e.action.hop))
        << "\n";
  }
  const int rw = fib.family().width - cfg.k;
  for (const auto& g : it.groups) {
    out << "slice " << binary(g.slice, cfg.k) << " inherits "
        << hop_label(fx, g.inherited) << "\n";
    const auto ranges = expand_ranges(g.residuals, rw, g.inherited);
    std::istringstream lines(format_ranges(
        ranges, rw, [&fx](NextHop h) { return hop_label(fx, h); }));
    for (std::string line; std::getline(lines, line);) {
      out << "  " << line << "\n";
    }
  }
}

void dump_mashup(std::ostream& out, const MashupStructure& s) {
  for (const auto& l : s.level_stats()) {
    out << fmt::format(
        "level {} stride {} tcam_nodes {} sram_nodes {} tcam_entries {} "
        "sram_rows {} tcam_tables {} sram_tables {}\n",
        l.level, l.stride, l.tcam_nodes, l.sram_nodes, l.tcam_entries,
        l.sram_rows, l.tcam_tables, l.sram_tables);
  }
}

std::vector<Address> sample_addresses(const Fib& fib, std::size_t n,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int w = fib.family().width;
  const auto routes = fib.routes();
  std::vector<Address> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!routes.empty() && i % 2 == 0) {
      const auto& p = routes[rng() % routes.size()].prefix;
      out.push_back(p.value() | (rng() & bits::low_mask(w - p.length())));
    } else {
      out.push_back(rng() & bits::low_mask(w));
    }
  }
  return out;
}

std::vector<Address> read_addresses(const std::string& path, Family fam) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::vector<Address> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    try {
      out.push_back(parse_address(fam, line.substr(b, e - b + 1)));
    } catch (const ParseError& err) {
      throw ParseError(n, err.what());
    }
  }
  return out;
}

struct Built {
  std::optional<AnyStructure> structure;
  CramProgram program;
};

Built build_scheme(Scheme s, const Fib& fib, const SchemeParams& p) {
  Built b;
  if (s == Scheme::kLogicalTcam || s == Scheme::kSail) {
    b.program = scheme_program(s, fib, p);
  } else {
    b.structure = build_structure(s, fib, p);
    b.program = to_program(*b.structure);
  }
  return b;
}

}  // namespace

int cmd_build(const CommonOptions& c, const BuildOptions& o) {
  const Scheme scheme = parse_scheme(c.scheme);
  const ChipSpec chip = load_chip(c);
  const Fixture fx = load_table(o.fib, c.hop_bits);
  const SchemeParams params = scheme_params(c);
  const Built b = build_scheme(scheme, fx.fib, params);
  const RmtMapping m = map_program(b.program, chip);

  if (o.dump && b.structure) {
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, ResailStructure>) {
            dump_resail(std::cout, st, fx);
          } else if constexpr (std::is_same_v<T, BsicStructure>) {
            dump_bsic(std::cout, fx.fib, st.config(), fx);
          } else {
            dump_mashup(std::cout, st);
          }
        },
        *b.structure);
  }

  const std::uint64_t tb = tcam_bits(b.program);
  const std::uint64_t sb = sram_bits(b.program);
  Report r;
  r.meta = report_meta("build", c.seed, chip);
  r.columns = {"metric", "value"};
  r.rows = {{"scheme", scheme_name(scheme)},
            {"family", fx.fib.family().name()},
            {"routes", fx.fib.size()},
            {"steps", latency_steps(b.program)},
            {"tcam_bits", tb},
            {"sram_bits", sb},
            {"tcam_mib", static_cast<double>(tb) / kBitsPerMiB},
            {"sram_mib", static_cast<double>(sb) / kBitsPerMiB},
            {"tcam_blocks_unrounded", bits_to_blocks(tb, chip)},
            {"sram_pages_unrounded", bits_to_pages(sb, chip)},
            {"tcam_blocks", m.total_blocks},
            {"sram_pages", m.total_pages},
            {"stages", m.stage_total},
            {"feasible", m.feasible},
            {"mapping_rule", RmtMapping::kRule}};
  for (const auto& issue : m.issues) r.rows.push_back({"issue", issue});

  if (!c.out.empty()) {
    json art = r.meta;
    art["scheme"] = scheme_name(scheme);
    art["params"] = params_json(c);
    if (b.structure) art["structure"] = structure_to_json(*b.structure);
    art["program"] = program_to_json(b.program);
    art["mapping"] = to_json(m);
    std::ofstream out(c.out);
    if (!out) throw UsageError("cannot write '" + c.out + "'");
    out << art.dump() << "\n";
  }
  render(std::cout, r, parse_format(c.format));
  return m.feasible ? kOk : kInfeasible;
}

int cmd_verify(const CommonOptions& c, const VerifyOptions& o) {
  const json art = read_json(o.artifact);
  const json& sj = art.contains("structure") ? art.at("structure") : art;
  if (!sj.contains("scheme") || !sj.contains("family")) {
    throw UsageError("artifact has no lookup structure");
  }
  const AnyStructure st = structure_from_json(sj);
  const Fixture fx = load_table(o.fib, c.hop_bits);
  const Fib& fib = fx.fib;
  if (!(structure_family(st) == fib.family())) {
    throw UsageError("artifact is " + structure_family(st).name() +
                     " but the table is " + fib.family().name());
  }

  std::vector<Address> addrs;
  if (o.exhaustive) {
    if (fib.family().width > 24) {
      throw UsageError("--exhaustive needs a family of at most 24 bits");
    }
    addrs.resize(std::size_t{1} << fib.family().width);
    for (std::size_t a = 0; a < addrs.size(); ++a) addrs[a] = a;
  } else if (!o.addresses.empty()) {
    addrs = read_addresses(o.addresses, fib.family());
  } else {
    addrs = sample_addresses(fib, o.count, c.seed);
  }

  const BinaryTrie trie = build_trie(fib);
  std::size_t mismatches = 0;
  std::size_t disagreements = 0;
  std::size_t scanned = 0;
  std::vector<std::string> shown;
  for (std::size_t i = 0; i < addrs.size(); ++i) {
    const Address a = addrs[i];
    const NextHop got = lookup(st, a);
    const NextHop want = trie.lookup(a);
    bool bad = got != want;
    std::string scan_text = "-";
    if (i < o.scan_limit) {
      ++scanned;
      const NextHop s = scan_lookup(fib, a);
      scan_text = hop_label(fx, s);
      disagreements += s != want;
      bad = bad || got != s;
    }
    if (!bad) continue;
    ++mismatches;
    if (shown.size() < 10) {
      shown.push_back(fmt::format("mismatch {} scheme={} trie={} scan={}",
                                  format_address(fib.family(), a),
                                  hop_label(fx, got), hop_label(fx, want),
                                  scan_text));
    }
  }
  for (const auto& s : shown) std::cerr << s << "\n";

  const bool pass = mismatches == 0 && disagreements == 0;
  Report r;
  r.meta = report_meta("verify", c.seed, ChipSpec{});
  r.columns = {"metric", "value"};
  r.rows = {{"scheme", sj.at("scheme")},
            {"addresses", addrs.size()},
            {"scan_checked", scanned},
            {"mismatches", mismatches},
            {"oracle_disagreements", disagreements},
            {"verdict", pass ? "PASS" : "FAIL"}};
  r.extra["first_mismatches"] = shown;
  emit(c, r);
  return pass ? kOk : kMismatch;
}

int cmd_map(const CommonOptions& c, const MapOptionsCli& o) {
  const ChipSpec chip = load_chip(c);
  const json j = read_json(o.program);
  const CramProgram p =
      program_from_json(j.contains("program") ? j.at("program") : j);
  const RmtMapping m = map_program(p, chip);
  Report r;
  r.meta = report_meta("map", c.seed, chip);
  r.columns = {"table", "step", "tcam_blocks", "sram_pages", "first_stage",
               "last_stage"};
  for (const auto& t : m.tables) {
    r.rows.push_back({t.name, t.step, t.blocks, t.pages, t.first_stage,
                      t.last_stage});
  }
  r.rows.push_back({"total", "", m.total_blocks, m.total_pages, 1,
                    m.stage_total});
  r.extra["mapping"] = to_json(m);
  r.extra["chip_spec"] = to_json(chip);
  emit(c, r);
  if (!m.issues.empty()) {
    for (const auto& i : m.issues) std::cerr << "issue: " << i << "\n";
  }
  return m.feasible ? kOk : kInfeasible;
}

int cmd_compare(const CommonOptions& c, const std::string& fib_path) {
  const ChipSpec chip = load_chip(c);
  const Fixture fx = load_table(fib_path, c.hop_bits);
  const SchemeParams params = scheme_params(c);
  Report r;
  r.meta = report_meta("compare", c.seed, chip);
  r.columns = {"scheme",   "tcam_blocks", "sram_pages", "stages", "steps",
               "tcam_mib", "sram_mib",    "feasible",   "error"};
  for (auto s : {Scheme::kResail, Scheme::kBsic, Scheme::kMashup,
                 Scheme::kLogicalTcam, Scheme::kSail}) {
    try {
      const CramProgram p = scheme_program(s, fx.fib, params);
      const RmtMapping m = map_program(p, chip);
      r.rows.push_back(
          {scheme_name(s), m.total_blocks, m.total_pages, m.stage_total,
           latency_steps(p), static_cast<double>(tcam_bits(p)) / kBitsPerMiB,
           static_cast<double>(sram_bits(p)) / kBitsPerMiB, m.feasible,
           m.issues.empty() ? std::string() : m.issues.front()});
    } catch (const std::exception& e) {
      r.rows.push_back({scheme_name(s), nullptr, nullptr, nullptr, nullptr,
                        nullptr, nullptr, false, e.what()});
    }
  }
  r.extra["logical_tcam_capacity"] =
      logical_tcam_cost(fx.fib, chip).capacity;
  emit(c, r);
  return kOk;
}

int cmd_sweep(const CommonOptions& c, const SweepOptions& o) {
  const ChipSpec chip = load_chip(c);
  const Fixture fx = load_table(o.fib, c.hop_bits);
  std::vector<SweepRow> rows;
  try {
    if (!o.ks.empty()) {
      if (parse_scheme(c.scheme) != Scheme::kBsic) {
        throw UsageError("--ks needs --scheme bsic");
      }
      rows = k_sweep(fx.fib, o.ks, chip, c.seed);
    } else {
      std::vector<std::size_t> sizes = o.sizes;
      for (double f : o.factors) {
        sizes.push_back(static_cast<std::size_t>(
            std::llround(f * static_cast<double>(fx.fib.size()))));
      }
      if (sizes.empty()) throw UsageError("give --sizes, --factors or --ks");
      std::sort(sizes.begin(), sizes.end());
      ScaleMode mode;
      if (o.mode == "by-length") {
        mode = ScaleMode::kByLength;
      } else if (o.mode == "multiverse") {
        mode = ScaleMode::kMultiverse;
      } else {
        throw UsageError("unknown --mode '" + o.mode + "'");
      }
      rows = sweep(parse_scheme(c.scheme), fx.fib, sizes, chip,
                   scheme_params(c), mode, c.seed);
    }
  } catch (const std::invalid_argument& e) {
    // Scaling failures (exhausted lengths, bad universes) are build errors.
    throw BuildError(e.what());
  }
  Report r;
  r.meta = report_meta("sweep", c.seed, chip);
  const bool with_k = !rows.empty() && rows.front().k.has_value();
  if (with_k) r.columns.push_back("k");
  for (const char* col :
       {"size", "tcam_blocks", "sram_pages", "stages", "feasible", "seed"}) {
    r.columns.push_back(col);
  }
  for (const auto& row : rows) {
    std::vector<json> cells;
    if (with_k) cells.push_back(*row.k);
    cells.insert(cells.end(), {row.size, row.tcam_blocks, row.sram_pages,
                               row.stages, row.feasible, row.seed});
    r.rows.push_back(std::move(cells));
  }
  r.extra["scheme"] = c.scheme;
  emit(c, r);
  return kOk;
}

}  // namespace cramlens::cli
