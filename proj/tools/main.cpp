// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "cramlens/fib.hpp"
#include "cramlens/rmt.hpp"
#include "cramlens/version.hpp"
#include "json.hpp"

namespace {

using namespace cramlens;
using namespace cramlens::cli;

void add_common(CLI::App* cmd, CommonOptions& c, bool scheme_params) {
  if (scheme_params) {
    cmd->add_option("--scheme", c.scheme, "Lookup scheme")
        ->check(CLI::IsMember(
            {"resail", "bsic", "mashup", "tcam", "logical_tcam", "sail"}))
        ->capture_default_str();
    cmd->add_option("--min-bmp", c.min_bmp, "RESAIL smallest bitmap level");
    cmd->add_option("--pivot", c.pivot, "RESAIL pivot level");
    cmd->add_option("--k", c.k, "BSIC slice length");
    cmd->add_option("--strides", c.strides, "MashUp strides, e.g. 16-4-4-8");
    cmd->add_option("--hop-bits", c.hop_bits, "Next-hop width in bits")
        ->check(CLI::Range(1, 32))
        ->capture_default_str();
  }
  cmd->add_option("--chip", c.chip, "Chip config file (key=value)");
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--format", c.format, "Report format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cramlens: CRAM lookup schemes and RMT resource mapping"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions common;
  BuildOptions build;
  VerifyOptions verify;
  MapOptionsCli map;
  std::string compare_fib;
  SweepOptions sweep;

  auto* b = app.add_subcommand("build", "Build a scheme and report its cost");
  add_common(b, common, true);
  b->add_option("fib", build.fib, "Routing table file")->required();
  b->add_option("--out", common.out, "Write the JSON artifact here");
  b->add_flag("--dump", build.dump, "Print the built tables");

  auto* v = app.add_subcommand("verify", "Check an artifact against oracles");
  add_common(v, common, false);
  v->add_option("--hop-bits", common.hop_bits, "Next-hop width in bits");
  v->add_option("artifact", verify.artifact, "Artifact from build")->required();
  v->add_option("fib", verify.fib, "Routing table file")->required();
  auto* count = v->add_option("--count", verify.count, "Random addresses")
                    ->capture_default_str();
  auto* file = v->add_option("--addresses", verify.addresses,
                             "File with one address per line");
  auto* ex = v->add_flag("--exhaustive", verify.exhaustive,
                         "Every address (families up to 24 bits)");
  count->excludes(file)->excludes(ex);
  file->excludes(ex);
  v->add_option("--scan-limit", verify.scan_limit,
                "Addresses also checked against the linear-scan oracle")
      ->capture_default_str();
  v->add_option("--out", common.out, "Write the report here");

  auto* m = app.add_subcommand("map", "Map a program onto a chip");
  add_common(m, common, false);
  m->add_option("program", map.program, "Artifact or program JSON")
      ->required();
  m->add_option("--out", common.out, "Write the report here");

  auto* c = app.add_subcommand("compare", "All schemes side by side");
  add_common(c, common, true);
  c->add_option("fib", compare_fib, "Routing table file")->required();
  c->add_option("--out", common.out, "Write the report here");

  auto* s = app.add_subcommand("sweep", "Scale a table and map each size");
  add_common(s, common, true);
  s->add_option("fib", sweep.fib, "Routing table file")->required();
  s->add_option("--sizes", sweep.sizes, "Target sizes")->delimiter(',');
  s->add_option("--factors", sweep.factors, "Size factors")->delimiter(',');
  s->add_option("--ks", sweep.ks, "BSIC k-sweep values")->delimiter(',');
  s->add_option("--mode", sweep.mode, "Scaling model")
      ->check(CLI::IsMember({"by-length", "multiverse"}))
      ->capture_default_str();
  s->add_option("--out", common.out, "Write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }

  try {
    if (*b) return cmd_build(common, build);
    if (*v) return cmd_verify(common, verify);
    if (*m) return cmd_map(common, map);
    if (*c) return cmd_compare(common, compare_fib);
    if (*s) return cmd_sweep(common, sweep);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "bad JSON: " << e.what() << "\n";
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const BuildError& e) {
    std::cerr << "build error: " << e.what() << "\n";
    return kBuild;
  } catch (const MappingError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
