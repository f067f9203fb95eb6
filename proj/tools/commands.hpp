// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CRAMLENS_TOOLS_COMMANDS_HPP_
#define CRAMLENS_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cramlens::cli {

enum ExitCode : int {
  kOk = 0,
  kParse = 2,
  kBuild = 3,
  kInfeasible = 4,
  kMismatch = 5,
};

// Bad command-line input that the option parser could not catch.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string scheme = "resail";
  std::optional<int> min_bmp;
  std::optional<int> pivot;
  std::optional<int> k;
  std::string strides;
  std::string chip;  // path; empty means the ideal chip
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "table";
  int hop_bits = 8;
};

struct BuildOptions {
  std::string fib;
  bool dump = false;
};

struct VerifyOptions {
  std::string artifact;
  std::string fib;
  std::size_t count = 100000;
  std::string addresses;
  bool exhaustive = false;
  std::size_t scan_limit = 2000;
};

struct MapOptionsCli {
  std::string program;
};

struct SweepOptions {
  std::string fib;
  std::vector<std::size_t> sizes;
  std::vector<double> factors;
  std::vector<int> ks;
  std::string mode = "by-length";
};

int cmd_build(const CommonOptions& c, const BuildOptions& o);
int cmd_verify(const CommonOptions& c, const VerifyOptions& o);
int cmd_map(const CommonOptions& c, const MapOptionsCli& o);
int cmd_compare(const CommonOptions& c, const std::string& fib);
int cmd_sweep(const CommonOptions& c, const SweepOptions& o);

}  // namespace cramlens::cli

#endif  // CRAMLENS_TOOLS_COMMANDS_HPP_
