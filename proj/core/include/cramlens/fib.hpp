// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CRAMLENS_FIB_HPP_
#define CRAMLENS_FIB_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cramlens/prefix.hpp"

namespace cramlens {

struct Route {
  IpPrefix prefix;
  NextHop hop;
  friend bool operator==(const Route&, const Route&) = default;
};

enum class UpdateOp { kInsert, kDelete, kChange };

// Thrown by the FIB readers. `line()` is 1-based, 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A scheme could not be constructed from its input (bad parameters or a
// resource such as a hash table that could not hold the entries).
class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An incremental update was rejected (e.g. deleting an absent route).
class UpdateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultHopBits = 8;

// A deduplicated routing table. Routes are kept sorted by prefix so that
// iteration order, serialization and every derived structure are
// deterministic.
class Fib {
 public:
  explicit Fib(Family family = Family::ipv4(), int hop_bits = kDefaultHopBits);

  Family family() const { return family_; }
  int hop_bits() const { return hop_bits_; }
  NextHop default_hop() const { return default_hop_; }
  void set_default_hop(NextHop hop);

  std::size_t size() const { return routes_.size(); }
  bool empty() const { return routes_.empty(); }
  std::span<const Route> routes() const { return routes_; }
  auto begin() const { return routes_.begin(); }
  auto end() const { return routes_.end(); }

  // Inserts or overwrites. Returns true if the prefix was new.
  bool assign(const IpPrefix& prefix, NextHop hop);
  // Returns true if a route was removed.
  bool erase(const IpPrefix& prefix);
  std::optional<NextHop> find(const IpPrefix& prefix) const;

  // Bulk construction: later duplicates override earlier ones.
  static Fib from_routes(Family family, std::vector<Route> routes,
                         int hop_bits = kDefaultHopBits);

  friend bool operator==(const Fib&, const Fib&) = default;

 private:
  void check(const Route& r) const;

  Family family_;
  int hop_bits_;
  NextHop default_hop_ = NextHop::none();
  std::vector<Route> routes_;
};

// Per-length route counts, index 0..family width.
struct LengthHistogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t total() const;
};

LengthHistogram length_histogram(const Fib& fib);

// Reads `<address>/<length> <nexthop-id>` lines. '#' starts a comment; a
// `default <nexthop-id>` line sets the default hop.
Fib parse_fib(std::istream& in, Family family,
              int hop_bits = kDefaultHopBits);
Fib parse_fib(const std::string& text, Family family,
              int hop_bits = kDefaultHopBits);
void write_fib(std::ostream& out, const Fib& fib);

// Toy fixtures: a `width W` header line followed by `bits/length label`
// lines, where bits is a binary string (optionally padded with '*').
// Labels are assigned hop ids in order of first appearance.
struct Fixture {
  Fib fib;
  std::vector<std::string> labels;

  NextHop hop(const std::string& label) const;
  std::string label(NextHop hop) const;
};

Fixture parse_fixture(std::istream& in, int hop_bits = kDefaultHopBits);
Fixture parse_fixture(const std::string& text,
                      int hop_bits = kDefaultHopBits);
void write_fixture(std::ostream& out, const Fixture& fixture);

// Opens a file and picks the reader: `width` header -> fixture, any ':' in
// the first route line -> IPv6, otherwise IPv4. Non-fixture files get
// numeric labels.
Fixture load_fib_file(const std::string& path,
                      int hop_bits = kDefaultHopBits);

// Parses one address in the family's textual notation.
Address parse_address(Family family, const std::string& text);

}  // namespace cramlens

#endif  // CRAMLENS_FIB_HPP_
