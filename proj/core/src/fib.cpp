// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/fib.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace cramlens {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view strip_comment(std::string_view s) {
  if (auto pos = s.find('#'); pos != std::string_view::npos) {
    s = s.substr(0, pos);
  }
  return trim(s);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

NextHop parse_hop(std::string_view s, int hop_bits, std::size_t line) {
  auto v = parse_uint(s);
  if (!v) throw ParseError(line, "bad next-hop id '" + std::string(s) + "'");
  if (hop_bits < 32 && *v >= (std::uint64_t{1} << hop_bits)) {
    throw ParseError(line, "next-hop id " + std::to_string(*v) +
                               " does not fit in " + std::to_string(hop_bits) +
                               " bits");
  }
  if (*v >= NextHop::kNoneId) throw ParseError(line, "next-hop id reserved");
  return NextHop{static_cast<std::uint32_t>(*v)};
}

}  // namespace

Fib::Fib(Family family, int hop_bits) : family_(family), hop_bits_(hop_bits) {
  if (hop_bits < 1 || hop_bits > 31) {
    throw std::invalid_argument("hop width must be in 1..31 bits");
  }
}

void Fib::set_default_hop(NextHop hop) {
  if (!hop.is_none() && hop.id >= (std::uint32_t{1} << hop_bits_)) {
    throw std::invalid_argument("default hop does not fit in hop width");
  }
  default_hop_ = hop;
}

void Fib::check(const Route& r) const {
  if (r.prefix.family() != family_) {
    throw std::invalid_argument("route family " + r.prefix.family().name() +
                                " does not match FIB family " +
                                family_.name());
  }
  if (r.hop.is_none() || r.hop.id >= (std::uint32_t{1} << hop_bits_)) {
    throw std::invalid_argument("next hop does not fit in " +
                                std::to_string(hop_bits_) + " bits");
  }
}

bool Fib::assign(const IpPrefix& prefix, NextHop hop) {
  check({prefix, hop});
  auto it = std::lower_bound(
      routes_.begin(), routes_.end(), prefix,
      [](const Route& r, const IpPrefix& p) { return r.prefix < p; });
  if (it != routes_.end() && it->prefix == prefix) {
    it->hop = hop;
    return false;
  }
  routes_.insert(it, Route{prefix, hop});
  return true;
}

bool Fib::erase(const IpPrefix& prefix) {
  auto it = std::lower_bound(
      routes_.begin(), routes_.end(), prefix,
      [](const Route& r, const IpPrefix& p) { return r.prefix < p; });
  if (it == routes_.end() || it->prefix != prefix) return false;
  routes_.erase(it);
  return true;
}

std::optional<NextHop> Fib::find(const IpPrefix& prefix) const {
  auto it = std::lower_bound(
      routes_.begin(), routes_.end(), prefix,
      [](const Route& r, const IpPrefix& p) { return r.prefix < p; });
  if (it == routes_.end() || it->prefix != prefix) return std::nullopt;
  return it->hop;
}

Fib Fib::from_routes(Family family, std::vector<Route> routes, int hop_bits) {
  Fib fib(family, hop_bits);
  for (const auto& r : routes) fib.check(r);
  // Stable sort keeps input order among duplicates; the last one wins.
  std::stable_sort(routes.begin(), routes.end(),
                   [](const Route& a, const Route& b) {
                     return a.prefix < b.prefix;
                   });
  fib.routes_.reserve(routes.size());
  for (auto& r : routes) {
    if (!fib.routes_.empty() && fib.routes_.back().prefix == r.prefix) {
      fib.routes_.back().hop = r.hop;
    } else {
      fib.routes_.push_back(r);
    }
  }
  return fib;
}

std::uint64_t LengthHistogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

LengthHistogram length_histogram(const Fib& fib) {
  LengthHistogram h;
  h.counts.assign(fib.family().width + 1, 0);
  for (const auto& r : fib) ++h.counts[r.prefix.length()];
  return h;
}

Address parse_address(Family family, const std::string& text) {
  switch (family.kind) {
    case FamilyKind::kIpv4: {
      in_addr a{};
      if (inet_pton(AF_INET, text.c_str(), &a) != 1) {
        throw std::invalid_argument("bad IPv4 address '" + text + "'");
      }
      return ntohl(a.s_addr);
    }
    case FamilyKind::kIpv6: {
      in6_addr a{};
      if (inet_pton(AF_INET6, text.c_str(), &a) != 1) {
        throw std::invalid_argument("bad IPv6 address '" + text + "'");
      }
      Address v = 0;
      for (int i = 0; i < 8; ++i) v = (v << 8) | a.s6_addr[i];
      return v;
    }
    case FamilyKind::kToy: {
      if (text.empty() || static_cast<int>(text.size()) > family.width) {
        throw std::invalid_argument("bad toy address '" + text + "'");
      }
      Address v = 0;
      for (char c : text) {
        if (c != '0' && c != '1') {
          throw std::invalid_argument("bad toy address '" + text + "'");
        }
        v = (v << 1) | static_cast<Address>(c == '1');
      }
      return v << (family.width - static_cast<int>(text.size()));
    }
  }
  return 0;
}

Fib parse_fib(std::istream& in, Family family, int hop_bits) {
  if (family.kind == FamilyKind::kToy) {
    throw std::invalid_argument("toy tables use parse_fixture");
  }
  std::vector<Route> routes;
  NextHop default_hop = NextHop::none();
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip_comment(raw);
    if (line.empty()) continue;
    auto fields = split_ws(line);
    if (fields.size() == 2 && fields[0] == "default") {
      default_hop = parse_hop(fields[1], hop_bits, line_no);
      continue;
    }
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected '<address>/<length> <nexthop>'");
    }
    auto slash = fields[0].find('/');
    if (slash == std::string_view::npos) {
      throw ParseError(line_no, "missing '/<length>'");
    }
    auto len = parse_uint(fields[0].substr(slash + 1));
    if (!len) throw ParseError(line_no, "bad prefix length");
    const int max_len = family.kind == FamilyKind::kIpv6 ? 64 : family.width;
    if (*len > static_cast<std::uint64_t>(max_len)) {
      throw ParseError(line_no, "prefix length " + std::to_string(*len) +
                                    " exceeds " + std::to_string(max_len));
    }
    Address addr = 0;
    try {
      addr = parse_address(family, std::string(fields[0].substr(0, slash)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    routes.push_back({IpPrefix(family, addr, static_cast<int>(*len)),
                      parse_hop(fields[1], hop_bits, line_no)});
  }
  Fib fib = Fib::from_routes(family, std::move(routes), hop_bits);
  fib.set_default_hop(default_hop);
  return fib;
}

Fib parse_fib(const std::string& text, Family family, int hop_bits) {
  std::istringstream in(text);
  return parse_fib(in, family, hop_bits);
}

void write_fib(std::ostream& out, const Fib& fib) {
  if (!fib.default_hop().is_none()) {
    out << "default " << fib.default_hop().id << '\n';
  }
  for (const auto& r : fib) {
    out << format_address(fib.family(), r.prefix.value()) << '/'
        << r.prefix.length() << ' ' << r.hop.id << '\n';
  }
}

NextHop Fixture::hop(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::out_of_range("unknown label " + label);
  return NextHop{static_cast<std::uint32_t>(it - labels.begin())};
}

std::string Fixture::label(NextHop hop) const {
  if (hop.is_none()) return "-";
  if (hop.id < labels.size()) return labels[hop.id];
  return std::to_string(hop.id);
}

Fixture parse_fixture(std::istream& in, int hop_bits) {
  std::optional<Family> family;
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::uint32_t> label_ids;
  std::vector<Route> routes;
  std::optional<std::string> default_label;
  std::string raw;
  std::size_t line_no = 0;

  auto hop_for = [&](std::string_view label) {
    auto [it, inserted] = label_ids.try_emplace(
        std::string(label), static_cast<std::uint32_t>(labels.size()));
    if (inserted) {
      labels.emplace_back(label);
      if (hop_bits < 32 && labels.size() > (std::size_t{1} << hop_bits)) {
        throw ParseError(line_no, "too many distinct labels for hop width");
      }
    }
    return NextHop{it->second};
  };

  while (std::getline(in, raw)) {
    ++line_no;
    auto line = strip_comment(raw);
    if (line.empty()) continue;
    auto fields = split_ws(line);
    if (fields.size() == 2 && fields[0] == "width") {
      auto w = parse_uint(fields[1]);
      if (!w || *w < 1 || *w > 64) throw ParseError(line_no, "bad width");
      family = Family::toy(static_cast<int>(*w));
      continue;
    }
    if (!family) throw ParseError(line_no, "missing 'width W' header");
    if (fields.size() == 2 && fields[0] == "default") {
      default_label = std::string(fields[1]);
      continue;
    }
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected '<bits>/<length> <label>'");
    }
    auto slash = fields[0].find('/');
    if (slash == std::string_view::npos) {
      throw ParseError(line_no, "missing '/<length>'");
    }
    auto len = parse_uint(fields[0].substr(slash + 1));
    if (!len || *len > static_cast<std::uint64_t>(family->width)) {
      throw ParseError(line_no, "prefix length out of range");
    }
    auto bit_text = fields[0].substr(0, slash);
    if (bit_text.size() > static_cast<std::size_t>(family->width)) {
      throw ParseError(line_no, "more bits than the declared width");
    }
    std::uint64_t value = 0;
    int n = 0;
    for (char c : bit_text) {
      if (c == '*') {
        if (static_cast<std::uint64_t>(n) < *len) {
          throw ParseError(line_no, "wildcard inside the prefix length");
        }
        value <<= 1;
      } else if (c == '0' || c == '1') {
        if (static_cast<std::uint64_t>(n) >= *len && c == '1') {
          throw ParseError(line_no, "set bit beyond the prefix length");
        }
        value = (value << 1) | static_cast<std::uint64_t>(c == '1');
      } else {
        throw ParseError(line_no, "bad bit character");
      }
      ++n;
    }
    if (static_cast<std::uint64_t>(n) < *len) {
      throw ParseError(line_no, "fewer bits than the prefix length");
    }
    value = bits::shl(value, family->width - n);
    routes.push_back({IpPrefix(*family, value, static_cast<int>(*len)),
                      hop_for(fields[1])});
  }
  if (!family) throw ParseError(0, "missing 'width W' header");
  Fixture fx{Fib::from_routes(*family, std::move(routes), hop_bits),
             std::move(labels)};
  if (default_label) {
    auto it = label_ids.find(*default_label);
    std::uint32_t id = it != label_ids.end()
                           ? it->second
                           : static_cast<std::uint32_t>(fx.labels.size());
    if (it == label_ids.end()) fx.labels.push_back(*default_label);
    fx.fib.set_default_hop(NextHop{id});
  }
  return fx;
}

Fixture parse_fixture(const std::string& text, int hop_bits) {
  std::istringstream in(text);
  return parse_fixture(in, hop_bits);
}

void write_fixture(std::ostream& out, const Fixture& fixture) {
  const Fib& fib = fixture.fib;
  out << "width " << fib.family().width << '\n';
  if (!fib.default_hop().is_none()) {
    out << "default " << fixture.label(fib.default_hop()) << '\n';
  }
  for (const auto& r : fib) {
    out << r.prefix.to_string() << ' ' << fixture.label(r.hop) << '\n';
  }
}

Fixture load_fib_file(const std::string& path, int hop_bits) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::istringstream probe(text);
  std::string raw;
  while (std::getline(probe, raw)) {
    auto line = strip_comment(raw);
    if (line.empty()) continue;
    auto fields = split_ws(line);
    if (!fields.empty() && fields[0] == "width") {
      return parse_fixture(text, hop_bits);
    }
    if (!fields.empty() && fields[0] == "default") continue;
    const Family family = line.find(':') != std::string_view::npos
                              ? Family::ipv6()
                              : Family::ipv4();
    return Fixture{parse_fib(text, family, hop_bits), {}};
  }
  return Fixture{Fib(Family::ipv4(), hop_bits), {}};
}

}  // namespace cramlens
