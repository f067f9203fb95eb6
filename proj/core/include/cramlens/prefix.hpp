// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// Address families, prefixes and next hops shared by every lookup scheme.
//
// A prefix of `length` bits is stored left-aligned in a container that is
// exactly `family.width` bits wide (the low `width` bits of a uint64_t).
// Taking the first k bits of a prefix or an address is therefore a single
// right shift by (width - k).

#ifndef CRAMLENS_PREFIX_HPP_
#define CRAMLENS_PREFIX_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cramlens {

using Address = std::uint64_t;

namespace bits {

// Shifts that saturate to zero instead of invoking UB at 64.
constexpr std::uint64_t shl(std::uint64_t x, int n) {
  return n >= 64 ? 0 : (n <= 0 ? x : x << n);
}
constexpr std::uint64_t shr(std::uint64_t x, int n) {
  return n >= 64 ? 0 : (n <= 0 ? x : x >> n);
}
// Low n bits set.
constexpr std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}
// ceil(log2(n)) for n >= 1; 0 for n <= 1.
constexpr int ceil_log2(std::uint64_t n) {
  int b = 0;
  while (b < 64 && (std::uint64_t{1} << b) < n) ++b;
  return b;
}

}  // namespace bits

enum class FamilyKind : std::uint8_t { kIpv4, kIpv6, kToy };

// An address family: IPv4 (32 bits), the routed 64-bit half of IPv6, or a
// small W-bit toy universe used by fixtures.
struct Family {
  FamilyKind kind = FamilyKind::kIpv4;
  int width = 32;

  static constexpr Family ipv4() { return {FamilyKind::kIpv4, 32}; }
  static constexpr Family ipv6() { return {FamilyKind::kIpv6, 64}; }
  static Family toy(int width);

  std::string name() const;
  friend constexpr bool operator==(const Family&, const Family&) = default;
};

// Next-hop identifier. The all-ones value is reserved for "no route".
struct NextHop {
  static constexpr std::uint32_t kNoneId = 0xffffffffu;
  std::uint32_t id = kNoneId;

  static constexpr NextHop none() { return NextHop{}; }
  constexpr bool is_none() const { return id == kNoneId; }
  friend constexpr auto operator<=>(const NextHop&, const NextHop&) = default;
};

class IpPrefix {
 public:
  IpPrefix() = default;

  // `value` is left-aligned in a family.width-bit container; bits beyond
  // `length` are cleared.
  IpPrefix(Family family, Address value, int length);

  // Builds a prefix from its `length` significant bits, right-aligned.
  static IpPrefix from_bits(Family family, std::uint64_t prefix_bits,
                            int length);

  Family family() const { return family_; }
  int length() const { return length_; }
  Address value() const { return value_; }

  // The `length` significant bits, right-aligned.
  std::uint64_t bits() const {
    return bits::shr(value_, family_.width - length_);
  }

  // First n bits of the prefix, n <= length.
  std::uint64_t first_bits(int n) const {
    return bits::shr(value_, family_.width - n);
  }

  bool contains(Address addr) const;
  bool contains(const IpPrefix& other) const;

  // Lowest and highest address covered.
  Address first_address() const { return value_; }
  Address last_address() const {
    return value_ | bits::low_mask(family_.width - length_);
  }

  std::string to_string() const;

  friend bool operator==(const IpPrefix& a, const IpPrefix& b) {
    return a.family_ == b.family_ && a.length_ == b.length_ &&
           a.value_ == b.value_;
  }
  // Orders by address, then by length (shorter first).
  friend std::strong_ordering operator<=>(const IpPrefix& a,
                                          const IpPrefix& b) {
    if (auto c = a.value_ <=> b.value_; c != 0) return c;
    return a.length_ <=> b.length_;
  }

 private:
  Family family_ = Family::ipv4();
  std::uint8_t length_ = 0;
  Address value_ = 0;
};

// First n bits of an address in a width-bit family.
inline std::uint64_t address_bits(Address addr, int width, int n) {
  return bits::shr(addr, width - n) & bits::low_mask(n);
}

// Renders an address in dotted-quad (v4), hex-colon (v6, upper 64 bits of
// the 128-bit address) or plain binary (toy) form.
std::string format_address(Family family, Address addr);

// All 2^(target_len - p.length()) prefixes of length target_len inside p,
// in ascending order.
std::vector<IpPrefix> expand_prefix(const IpPrefix& p, int target_len);

struct IpPrefixHash {
  std::size_t operator()(const IpPrefix& p) const noexcept {
    std::uint64_t h = p.value() * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<std::uint64_t>(p.length()) << 57;
    return std::hash<std::uint64_t>{}(h);
  }
};

}  // namespace cramlens

#endif  // CRAMLENS_PREFIX_HPP_
