// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/prefix.hpp"

#include <arpa/inet.h>

#include <array>
#include <cstring>

namespace cramlens {

Family Family::toy(int width) {
  if (width < 1 || width > 64) {
    throw std::invalid_argument("toy family width must be in 1..64, got " +
                                std::to_string(width));
  }
  return {FamilyKind::kToy, width};
}

std::string Family::name() const {
  switch (kind) {
    case FamilyKind::kIpv4:
      return "ipv4";
    case FamilyKind::kIpv6:
      return "ipv6";
    case FamilyKind::kToy:
      return "toy" + std::to_string(width);
  }
  return "unknown";
}

IpPrefix::IpPrefix(Family family, Address value, int length)
    : family_(family) {
  if (length < 0 || length > family.width) {
    throw std::invalid_argument("prefix length " + std::to_string(length) +
                                " out of range for " + family.name());
  }
  length_ = static_cast<std::uint8_t>(length);
  const Address container = bits::low_mask(family.width);
  const Address keep = container & ~bits::low_mask(family.width - length);
  value_ = value & keep;
}

IpPrefix IpPrefix::from_bits(Family family, std::uint64_t prefix_bits,
                             int length) {
  if (length < 0 || length > family.width) {
    throw std::invalid_argument("prefix length " + std::to_string(length) +
                                " out of range for " + family.name());
  }
  return IpPrefix(family,
                  bits::shl(prefix_bits & bits::low_mask(length),
                            family.width - length),
                  length);
}

bool IpPrefix::contains(Address addr) const {
  return bits::shr(addr ^ value_, family_.width - length_) == 0;
}

bool IpPrefix::contains(const IpPrefix& other) const {
  return other.length_ >= length_ && contains(other.value_);
}

std::string IpPrefix::to_string() const {
  if (family_.kind == FamilyKind::kToy) {
    std::string s;
    for (int i = 0; i < family_.width; ++i) {
      if (i >= length_) {
        s.push_back('*');
      } else {
        s.push_back(((value_ >> (family_.width - 1 - i)) & 1) ? '1' : '0');
      }
    }
    return s + "/" + std::to_string(length_);
  }
  return format_address(family_, value_) + "/" + std::to_string(length_);
}

std::string format_address(Family family, Address addr) {
  switch (family.kind) {
    case FamilyKind::kIpv4: {
      std::array<char, INET_ADDRSTRLEN> buf{};
      in_addr a{};
      a.s_addr = htonl(static_cast<std::uint32_t>(addr));
      inet_ntop(AF_INET, &a, buf.data(), buf.size());
      return buf.data();
    }
    case FamilyKind::kIpv6: {
      std::array<char, INET6_ADDRSTRLEN> buf{};
      in6_addr a{};
      for (int i = 0; i < 8; ++i) {
        a.s6_addr[i] = static_cast<std::uint8_t>(addr >> (56 - 8 * i));
      }
      inet_ntop(AF_INET6, &a, buf.data(), buf.size());
      return buf.data();
    }
    case FamilyKind::kToy: {
      std::string s;
      for (int i = family.width - 1; i >= 0; --i) {
        s.push_back(((addr >> i) & 1) ? '1' : '0');
      }
      return s;
    }
  }
  return {};
}

std::vector<IpPrefix> expand_prefix(const IpPrefix& p, int target_len) {
  const int width = p.family().width;
  if (target_len > width) {
    throw std::invalid_argument("expansion target " +
                                std::to_string(target_len) +
                                " exceeds family width " +
                                std::to_string(width));
  }
  if (target_len < p.length()) {
    throw std::invalid_argument("expansion target shorter than prefix");
  }
  const int extra = target_len - p.length();
  if (extra > 26) {
    throw std::invalid_argument("expansion by " + std::to_string(extra) +
                                " bits is too large");
  }
  std::vector<IpPrefix> out;
  out.reserve(std::size_t{1} << extra);
  const std::uint64_t base = p.bits() << extra;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << extra); ++i) {
    out.push_back(IpPrefix::from_bits(p.family(), base | i, target_len));
  }
  return out;
}

}  // namespace cramlens
