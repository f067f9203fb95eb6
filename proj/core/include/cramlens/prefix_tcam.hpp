// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CRAMLENS_PREFIX_TCAM_HPP_
#define CRAMLENS_PREFIX_TCAM_HPP_

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cramlens/prefix.hpp"

namespace cramlens {

// A ternary table whose masks are all prefix masks and whose priority is
// the prefix length, so first-match equals longest-prefix match. Entries
// are indexed per length; a match probes the populated lengths from the
// longest down, which gives the same answer as a priority-ordered TCAM.
template <typename Payload>
class PrefixTcam {
 public:
  struct Entry {
    std::uint64_t value;  // right-aligned significant bits
    int length;
    Payload payload;
  };

  explicit PrefixTcam(int key_width = 0)
      : key_width_(key_width), by_length_(key_width + 1) {
    if (key_width < 0 || key_width > 64) {
      throw std::invalid_argument("ternary key width must be in 0..64");
    }
  }

  int key_width() const { return key_width_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  // Inserts or overwrites. Returns true if the (value, mask) pair was new.
  bool insert(std::uint64_t value, int length, Payload payload) {
    check_length(length);
    value &= bits::low_mask(length);
    auto [it, inserted] =
        by_length_[length].insert_or_assign(value, std::move(payload));
    (void)it;
    if (inserted) ++size_;
    return inserted;
  }

  bool erase(std::uint64_t value, int length) {
    check_length(length);
    if (by_length_[length].erase(value & bits::low_mask(length)) == 0) {
      return false;
    }
    --size_;
    return true;
  }

  const Payload* find(std::uint64_t value, int length) const {
    check_length(length);
    const auto& m = by_length_[length];
    auto it = m.find(value & bits::low_mask(length));
    return it == m.end() ? nullptr : &it->second;
  }
  Payload* find(std::uint64_t value, int length) {
    return const_cast<Payload*>(std::as_const(*this).find(value, length));
  }

  // Highest-priority entry matching a full key_width-bit key.
  const Payload* match(std::uint64_t key, int* matched_length = nullptr) const {
    for (int len = key_width_; len >= 0; --len) {
      const auto& m = by_length_[len];
      if (m.empty()) continue;
      auto it = m.find(bits::shr(key, key_width_ - len) & bits::low_mask(len));
      if (it != m.end()) {
        if (matched_length) *matched_length = len;
        return &it->second;
      }
    }
    return nullptr;
  }

  // Entries in priority order (longest first, then by value).
  std::vector<Entry> entries() const {
    std::vector<Entry> out;
    out.reserve(size_);
    for (int len = key_width_; len >= 0; --len) {
      const auto first = out.size();
      for (const auto& [v, p] : by_length_[len]) out.push_back({v, len, p});
      std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
                [](const Entry& a, const Entry& b) { return a.value < b.value; });
    }
    return out;
  }

 private:
  void check_length(int length) const {
    if (length < 0 || length > key_width_) {
      throw std::out_of_range("ternary entry length out of range");
    }
  }

  int key_width_;
  std::vector<std::unordered_map<std::uint64_t, Payload>> by_length_;
  std::size_t size_ = 0;
};

}  // namespace cramlens

#endif  // CRAMLENS_PREFIX_TCAM_HPP_
