// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/bsic.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "cramlens/json_io.hpp"

namespace cramlens {

namespace {

constexpr int kMaxSlice = 44;

std::string binary(std::uint64_t v, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((v >> (width - 1 - i)) & 1) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

}  // namespace

BsicConfig BsicConfig::defaults_for(Family family) {
  BsicConfig cfg;
  switch (family.kind) {
    case FamilyKind::kIpv4:
      cfg.k = 16;
      break;
    case FamilyKind::kIpv6:
      cfg.k = 24;
      break;
    case FamilyKind::kToy:
      cfg.k = std::max(1, family.width / 2);
      break;
  }
  return cfg;
}

void BsicConfig::validate(Family family) const {
  if (k < 1 || k > std::min(family.width, kMaxSlice)) {
    throw BuildError("slice size k must be in 1.." +
                     std::to_string(std::min(family.width, kMaxSlice)) +
                     ", got " + std::to_string(k));
  }
}

InitialTable build_initial_table(const Fib& fib, const BsicConfig& cfg) {
  cfg.validate(fib.family());
  const int k = cfg.k;
  const int width = fib.family().width;

  PrefixTcam<NextHop> short_routes(k);
  std::map<std::uint64_t, BstGroup> groups;
  for (const auto& r : fib) {
    const int len = r.prefix.length();
    if (len <= k) {
      short_routes.insert(r.prefix.bits(), len, r.hop);
      continue;
    }
    const std::uint64_t slice = r.prefix.first_bits(k);
    const int rest = len - k;
    auto& g = groups[slice];
    g.slice = slice;
    g.residuals.push_back(
        {bits::shr(r.prefix.value(), width - len) & bits::low_mask(rest), rest,
         r.hop});
  }

  InitialTable out;
  for (auto& [slice, g] : groups) {
    if (const NextHop* h = short_routes.match(slice)) g.inherited = *h;
    out.groups.push_back(std::move(g));
  }
  for (const auto& e : short_routes.entries()) {
    if (e.length == k && groups.count(e.value)) continue;
    out.entries.push_back({e.value, e.length, {false, e.payload, kNoNode}});
  }
  for (const auto& g : out.groups) {
    out.entries.push_back({g.slice, k, {true, NextHop::none(), kNoNode}});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const InitialEntry& a, const InitialEntry& b) {
              if (a.length != b.length) return a.length > b.length;
              return a.bits < b.bits;
            });
  return out;
}

RangeList expand_ranges(const std::vector<BstGroup::Residual>& residuals,
                        int width, NextHop inherited) {
  if (width < 0 || width > 63) {
    throw std::invalid_argument("residual width must be in 0..63");
  }
  const std::uint64_t top = bits::low_mask(width);
  PrefixTcam<NextHop> table(width);
  std::vector<std::uint64_t> points{0};
  for (const auto& r : residuals) {
    table.insert(r.bits, r.length, r.hop);
    const int host = width - r.length;
    const std::uint64_t lo = r.bits << host;
    const std::uint64_t hi = lo | bits::low_mask(host);
    points.push_back(lo);
    if (hi < top) points.push_back(hi + 1);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  RangeList out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::uint64_t lo = points[i];
    const std::uint64_t hi = i + 1 < points.size() ? points[i + 1] - 1 : top;
    const NextHop* h = table.match(lo);
    const NextHop hop = h ? *h : inherited;
    if (!out.empty() && out.back().hop == hop) {
      out.back().hi = hi;
    } else {
      out.push_back({lo, hi, hop});
    }
  }
  return out;
}

std::string format_ranges(const RangeList& ranges, int width,
                          const std::function<std::string(NextHop)>& label) {
  std::string s;
  for (const auto& iv : ranges) {
    s += binary(iv.lo, width) + " - " + binary(iv.hi, width) + " " +
         label(iv.hop) + "\n";
  }
  return s;
}

int Bst::depth() const {
  std::function<int(int)> rec = [&](int n) -> int {
    if (n < 0) return 0;
    return 1 + std::max(rec(nodes[static_cast<std::size_t>(n)].left),
                        rec(nodes[static_cast<std::size_t>(n)].right));
  };
  return rec(root);
}

std::vector<std::uint64_t> Bst::in_order() const {
  std::vector<std::uint64_t> out;
  std::function<void(int)> rec = [&](int n) {
    if (n < 0) return;
    const auto& node = nodes[static_cast<std::size_t>(n)];
    rec(node.left);
    out.push_back(node.endpoint);
    rec(node.right);
  };
  rec(root);
  return out;
}

Bst build_bst(const RangeList& ranges) {
  Bst t;
  t.nodes.reserve(ranges.size());
  std::function<int(std::ptrdiff_t, std::ptrdiff_t)> rec =
      [&](std::ptrdiff_t lo, std::ptrdiff_t hi) -> int {
    if (lo > hi) return -1;
    const std::ptrdiff_t mid = lo + (hi - lo) / 2;
    const int id = static_cast<int>(t.nodes.size());
    t.nodes.push_back({ranges[static_cast<std::size_t>(mid)].lo,
                       ranges[static_cast<std::size_t>(mid)].hop, -1, -1});
    const int l = rec(lo, mid - 1);
    const int r = rec(mid + 1, hi);
    t.nodes[static_cast<std::size_t>(id)].left = l;
    t.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  };
  t.root = rec(0, static_cast<std::ptrdiff_t>(ranges.size()) - 1);
  return t;
}

BsicStructure::BsicStructure(Family family, int hop_bits, NextHop default_hop,
                             const BsicConfig& cfg)
    : family_(family),
      hop_bits_(hop_bits),
      default_hop_(default_hop),
      cfg_(cfg),
      initial_(cfg.k) {}

std::uint32_t BsicStructure::place(const Bst& tree, int node,
                                   std::size_t depth) {
  if (node < 0) return kNoNode;
  if (levels_.size() <= depth) levels_.resize(depth + 1);
  const auto idx = static_cast<std::uint32_t>(levels_[depth].size());
  const auto& n = tree.nodes[static_cast<std::size_t>(node)];
  levels_[depth].push_back({n.endpoint, n.hop, kNoNode, kNoNode});
  const std::uint32_t l = place(tree, n.left, depth + 1);
  const std::uint32_t r = place(tree, n.right, depth + 1);
  levels_[depth][idx].left = l;
  levels_[depth][idx].right = r;
  return idx;
}

BsicStructure BsicStructure::build(const Fib& fib, const BsicConfig& cfg) {
  InitialTable table = build_initial_table(fib, cfg);
  BsicStructure s(fib.family(), fib.hop_bits(), fib.default_hop(), cfg);
  const int w = s.residual_width();
  std::map<std::uint64_t, std::uint32_t> roots;
  for (const auto& g : table.groups) {
    const Bst tree = build_bst(expand_ranges(g.residuals, w, g.inherited));
    roots[g.slice] = s.place(tree, tree.root, 0);
  }
  for (auto& e : table.entries) {
    if (e.action.bst) e.action.root = roots.at(e.bits);
    s.initial_.insert(e.bits, e.length, e.action);
  }
  return s;
}

NextHop BsicStructure::lookup(Address addr) const {
  const int width = family_.width;
  const InitialAction* a =
      initial_.match(address_bits(addr, width, cfg_.k));
  if (!a) return default_hop_;
  if (!a->bst) return a->hop;
  const std::uint64_t key = addr & bits::low_mask(residual_width());
  NextHop best = NextHop::none();
  std::uint32_t node = a->root;
  for (std::size_t level = 0; node != kNoNode; ++level) {
    if (level >= levels_.size() || node >= levels_[level].size()) {
      throw std::logic_error("dangling tree reference at level " +
                             std::to_string(level));
    }
    const LevelNode& n = levels_[level][node];
    if (key == n.endpoint) {
      best = n.hop;
      break;
    }
    if (n.endpoint < key) {
      best = n.hop;
      node = n.right;
    } else {
      node = n.left;
    }
  }
  return best.is_none() ? default_hop_ : best;
}

int BsicStructure::ref_bits(std::size_t level) const {
  if (level + 1 >= levels_.size()) return 0;
  // Node indices of the next level plus the absent-child sentinel.
  return bits::ceil_log2(levels_[level + 1].size() + 1);
}

CramProgram BsicStructure::to_program() const {
  CramProgram prog;
  std::size_t prev;
  if (initial_.empty()) {
    prev = prog.add_step(std::nullopt, {"addr"}, {"hop"});
  } else {
    TableSpec t;
    t.name = "initial";
    t.match_kind = MatchKind::kTernary;
    t.key_bits = static_cast<std::uint64_t>(cfg_.k);
    t.max_entries = initial_.size();
    // Action flag plus a hop or a root reference.
    t.data_bits = static_cast<std::uint64_t>(
        1 + std::max(hop_bits_, levels_.empty()
                                    ? 0
                                    : bits::ceil_log2(levels_[0].size() + 1)));
    prev = prog.add_step(t, {"addr"}, {"hop", "node"});
  }
  const auto w = static_cast<std::uint64_t>(residual_width());
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    TableSpec t;
    t.name = "level_" + std::to_string(l);
    t.match_kind = MatchKind::kExact;
    t.max_entries = levels_[l].size();
    t.key_bits = static_cast<std::uint64_t>(bits::ceil_log2(t.max_entries));
    t.direct_indexed = true;
    t.data_bits = static_cast<std::uint64_t>(hop_bits_) +
                  2 * static_cast<std::uint64_t>(ref_bits(l)) + w;
    const std::size_t step =
        prog.add_step(t, {"addr", "node", "hop"}, {"node", "hop"});
    prog.add_edge(prev, step);
    prev = step;
  }
  prog.notes.push_back(
      "level tables are addressed by node index; rows = node count");
  prog.notes.push_back("one-interval groups still get a one-node tree");
  prog.notes.push_back("table default values are not counted");
  return prog;
}

void BsicStructure::corrupt_node(std::size_t level, std::size_t index,
                                 NextHop hop) {
  levels_.at(level).at(index).hop = hop;
}

nlohmann::json BsicStructure::to_json() const {
  nlohmann::json j;
  j["scheme"] = "bsic";
  j["family"] = family_to_json(family_);
  j["hop_bits"] = hop_bits_;
  j["default_hop"] = hop_to_json(default_hop_);
  j["config"] = {{"k", cfg_.k}};
  auto& init = j["initial"] = nlohmann::json::array();
  for (const auto& e : initial_.entries()) {
    nlohmann::json row = {{"bits", e.value}, {"length", e.length}};
    if (e.payload.bst) {
      row["bst"] = e.payload.root;
    } else {
      row["hop"] = hop_to_json(e.payload.hop);
    }
    init.push_back(row);
  }
  auto& lv = j["levels"] = nlohmann::json::array();
  auto ref = [](std::uint32_t r) -> nlohmann::json {
    if (r == kNoNode) return nullptr;
    return r;
  };
  for (const auto& level : levels_) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& n : level) {
      rows.push_back(
          {n.endpoint, hop_to_json(n.hop), ref(n.left), ref(n.right)});
    }
    lv.push_back(rows);
  }
  return j;
}

BsicStructure BsicStructure::from_json(const nlohmann::json& j) {
  if (j.at("scheme") != "bsic") {
    throw std::invalid_argument("artifact is not a BSIC structure");
  }
  const Family family = family_from_json(j.at("family"));
  BsicConfig cfg;
  cfg.k = j.at("config").at("k").get<int>();
  cfg.validate(family);
  BsicStructure s(family, j.at("hop_bits").get<int>(),
                  hop_from_json(j.at("default_hop")), cfg);
  for (const auto& e : j.at("initial")) {
    InitialAction a;
    if (e.contains("bst")) {
      a.bst = true;
      a.root = e.at("bst").get<std::uint32_t>();
    } else {
      a.hop = hop_from_json(e.at("hop"));
    }
    s.initial_.insert(e.at("bits").get<std::uint64_t>(),
                      e.at("length").get<int>(), a);
  }
  auto ref = [](const nlohmann::json& r) {
    return r.is_null() ? kNoNode : r.get<std::uint32_t>();
  };
  for (const auto& level : j.at("levels")) {
    std::vector<LevelNode> rows;
    for (const auto& n : level) {
      rows.push_back({n.at(0).get<std::uint64_t>(), hop_from_json(n.at(1)),
                      ref(n.at(2)), ref(n.at(3))});
    }
    s.levels_.push_back(std::move(rows));
  }
  return s;
}

}  // namespace cramlens
