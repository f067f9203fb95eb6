// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/mashup.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cramlens/json_io.hpp"

namespace cramlens {

StridePlan StridePlan::parse(const std::string& text) {
  StridePlan plan;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '-')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size() || v <= 0) {
      throw std::invalid_argument("bad stride list '" + text + "'");
    }
    plan.strides.push_back(v);
  }
  if (plan.strides.empty()) {
    throw std::invalid_argument("empty stride list");
  }
  return plan;
}

std::string StridePlan::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < strides.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(strides[i]);
  }
  return s;
}

int StridePlan::total() const {
  return std::accumulate(strides.begin(), strides.end(), 0);
}

int StridePlan::start(std::size_t level) const {
  int s = 0;
  for (std::size_t i = 0; i < level; ++i) s += strides[i];
  return s;
}

void StridePlan::validate(Family family) const {
  if (strides.empty()) throw BuildError("stride plan is empty");
  for (int s : strides) {
    if (s <= 0) throw BuildError("strides must be positive");
  }
  if (total() != family.width) {
    throw BuildError("strides " + to_string() + " sum to " +
                     std::to_string(total()) + ", family width is " +
                     std::to_string(family.width));
  }
}

StridePlan StridePlan::defaults_for(Family family) {
  switch (family.kind) {
    case FamilyKind::kIpv4:
      return {{16, 4, 4, 8}};
    case FamilyKind::kIpv6:
      return {{20, 12, 16, 16}};
    case FamilyKind::kToy:
      break;
  }
  if (family.width == 1) return {{1}};
  return {{family.width / 2, family.width - family.width / 2}};
}

MashupConfig MashupConfig::defaults_for(Family family) {
  MashupConfig cfg;
  cfg.plan = StridePlan::defaults_for(family);
  return cfg;
}

StridePlan choose_strides(const LengthHistogram& hist, int width, int levels,
                          int max_first, int align) {
  if (width < 1) throw std::invalid_argument("width must be positive");
  if (levels < 1) throw std::invalid_argument("need at least one level");
  if (align <= 0) align = width >= 16 ? 4 : 1;
  auto count = [&](int len) -> std::uint64_t {
    return len >= 0 && static_cast<std::size_t>(len) < hist.counts.size()
               ? hist.counts[static_cast<std::size_t>(len)]
               : 0;
  };
  const auto want = static_cast<std::size_t>(levels - 1);
  std::vector<int> peaks;
  for (int len = align; len < width; len += align) {
    // Flat stretches are not spikes.
    if (count(len) > std::min(count(len - 1), count(len + 1))) {
      peaks.push_back(len);
    }
  }
  // Strongest first; ties go to the shorter length.
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](int a, int b) { return count(a) > count(b); });
  if (peaks.size() > want) peaks.resize(want);

  if (peaks.empty() && want > 0) {
    const auto total = hist.total();
    for (std::size_t j = 1; j <= want && total > 0; ++j) {
      // Smallest length whose cumulative mass reaches j/levels.
      std::uint64_t cum = 0;
      for (int len = 0; len <= width; ++len) {
        cum += count(len);
        if (cum * static_cast<std::uint64_t>(levels) >= j * total) {
          if (len >= 1 && len < width) peaks.push_back(len);
          break;
        }
      }
    }
  }

  std::sort(peaks.begin(), peaks.end());
  peaks.erase(std::unique(peaks.begin(), peaks.end()), peaks.end());
  if (max_first > 0 && max_first < width && !peaks.empty() &&
      peaks.front() > max_first) {
    if (peaks.size() >= want) {
      // Drop the weakest boundary to make room.
      auto weakest = std::min_element(
          peaks.begin(), peaks.end(),
          [&](int a, int b) { return count(a) < count(b); });
      peaks.erase(weakest);
    }
    peaks.insert(peaks.begin(), max_first);
  }

  StridePlan plan;
  int prev = 0;
  for (int b : peaks) {
    plan.strides.push_back(b - prev);
    prev = b;
  }
  plan.strides.push_back(width - prev);
  return plan;
}

StridePlan choose_strides(const Fib& fib, int levels, int max_first,
                          int align) {
  if (fib.empty()) throw std::invalid_argument("stride choice needs routes");
  return choose_strides(length_histogram(fib), fib.family().width, levels,
                        max_first, align);
}

NodeKind hybridize(int stride, std::uint64_t ternary_entries, int factor) {
  if (stride >= 62) return NodeKind::kTcam;
  const std::uint64_t expanded = std::uint64_t{1} << stride;
  return expanded <= static_cast<std::uint64_t>(factor) * ternary_entries
             ? NodeKind::kSram
             : NodeKind::kTcam;
}

std::vector<std::vector<std::size_t>> coalesce(
    const std::vector<std::uint64_t>& sizes, std::uint64_t unit) {
  if (unit == 0) throw std::invalid_argument("coalescing unit must be > 0");
  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return sizes[a] > sizes[b];
  });
  std::vector<std::vector<std::size_t>> groups;
  std::size_t lo = 0;
  std::size_t hi = order.size();  // unplaced: order[lo, hi)
  while (lo < hi) {
    const std::size_t seed = order[lo++];
    const std::uint64_t budget =
        (std::max<std::uint64_t>(sizes[seed], 1) + unit - 1) / unit * unit;
    std::uint64_t used = sizes[seed];
    std::vector<std::size_t> group{seed};
    while (lo < hi && used + sizes[order[hi - 1]] <= budget) {
      used += sizes[order[hi - 1]];
      group.push_back(order[--hi]);
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

MashupStructure::MashupStructure(Family family, int hop_bits,
                                 NextHop default_hop, const MashupConfig& cfg)
    : family_(family),
      hop_bits_(hop_bits),
      default_hop_(default_hop),
      cfg_(cfg),
      levels_(cfg.plan.strides.size()) {}

std::size_t MashupStructure::level_for(int len) const {
  int end = 0;
  for (std::size_t l = 0; l < cfg_.plan.strides.size(); ++l) {
    end += stride(l);
    if (end >= len) return l;
  }
  return cfg_.plan.strides.size() - 1;
}

std::uint32_t MashupStructure::new_node(int level, std::uint64_t path,
                                        std::uint32_t parent) {
  std::uint32_t id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
  } else {
    id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    placement_.emplace_back();
  }
  Node& n = nodes_[id];
  n = Node{};
  n.level = level;
  n.path = path;
  n.parent = parent;
  n.alive = true;
  return id;
}

MashupStructure MashupStructure::build(const Fib& fib,
                                       const MashupConfig& cfg) {
  cfg.plan.validate(fib.family());
  if (cfg.hybrid_factor < 1) throw BuildError("hybrid factor must be >= 1");
  if (cfg.tcam_unit == 0 || cfg.sram_unit == 0) {
    throw BuildError("coalescing units must be positive");
  }
  MashupStructure s(fib.family(), fib.hop_bits(), fib.default_hop(), cfg);
  s.new_node(0, 0, kNoTrieNode);
  for (const auto& r : fib) {
    const int len = r.prefix.length();
    const std::size_t target = s.level_for(len);
    std::uint32_t node = 0;
    for (std::size_t l = 0; l < target; ++l) {
      const int end = cfg.plan.start(l + 1);
      const std::uint64_t slot =
          r.prefix.first_bits(end) & bits::low_mask(s.stride(l));
      auto it = s.nodes_[node].children.find(slot);
      if (it == s.nodes_[node].children.end()) {
        const std::uint32_t child =
            s.new_node(static_cast<int>(l + 1), r.prefix.first_bits(end), node);
        s.nodes_[node].children.emplace(slot, child);
        node = child;
      } else {
        node = it->second;
      }
    }
    const int start = cfg.plan.start(target);
    const int local = len - start;
    s.nodes_[node].routes[{local, r.prefix.first_bits(len) &
                                      bits::low_mask(local)}] = r.hop;
  }
  for (std::size_t l = 0; l < s.levels_.size(); ++l) s.rebuild_level(l);
  return s;
}

std::vector<LocalEntry> MashupStructure::ternary_entries(
    std::uint32_t id) const {
  const Node& n = nodes_.at(id);
  const int s = stride(static_cast<std::size_t>(n.level));
  std::map<std::pair<int, std::uint64_t>, TrieEntry> out;
  for (const auto& [key, hop] : n.routes) out[key].hop = hop;
  for (const auto& [slot, child] : n.children) {
    auto [it, fresh] = out.try_emplace({s, slot});
    it->second.child = child;
    if (!fresh) continue;
    for (int len = s - 1; len >= 0; --len) {
      auto r = n.routes.find({len, slot >> (s - len)});
      if (r != n.routes.end()) {
        it->second.hop = r->second;
        break;
      }
    }
  }
  std::vector<LocalEntry> v;
  v.reserve(out.size());
  for (const auto& [key, e] : out) v.push_back({key.second, key.first, e});
  // Priority order: longest first.
  std::stable_sort(v.begin(), v.end(), [](const LocalEntry& a,
                                          const LocalEntry& b) {
    return a.length > b.length;
  });
  return v;
}

std::vector<TrieEntry> MashupStructure::expanded_entries(
    std::uint32_t id) const {
  const Node& n = nodes_.at(id);
  const int s = stride(static_cast<std::size_t>(n.level));
  if (s > 30) throw BuildError("stride too wide to expand");
  std::vector<TrieEntry> rows(std::size_t{1} << s);
  // routes iterate by ascending length, so longer prefixes overwrite.
  for (const auto& [key, hop] : n.routes) {
    const int extra = s - key.first;
    const std::uint64_t first = key.second << extra;
    const std::uint64_t count = std::uint64_t{1} << extra;
    for (std::uint64_t i = first; i < first + count; ++i) rows[i].hop = hop;
  }
  for (const auto& [slot, child] : n.children) rows[slot].child = child;
  return rows;
}

void MashupStructure::rebuild_level(std::size_t level) {
  const int s = stride(level);
  std::vector<std::uint32_t> tcam_nodes;
  std::vector<std::uint32_t> sram_nodes;
  std::vector<std::uint64_t> tcam_sizes;
  std::vector<std::vector<LocalEntry>> tcam_rows;
  for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (!n.alive || n.level != static_cast<int>(level)) continue;
    auto rows = ternary_entries(id);
    if (hybridize(s, rows.size(), cfg_.hybrid_factor) == NodeKind::kSram) {
      sram_nodes.push_back(id);
    } else {
      tcam_nodes.push_back(id);
      tcam_sizes.push_back(rows.size());
      tcam_rows.push_back(std::move(rows));
    }
  }

  Level out;
  for (const auto& group : coalesce(tcam_sizes, cfg_.tcam_unit)) {
    TcamSuperTable t;
    t.tag_width = bits::ceil_log2(group.size());
    if (t.tag_width + s > 64) throw BuildError("super-table key over 64 bits");
    t.table = PrefixTcam<TrieEntry>(t.tag_width + s);
    for (std::size_t tag = 0; tag < group.size(); ++tag) {
      const std::uint32_t id = tcam_nodes[group[tag]];
      t.members.push_back(id);
      placement_[id] = {NodeKind::kTcam,
                        static_cast<std::uint32_t>(out.tcam.size()),
                        static_cast<std::uint32_t>(tag)};
      for (const auto& e : tcam_rows[group[tag]]) {
        t.table.insert((static_cast<std::uint64_t>(tag) << e.length) | e.bits,
                       t.tag_width + e.length, e.entry);
      }
    }
    out.tcam.push_back(std::move(t));
  }

  const std::vector<std::uint64_t> sram_sizes(sram_nodes.size(),
                                              std::uint64_t{1} << s);
  for (const auto& group : coalesce(sram_sizes, cfg_.sram_unit)) {
    SramSuperTable t;
    t.tag_width = bits::ceil_log2(group.size());
    t.slots.reserve(group.size() << s);
    for (std::size_t tag = 0; tag < group.size(); ++tag) {
      const std::uint32_t id = sram_nodes[group[tag]];
      t.members.push_back(id);
      placement_[id] = {NodeKind::kSram,
                        static_cast<std::uint32_t>(out.sram.size()),
                        static_cast<std::uint32_t>(tag)};
      auto rows = expanded_entries(id);
      t.slots.insert(t.slots.end(), rows.begin(), rows.end());
    }
    out.sram.push_back(std::move(t));
  }
  levels_[level] = std::move(out);
}

NextHop MashupStructure::lookup(Address addr) const {
  NextHop best = NextHop::none();
  std::uint32_t node = 0;
  int start = 0;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const int s = stride(l);
    const std::uint64_t slot =
        bits::shr(addr, family_.width - start - s) & bits::low_mask(s);
    start += s;
    if (node >= placement_.size() || !nodes_[node].alive) {
      throw std::logic_error("dangling child reference");
    }
    const Placement& p = placement_[node];
    const TrieEntry* e = nullptr;
    if (p.kind == NodeKind::kTcam) {
      const auto& t = levels_[l].tcam.at(p.table);
      e = t.table.match((static_cast<std::uint64_t>(p.tag) << s) | slot);
    } else {
      const auto& t = levels_[l].sram.at(p.table);
      e = &t.slots.at((static_cast<std::size_t>(p.tag) << s) | slot);
      if (e->empty()) e = nullptr;
    }
    if (!e) break;
    if (!e->hop.is_none()) best = e->hop;
    if (e->child == kNoTrieNode) break;
    node = e->child;
  }
  return best.is_none() ? default_hop_ : best;
}

void MashupStructure::update(UpdateOp op, const Route& route) {
  const IpPrefix& p = route.prefix;
  if (!(p.family() == family_)) {
    throw UpdateError("route family does not match the structure");
  }
  if (op != UpdateOp::kDelete &&
      (route.hop.is_none() ||
       (hop_bits_ < 32 && route.hop.id >= (std::uint32_t{1} << hop_bits_)))) {
    throw UpdateError("next hop out of range");
  }
  const int len = p.length();
  const std::size_t target = level_for(len);
  std::set<std::size_t> dirty{target};
  std::uint32_t node = 0;
  for (std::size_t l = 0; l < target; ++l) {
    const int end = cfg_.plan.start(l + 1);
    const std::uint64_t slot = p.first_bits(end) & bits::low_mask(stride(l));
    auto it = nodes_[node].children.find(slot);
    if (it != nodes_[node].children.end()) {
      node = it->second;
      continue;
    }
    if (op != UpdateOp::kInsert) {
      throw UpdateError("no route " + p.to_string());
    }
    const std::uint32_t child =
        new_node(static_cast<int>(l + 1), p.first_bits(end), node);
    nodes_[node].children.emplace(slot, child);
    dirty.insert(l);
    dirty.insert(l + 1);
    node = child;
  }
  const int local = len - cfg_.plan.start(target);
  const std::pair<int, std::uint64_t> key{
      local, p.first_bits(len) & bits::low_mask(local)};
  auto& routes = nodes_[node].routes;
  const bool present = routes.count(key) > 0;
  if (op == UpdateOp::kInsert && present) {
    throw UpdateError("insert of existing route " + p.to_string());
  }
  if (op != UpdateOp::kInsert && !present) {
    throw UpdateError("no route " + p.to_string());
  }
  if (op == UpdateOp::kDelete) {
    routes.erase(key);
    while (node != 0 && nodes_[node].routes.empty() &&
           nodes_[node].children.empty()) {
      Node& n = nodes_[node];
      const std::uint32_t parent = n.parent;
      const auto plevel = static_cast<std::size_t>(n.level - 1);
      nodes_[parent].children.erase(n.path & bits::low_mask(stride(plevel)));
      n = Node{};
      free_.push_back(node);
      dirty.insert(plevel);
      node = parent;
    }
  } else {
    routes[key] = route.hop;
  }
  for (auto l : dirty) rebuild_level(l);
}

std::vector<MashupStructure::LevelStats> MashupStructure::level_stats()
    const {
  std::vector<LevelStats> out;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    LevelStats st;
    st.level = static_cast<int>(l);
    st.stride = stride(l);
    for (const auto& t : levels_[l].tcam) {
      st.tcam_nodes += t.members.size();
      st.tcam_entries += t.entries();
    }
    for (const auto& t : levels_[l].sram) {
      st.sram_nodes += t.members.size();
      st.sram_rows += t.slots.size();
    }
    st.tcam_tables = levels_[l].tcam.size();
    st.sram_tables = levels_[l].sram.size();
    out.push_back(st);
  }
  return out;
}

int MashupStructure::ref_bits(std::size_t level) const {
  if (level + 1 >= levels_.size()) return 0;
  std::uint64_t n = 0;
  for (const auto& t : levels_[level + 1].tcam) n += t.members.size();
  for (const auto& t : levels_[level + 1].sram) n += t.members.size();
  return bits::ceil_log2(n + 1);
}

CramProgram MashupStructure::to_program() const {
  CramProgram prog;
  std::vector<std::size_t> prev;
  std::set<std::string> inputs{"addr"};
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const auto s = static_cast<std::uint64_t>(stride(l));
    const auto data =
        static_cast<std::uint64_t>(hop_bits_ + ref_bits(l));
    std::uint64_t tcam_n = 0;
    std::uint64_t tcam_k = 0;
    std::uint64_t sram_n = 0;
    for (const auto& t : levels_[l].tcam) {
      tcam_n += t.entries();
      if (t.entries()) {
        tcam_k = std::max(tcam_k, static_cast<std::uint64_t>(t.tag_width) + s);
      }
    }
    for (const auto& t : levels_[l].sram) sram_n += t.slots.size();

    const std::string lv = std::to_string(l);
    std::vector<std::size_t> cur;
    std::set<std::string> outputs;
    std::set<std::string> reads = inputs;
    reads.insert("addr");
    if (tcam_n > 0) {
      TableSpec t;
      t.name = "level_" + lv + "_tcam";
      t.match_kind = MatchKind::kTernary;
      t.key_bits = tcam_k;
      t.max_entries = tcam_n;
      t.data_bits = data;
      cur.push_back(prog.add_step(t, reads, {"tcam_out_" + lv}));
      outputs.insert("tcam_out_" + lv);
    }
    if (sram_n > 0) {
      TableSpec t;
      t.name = "level_" + lv + "_sram";
      t.match_kind = MatchKind::kExact;
      t.key_bits = static_cast<std::uint64_t>(bits::ceil_log2(sram_n));
      t.max_entries = sram_n;
      t.data_bits = data;
      t.direct_indexed = true;
      cur.push_back(prog.add_step(t, reads, {"sram_out_" + lv}));
      outputs.insert("sram_out_" + lv);
    }
    if (cur.empty()) {
      cur.push_back(prog.add_step(std::nullopt, reads, {"out_" + lv}));
      outputs.insert("out_" + lv);
    }
    for (auto u : prev) {
      for (auto v : cur) prog.add_edge(u, v);
    }
    prev = std::move(cur);
    inputs = std::move(outputs);
  }
  prog.notes.push_back("strides " + cfg_.plan.to_string());
  prog.notes.push_back(
      "sram super-tables are addressed by tag and stride bits; rows = "
      "members x 2^stride");
  prog.notes.push_back("table default values are not counted");
  return prog;
}

void MashupStructure::corrupt_node(std::uint32_t node, NextHop hop) {
  const Placement& p = placement_.at(node);
  const std::size_t l = static_cast<std::size_t>(nodes_.at(node).level);
  const int s = stride(l);
  if (p.kind == NodeKind::kSram) {
    auto& t = levels_[l].sram.at(p.table);
    const std::size_t base = static_cast<std::size_t>(p.tag) << s;
    for (std::size_t i = 0; i < (std::size_t{1} << s); ++i) {
      if (!t.slots[base + i].hop.is_none()) t.slots[base + i].hop = hop;
    }
    return;
  }
  auto& t = levels_[l].tcam.at(p.table);
  for (const auto& e : ternary_entries(node)) {
    if (e.entry.hop.is_none()) continue;
    const int len = t.tag_width + e.length;
    if (TrieEntry* te = t.table.find(
            (static_cast<std::uint64_t>(p.tag) << e.length) | e.bits, len)) {
      te->hop = hop;
    }
  }
}

namespace {

nlohmann::json ref_json(std::uint32_t r) {
  if (r == kNoTrieNode) return nullptr;
  return r;
}

std::uint32_t ref_from(const nlohmann::json& j) {
  return j.is_null() ? kNoTrieNode : j.get<std::uint32_t>();
}

}  // namespace

nlohmann::json MashupStructure::to_json() const {
  nlohmann::json j;
  j["scheme"] = "mashup";
  j["family"] = family_to_json(family_);
  j["hop_bits"] = hop_bits_;
  j["default_hop"] = hop_to_json(default_hop_);
  j["config"] = {{"strides", cfg_.plan.strides},
                 {"hybrid_factor", cfg_.hybrid_factor},
                 {"tcam_unit", cfg_.tcam_unit},
                 {"sram_unit", cfg_.sram_unit}};
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (std::uint32_t id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (!n.alive) continue;
    nlohmann::json routes = nlohmann::json::array();
    for (const auto& [k, h] : n.routes) {
      routes.push_back({k.first, k.second, hop_to_json(h)});
    }
    nlohmann::json children = nlohmann::json::array();
    for (const auto& [slot, c] : n.children) children.push_back({slot, c});
    nodes.push_back({{"id", id},
                     {"level", n.level},
                     {"path", n.path},
                     {"parent", ref_json(n.parent)},
                     {"routes", routes},
                     {"children", children}});
  }
  auto& levels = j["levels"] = nlohmann::json::array();
  for (const auto& lv : levels_) {
    nlohmann::json tcam = nlohmann::json::array();
    for (const auto& t : lv.tcam) {
      nlohmann::json entries = nlohmann::json::array();
      for (const auto& e : t.table.entries()) {
        entries.push_back({e.value, e.length, hop_to_json(e.payload.hop),
                           ref_json(e.payload.child)});
      }
      tcam.push_back({{"tag_width", t.tag_width},
                      {"members", t.members},
                      {"entries", entries}});
    }
    nlohmann::json sram = nlohmann::json::array();
    for (const auto& t : lv.sram) {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i = 0; i < t.slots.size(); ++i) {
        if (t.slots[i].empty()) continue;
        rows.push_back(
            {i, hop_to_json(t.slots[i].hop), ref_json(t.slots[i].child)});
      }
      sram.push_back({{"tag_width", t.tag_width},
                      {"members", t.members},
                      {"rows", rows}});
    }
    levels.push_back({{"tcam", tcam}, {"sram", sram}});
  }
  return j;
}

MashupStructure MashupStructure::from_json(const nlohmann::json& j) {
  if (j.at("scheme") != "mashup") {
    throw std::invalid_argument("artifact is not a MashUp structure");
  }
  const Family family = family_from_json(j.at("family"));
  MashupConfig cfg;
  const auto& c = j.at("config");
  cfg.plan.strides = c.at("strides").get<std::vector<int>>();
  cfg.hybrid_factor = c.at("hybrid_factor").get<int>();
  cfg.tcam_unit = c.at("tcam_unit").get<std::uint64_t>();
  cfg.sram_unit = c.at("sram_unit").get<std::uint64_t>();
  cfg.plan.validate(family);
  MashupStructure s(family, j.at("hop_bits").get<int>(),
                    hop_from_json(j.at("default_hop")), cfg);
  std::uint32_t max_id = 0;
  for (const auto& n : j.at("nodes")) {
    max_id = std::max(max_id, n.at("id").get<std::uint32_t>());
  }
  s.nodes_.assign(static_cast<std::size_t>(max_id) + 1, Node{});
  s.placement_.assign(s.nodes_.size(), Placement{});
  for (const auto& jn : j.at("nodes")) {
    Node& n = s.nodes_[jn.at("id").get<std::uint32_t>()];
    n.alive = true;
    n.level = jn.at("level").get<int>();
    n.path = jn.at("path").get<std::uint64_t>();
    n.parent = ref_from(jn.at("parent"));
    for (const auto& r : jn.at("routes")) {
      n.routes[{r.at(0).get<int>(), r.at(1).get<std::uint64_t>()}] =
          hop_from_json(r.at(2));
    }
    for (const auto& ch : jn.at("children")) {
      n.children[ch.at(0).get<std::uint64_t>()] = ch.at(1).get<std::uint32_t>();
    }
  }
  for (std::uint32_t id = 0; id < s.nodes_.size(); ++id) {
    if (!s.nodes_[id].alive) s.free_.push_back(id);
  }
  if (s.nodes_.empty() || !s.nodes_[0].alive) {
    throw std::invalid_argument("artifact has no root node");
  }
  const auto& levels = j.at("levels");
  if (levels.size() != s.levels_.size()) {
    throw std::invalid_argument("level count does not match strides");
  }
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const int st = s.stride(l);
    Level lv;
    for (const auto& jt : levels[l].at("tcam")) {
      TcamSuperTable t;
      t.tag_width = jt.at("tag_width").get<int>();
      t.members = jt.at("members").get<std::vector<std::uint32_t>>();
      t.table = PrefixTcam<TrieEntry>(t.tag_width + st);
      for (const auto& e : jt.at("entries")) {
        t.table.insert(e.at(0).get<std::uint64_t>(), e.at(1).get<int>(),
                       {hop_from_json(e.at(2)), ref_from(e.at(3))});
      }
      for (std::uint32_t tag = 0; tag < t.members.size(); ++tag) {
        s.placement_.at(t.members[tag]) = {
            NodeKind::kTcam, static_cast<std::uint32_t>(lv.tcam.size()), tag};
      }
      lv.tcam.push_back(std::move(t));
    }
    for (const auto& jt : levels[l].at("sram")) {
      SramSuperTable t;
      t.tag_width = jt.at("tag_width").get<int>();
      t.members = jt.at("members").get<std::vector<std::uint32_t>>();
      t.slots.assign(t.members.size() << st, TrieEntry{});
      for (const auto& r : jt.at("rows")) {
        t.slots.at(r.at(0).get<std::size_t>()) = {hop_from_json(r.at(1)),
                                                  ref_from(r.at(2))};
      }
      for (std::uint32_t tag = 0; tag < t.members.size(); ++tag) {
        s.placement_.at(t.members[tag]) = {
            NodeKind::kSram, static_cast<std::uint32_t>(lv.sram.size()), tag};
      }
      lv.sram.push_back(std::move(t));
    }
    s.levels_[l] = std::move(lv);
  }
  return s;
}

}  // namespace cramlens
