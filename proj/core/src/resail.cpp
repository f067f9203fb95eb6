// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

#include "cramlens/resail.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "cramlens/json_io.hpp"

namespace cramlens {

namespace {

constexpr int kSeedRotations = 16;
// Bitmaps are dense 2^pivot-bit arrays held in memory.
constexpr int kMaxPivot = 32;

std::string fmt_load(std::size_t n, std::size_t cap) {
  return std::to_string(cap ? static_cast<double>(n) / cap : 0.0);
}

}  // namespace

ResailConfig ResailConfig::defaults_for(Family family) {
  ResailConfig cfg;
  if (family.kind == FamilyKind::kToy) {
    cfg.pivot = std::max(0, family.width - 2);
    cfg.min_bmp = 0;
  }
  return cfg;
}

void ResailConfig::validate(Family family) const {
  if (pivot < 0 || pivot > family.width) {
    throw BuildError("pivot " + std::to_string(pivot) +
                     " exceeds family width " + std::to_string(family.width));
  }
  if (pivot > kMaxPivot) {
    throw BuildError("pivot above " + std::to_string(kMaxPivot) +
                     " is not supported");
  }
  if (min_bmp < 0 || min_bmp > pivot) {
    throw BuildError("min_bmp must be in 0..pivot");
  }
  if (dleft_ways < 1) throw BuildError("d-left needs at least one subtable");
  if (!(dleft_load > 0.0 && dleft_load <= 0.8)) {
    throw BuildError("d-left load factor must be in (0, 0.8]");
  }
}

Bitmap::Bitmap(int level)
    : level_(level), words_(((std::uint64_t{1} << level) + 63) / 64, 0) {}

std::uint64_t Bitmap::count() const {
  std::uint64_t n = 0;
  for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

std::vector<std::uint64_t> Bitmap::set_indices() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto w = words_[i];
    while (w) {
      out.push_back(i * 64 + static_cast<std::uint64_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::uint64_t bit_mark_key(const IpPrefix& p, const ResailConfig& cfg) {
  if (p.length() < cfg.min_bmp || p.length() > cfg.pivot) {
    throw std::invalid_argument("bit-marked keys need a length in [min_bmp, "
                                "pivot], got " +
                                std::to_string(p.length()));
  }
  return ((p.bits() << 1) | 1) << (cfg.pivot - p.length());
}

ResailStructure::ResailStructure(Family family, int hop_bits,
                                 NextHop default_hop, const ResailConfig& cfg)
    : family_(family),
      hop_bits_(hop_bits),
      default_hop_(default_hop),
      cfg_(cfg),
      look_aside_(family.width),
      hash_(1, cfg.dleft_ways, cfg.seed),
      next_seed_(cfg.seed) {
  bitmaps_.reserve(cfg.pivot - cfg.min_bmp + 1);
  for (int i = cfg.min_bmp; i <= cfg.pivot; ++i) bitmaps_.emplace_back(i);
}

std::uint64_t ResailStructure::marked_key(std::uint64_t index,
                                          int level) const {
  return ((index << 1) | 1) << (cfg_.pivot - level);
}

ResailStructure ResailStructure::build(const Fib& fib,
                                       const ResailConfig& cfg) {
  cfg.validate(fib.family());
  ResailStructure s(fib.family(), fib.hop_bits(), fib.default_hop(), cfg);

  std::vector<std::pair<std::uint64_t, NextHop>> entries;
  std::vector<std::vector<const Route*>> short_routes(cfg.min_bmp);
  for (const auto& r : fib) {
    const int len = r.prefix.length();
    if (len > cfg.pivot) {
      s.look_aside_.insert(r.prefix.bits(), len, r.hop);
      continue;
    }
    if (len <= cfg.min_bmp) s.low_routes_.emplace(r.prefix, r.hop);
    if (len < cfg.min_bmp) {
      short_routes[len].push_back(&r);
      continue;
    }
    s.bitmaps_[len - cfg.min_bmp].set(r.prefix.bits());
    entries.emplace_back(bit_mark_key(r.prefix, cfg), r.hop);
  }

  // Expansion into B_min_bmp, longest first; a bit already set wins.
  Bitmap& base = s.bitmaps_.front();
  for (int len = cfg.min_bmp - 1; len >= 0; --len) {
    for (const Route* r : short_routes[len]) {
      const int extra = cfg.min_bmp - len;
      const std::uint64_t first = r->prefix.bits() << extra;
      const std::uint64_t count = std::uint64_t{1} << extra;
      for (std::uint64_t i = first; i < first + count; ++i) {
        if (base.test(i)) continue;
        base.set(i);
        entries.emplace_back(s.marked_key(i, cfg.min_bmp), r->hop);
      }
    }
  }

  const std::size_t cap =
      DLeftHashTable::capacity_for(entries.size(), cfg.dleft_load);
  for (int t = 0; t < kSeedRotations; ++t) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(t);
    s.hash_ = DLeftHashTable(cap, cfg.dleft_ways, seed);
    if (s.hash_.rebuild(entries, cap, seed)) {
      s.next_seed_ = seed + 1;
      return s;
    }
  }
  throw BuildError("d-left insertion failed after " +
                   std::to_string(kSeedRotations) + " seeds at load " +
                   fmt_load(entries.size(), cap));
}

NextHop ResailStructure::lookup(Address addr) const {
  if (const NextHop* h = look_aside_.match(addr)) return *h;
  for (int i = cfg_.pivot; i >= cfg_.min_bmp; --i) {
    const std::uint64_t idx = address_bits(addr, family_.width, i);
    if (!bitmaps_[i - cfg_.min_bmp].test(idx)) continue;
    if (auto h = hash_.find(marked_key(idx, i))) return *h;
    throw std::logic_error("bitmap " + std::to_string(i) +
                           " is set but the hash table has no entry");
  }
  return default_hop_;
}

void ResailStructure::hash_put(std::uint64_t key, NextHop hop) {
  const bool fresh = !hash_.find(key).has_value();
  if (fresh && static_cast<double>(hash_.size() + 1) >
                   cfg_.dleft_load * static_cast<double>(hash_.capacity())) {
    auto items = hash_.items();
    items.emplace_back(key, hop);
    // Grow with 1/8 slack so a run of inserts does not rebuild every time.
    const std::size_t cap = DLeftHashTable::capacity_for(
        items.size() + items.size() / 8 + 1, cfg_.dleft_load);
    for (int t = 0; t < kSeedRotations; ++t) {
      if (hash_.rebuild(items, cap, next_seed_++)) return;
    }
    throw BuildError("d-left growth failed at load " +
                     fmt_load(items.size(), cap));
  }
  if (hash_.insert(key, hop) != DLeftHashTable::InsertResult::kFull) return;
  auto items = hash_.items();
  items.emplace_back(key, hop);
  for (int t = 0; t < kSeedRotations; ++t) {
    if (hash_.rebuild(items, hash_.capacity(), next_seed_++)) return;
  }
  throw BuildError("d-left insertion failed at load " +
                   fmt_load(items.size(), hash_.capacity()));
}

NextHop ResailStructure::longest_low_route(std::uint64_t index) const {
  for (int len = cfg_.min_bmp; len >= 0; --len) {
    auto it = low_routes_.find(IpPrefix::from_bits(
        family_, index >> (cfg_.min_bmp - len), len));
    if (it != low_routes_.end()) return it->second;
  }
  return NextHop::none();
}

void ResailStructure::reconcile_expansion(const IpPrefix& changed) {
  const int extra = cfg_.min_bmp - changed.length();
  const std::uint64_t first = changed.bits() << extra;
  const std::uint64_t count = std::uint64_t{1} << extra;
  Bitmap& base = bitmaps_.front();
  for (std::uint64_t i = first; i < first + count; ++i) {
    const NextHop best = longest_low_route(i);
    const std::uint64_t key = marked_key(i, cfg_.min_bmp);
    if (best.is_none()) {
      if (base.test(i)) {
        base.reset(i);
        hash_.erase(key);
      }
    } else {
      base.set(i);
      if (hash_.find(key) != best) hash_put(key, best);
    }
  }
}

void ResailStructure::update(UpdateOp op, const Route& route) {
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

  auto check_presence = [&](bool present) {
    if (op == UpdateOp::kInsert && present) {
      throw UpdateError("insert of existing route " + p.to_string());
    }
    if (op != UpdateOp::kInsert && !present) {
      throw UpdateError("no route " + p.to_string());
    }
  };

  if (len > cfg_.pivot) {
    check_presence(look_aside_.find(p.bits(), len) != nullptr);
    if (op == UpdateOp::kDelete) {
      look_aside_.erase(p.bits(), len);
    } else {
      look_aside_.insert(p.bits(), len, route.hop);
    }
    return;
  }

  if (len <= cfg_.min_bmp) {
    check_presence(low_routes_.count(p) > 0);
    if (op == UpdateOp::kDelete) {
      low_routes_.erase(p);
    } else {
      low_routes_[p] = route.hop;
    }
    reconcile_expansion(p);
    return;
  }

  Bitmap& bm = bitmaps_[len - cfg_.min_bmp];
  check_presence(bm.test(p.bits()));
  const std::uint64_t key = bit_mark_key(p, cfg_);
  if (op == UpdateOp::kDelete) {
    bm.reset(p.bits());
    hash_.erase(key);
  } else {
    hash_put(key, route.hop);
    bm.set(p.bits());
  }
}

CramProgram ResailStructure::to_program() const {
  CramProgram prog;
  std::vector<std::size_t> first;
  std::set<std::string> hits;
  if (!look_aside_.empty()) {
    TableSpec t;
    t.name = "look_aside";
    t.match_kind = MatchKind::kTernary;
    t.key_bits = static_cast<std::uint64_t>(family_.width);
    t.max_entries = look_aside_.size();
    t.data_bits = static_cast<std::uint64_t>(hop_bits_);
    first.push_back(prog.add_step(t, {"addr"}, {"la_hop"}));
    hits.insert("la_hop");
  }
  for (int i = cfg_.pivot; i >= cfg_.min_bmp; --i) {
    TableSpec t;
    t.name = "bitmap_" + std::to_string(i);
    t.match_kind = MatchKind::kExact;
    t.key_bits = static_cast<std::uint64_t>(i);
    t.max_entries = std::uint64_t{1} << i;
    t.data_bits = 1;
    t.direct_indexed = true;
    const std::string reg = "hit_" + std::to_string(i);
    first.push_back(prog.add_step(t, {"addr"}, {reg}));
    hits.insert(reg);
  }
  TableSpec h;
  h.name = "hash";
  h.match_kind = MatchKind::kExact;
  h.key_bits = static_cast<std::uint64_t>(cfg_.pivot + 1);
  h.max_entries = hash_.capacity();
  h.data_bits = static_cast<std::uint64_t>(hop_bits_);
  hits.insert("addr");
  const std::size_t last = prog.add_step(h, hits, {"hop"});
  for (auto s : first) prog.add_edge(s, last);
  prog.notes.push_back(
      "hash table SRAM counts allocated slots at load " +
      std::to_string(cfg_.dleft_load));
  prog.notes.push_back("one hash entry per expanded bitmap bit (no merging)");
  prog.notes.push_back("table default values are not counted");
  return prog;
}

void ResailStructure::corrupt_hash_entry(std::uint64_t key, NextHop hop) {
  if (!hash_.find(key)) throw std::out_of_range("no such hash key");
  hash_.insert(key, hop);
}

nlohmann::json ResailStructure::to_json() const {
  nlohmann::json j;
  j["scheme"] = "resail";
  j["family"] = family_to_json(family_);
  j["hop_bits"] = hop_bits_;
  j["default_hop"] = hop_to_json(default_hop_);
  j["config"] = {{"pivot", cfg_.pivot},
                 {"min_bmp", cfg_.min_bmp},
                 {"dleft_ways", cfg_.dleft_ways},
                 {"dleft_load", cfg_.dleft_load},
                 {"seed", cfg_.seed}};
  auto& la = j["look_aside"] = nlohmann::json::array();
  for (const auto& e : look_aside_.entries()) {
    la.push_back({{"bits", e.value},
                  {"length", e.length},
                  {"hop", hop_to_json(e.payload)}});
  }
  auto& bms = j["bitmaps"] = nlohmann::json::array();
  for (const auto& b : bitmaps_) {
    bms.push_back({{"level", b.level()}, {"set", b.set_indices()}});
  }
  nlohmann::json ways = nlohmann::json::array();
  for (int w = 0; w < hash_.ways(); ++w) {
    nlohmann::json used = nlohmann::json::array();
    const auto slots = hash_.subtable(w);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].used) {
        used.push_back({i, slots[i].key, hop_to_json(slots[i].value)});
      }
    }
    ways.push_back({{"slots", slots.size()}, {"used", used}});
  }
  j["hash"] = {{"seed", hash_.seed()},
               {"capacity", hash_.capacity()},
               {"ways", ways}};
  std::vector<std::pair<IpPrefix, NextHop>> low(low_routes_.begin(),
                                                low_routes_.end());
  std::sort(low.begin(), low.end());
  auto& lr = j["low_routes"] = nlohmann::json::array();
  for (const auto& [p, h] : low) {
    lr.push_back(
        {{"bits", p.bits()}, {"length", p.length()}, {"hop", hop_to_json(h)}});
  }
  return j;
}

ResailStructure ResailStructure::from_json(const nlohmann::json& j) {
  if (j.at("scheme") != "resail") {
    throw std::invalid_argument("artifact is not a RESAIL structure");
  }
  const Family family = family_from_json(j.at("family"));
  ResailConfig cfg;
  const auto& c = j.at("config");
  cfg.pivot = c.at("pivot").get<int>();
  cfg.min_bmp = c.at("min_bmp").get<int>();
  cfg.dleft_ways = c.at("dleft_ways").get<int>();
  cfg.dleft_load = c.at("dleft_load").get<double>();
  cfg.seed = c.at("seed").get<std::uint64_t>();
  cfg.validate(family);
  ResailStructure s(family, j.at("hop_bits").get<int>(),
                    hop_from_json(j.at("default_hop")), cfg);
  for (const auto& e : j.at("look_aside")) {
    s.look_aside_.insert(e.at("bits").get<std::uint64_t>(),
                         e.at("length").get<int>(), hop_from_json(e.at("hop")));
  }
  for (const auto& b : j.at("bitmaps")) {
    const int level = b.at("level").get<int>();
    if (level < cfg.min_bmp || level > cfg.pivot) {
      throw std::invalid_argument("bitmap level out of range");
    }
    Bitmap& bm = s.bitmaps_[level - cfg.min_bmp];
    for (const auto& i : b.at("set")) {
      const auto idx = i.get<std::uint64_t>();
      if (idx >= bm.size()) throw std::invalid_argument("bitmap index range");
      bm.set(idx);
    }
  }
  const auto& h = j.at("hash");
  std::vector<std::vector<DLeftHashTable::Slot>> subtables;
  for (const auto& w : h.at("ways")) {
    std::vector<DLeftHashTable::Slot> slots(w.at("slots").get<std::size_t>());
    for (const auto& u : w.at("used")) {
      const auto i = u.at(0).get<std::size_t>();
      if (i >= slots.size()) throw std::invalid_argument("hash slot range");
      slots[i] = {u.at(1).get<std::uint64_t>(), hop_from_json(u.at(2)), true};
    }
    subtables.push_back(std::move(slots));
  }
  s.hash_ = DLeftHashTable::from_slots(h.at("seed").get<std::uint64_t>(),
                                       std::move(subtables));
  s.next_seed_ = s.hash_.seed() + 1;
  for (const auto& e : j.at("low_routes")) {
    s.low_routes_.emplace(
        IpPrefix::from_bits(family, e.at("bits").get<std::uint64_t>(),
                            e.at("length").get<int>()),
        hop_from_json(e.at("hop")));
  }
  return s;
}

}  // namespace cramlens
