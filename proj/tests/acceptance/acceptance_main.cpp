// Copyright 2026 The cramlens Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one line per criterion:
//   C<n> PASS|FAIL|SKIP <title>: <detail>
// and exits nonzero when any line is FAIL. Dataset-dependent criteria read
// full snapshots from CRAMLENS_V4_SNAPSHOT / CRAMLENS_V6_SNAPSHOT and SKIP
// without them; the synthetic stand-in numbers are printed for reference
// but never decide the verdict.

#include <fmt/core.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cramlens/bsic.hpp"
#include "cramlens/mashup.hpp"
#include "cramlens/oracle.hpp"
#include "cramlens/resail.hpp"
#include "cramlens/rmt.hpp"
#include "cramlens/scaling.hpp"
#include "cramlens/schemes.hpp"
#include "cramlens/version.hpp"
#include "fib_gen.hpp"

namespace cramlens {
namespace {

// Pinned tolerances.
constexpr double kC1MaxSeconds = 1.0;
constexpr double kC2MaxSeconds = 600.0;
constexpr int kC2FibsPerFamily = 100;
constexpr std::size_t kC2MinRoutes = 1000;
constexpr std::size_t kC2MaxRoutes = 50000;
constexpr std::size_t kC2Addresses = 100000;
constexpr std::size_t kC2ScanAddresses = 200;  // second oracle, per table
constexpr double kC5RelTol = 0.10;
constexpr int kC5StageSlack = 2;
constexpr std::size_t kC6OnsetBsicLo = 550000;
constexpr std::size_t kC6OnsetBsicHi = 700000;
constexpr std::size_t kC6OnsetResailLo = 3400000;
constexpr std::size_t kC6OnsetResailHi = 4200000;
constexpr double kC6OnsetResolution = 0.005;  // relative bisection width
constexpr int kC7Ops = 100;
constexpr std::size_t kC7Addresses = 10000;
constexpr std::uint64_t kSeed = 20230901;

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "PASS";
    case Verdict::kFail:
      return "FAIL";
    case Verdict::kSkip:
      return "SKIP";
  }
  return "?";
}

// Collects failed checks; the first few are kept for the report line.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    std::lock_guard<std::mutex> lock(mu_);
    ++total_;
    if (ok) return;
    ++failed_;
    if (notes_.size() < 5) notes_.push_back(what);
  }
  bool ok() const { return failed_ == 0; }
  std::size_t total() const { return total_; }
  std::string summary() const {
    std::string s = fmt::format("{}/{} checks failed", failed_, total_);
    for (const auto& n : notes_) s += "; " + n;
    return s;
  }

 private:
  std::mutex mu_;
  std::size_t total_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> notes_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool within(double got, double want, double rel) {
  return std::fabs(got - want) <= rel * std::fabs(want);
}

std::string fixture_path(const char* name) {
  return std::string(CRAMLENS_FIXTURE_DIR) + "/" + name;
}

// Every composition of `width` into positive strides.
std::vector<StridePlan> all_plans(int width) {
  std::vector<StridePlan> out;
  for (std::uint64_t cuts = 0; cuts < (std::uint64_t{1} << (width - 1));
       ++cuts) {
    StridePlan p;
    int run = 1;
    for (int i = 0; i < width - 1; ++i) {
      if (cuts >> i & 1) {
        p.strides.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    p.strides.push_back(run);
    out.push_back(p);
  }
  return out;
}

int bsic_max_depth(const BsicStructure& s) {
  std::function<int(std::size_t, std::uint32_t)> rec =
      [&](std::size_t level, std::uint32_t i) -> int {
    if (i == kNoNode) return 0;
    const auto& n = s.levels().at(level).at(i);
    return 1 + std::max(rec(level + 1, n.left), rec(level + 1, n.right));
  };
  int d = 0;
  for (const auto& e : s.initial().entries()) {
    if (e.payload.bst) d = std::max(d, rec(0, e.payload.root));
  }
  return d;
}

// ---- C1 -------------------------------------------------------------------

Outcome worked_examples() {
  const auto t0 = std::chrono::steady_clock::now();
  Checks c;
  const Fixture fx = load_fib_file(fixture_path("table1.fib"));
  const Family toy = fx.fib.family();

  ResailConfig rc = ResailConfig::defaults_for(toy);
  rc.pivot = 6;
  rc.min_bmp = 0;
  const auto resail = ResailStructure::build(fx.fib, rc);
  std::vector<std::pair<std::uint64_t, std::string>> got;
  for (auto [k, v] : resail.hash_table().items()) got.emplace_back(k, fx.label(v));
  std::sort(got.begin(), got.end());
  const std::vector<std::pair<std::uint64_t, std::string>> want{
      {0b0101001, "A"}, {0b0111000, "B"}, {0b1001001, "C"}, {0b1001011, "D"}};
  c.expect(got == want, "RESAIL hash entries differ from the worked example");

  const auto it = build_initial_table(fx.fib, BsicConfig{4});
  struct Row {
    std::uint64_t bits;
    int length;
    bool bst;
    const char* hop;
  };
  const std::vector<Row> rows{{0b0101, 4, true, ""},
                              {0b1001, 4, true, ""},
                              {0b1010, 4, true, ""},
                              {0b011, 3, false, "B"}};
  bool rows_ok = it.entries.size() == rows.size();
  for (std::size_t i = 0; rows_ok && i < rows.size(); ++i) {
    const auto& e = it.entries[i];
    rows_ok = e.bits == rows[i].bits && e.length == rows[i].length &&
              e.action.bst == rows[i].bst &&
              (rows[i].bst || fx.label(e.action.hop) == rows[i].hop);
  }
  c.expect(rows_ok, "BSIC initial table differs");

  auto label = [&fx](NextHop h) { return h.is_none() ? "-" : fx.label(h); };
  const BstGroup* g = nullptr;
  for (const auto& grp : it.groups) {
    if (grp.slice == 0b1001) g = &grp;
  }
  c.expect(g != nullptr, "no tree for slice 1001");
  if (g != nullptr) {
    const auto ranges = expand_ranges(g->residuals, 4, g->inherited);
    c.expect(format_ranges(ranges, 4, label) ==
                 "0000 - 0011 C\n0100 - 0100 A\n0101 - 0111 D\n"
                 "1000 - 1001 -\n1010 - 1010 B\n1011 - 1011 C\n"
                 "1100 - 1111 -\n",
             "interval list for slice 1001 differs");
    const Bst t = build_bst(ranges);
    auto node = [&t](int i) { return t.nodes.at(static_cast<std::size_t>(i)); };
    bool shape = t.nodes.size() == 7 && t.depth() == 3;
    if (shape) {
      const auto root = node(t.root);
      const auto l = node(root.left);
      const auto r = node(root.right);
      shape = root.endpoint == 0b1000 && label(root.hop) == "-" &&
              l.endpoint == 0b0100 && label(l.hop) == "A" &&
              r.endpoint == 0b1011 && label(r.hop) == "C" &&
              node(l.left).endpoint == 0b0000 &&
              node(l.right).endpoint == 0b0101 &&
              node(r.left).endpoint == 0b1010 &&
              node(r.right).endpoint == 0b1100;
    }
    c.expect(shape, "tree for slice 1001 has the wrong shape");
  }

  const double secs = seconds_since(t0);
  c.expect(secs < kC1MaxSeconds, fmt::format("took {:.3f} s", secs));
  return {c.ok() ? Verdict::kPass : Verdict::kFail,
          fmt::format("{}; {:.3f} s", c.summary(), secs)};
}

// ---- C2 + C3 --------------------------------------------------------------

struct SchemeSetup {
  ResailConfig resail;
  BsicConfig bsic;
  MashupConfig mashup;
};

SchemeSetup setup_for(Family fam) {
  SchemeSetup s;
  s.resail = ResailConfig::defaults_for(fam);
  s.bsic = BsicConfig::defaults_for(fam);
  s.mashup = MashupConfig::defaults_for(fam);
  if (fam == Family::ipv4()) {
    s.resail.min_bmp = 13;
    s.bsic.k = 16;
    s.mashup.plan = StridePlan::parse("16-4-4-8");
  } else {
    s.bsic.k = 24;
    s.mashup.plan = StridePlan::parse("20-12-16-16");
  }
  return s;
}

// Exhaustive toy sweep over every legal parameter choice.
void toy_exhaustive(Checks& eq, Checks& lat) {
  std::vector<Fib> fibs{load_fib_file(fixture_path("table1.fib")).fib};
  for (std::uint64_t s = 0; s < 8; ++s) {
    fibs.push_back(testing::random_fib(Family::toy(8), 8 + 16 * s, kSeed + s));
  }
  auto sweep_all = [&](const Fib& f, const auto& build, const char* what) {
    const auto st = build();
    bool ok = true;
    for (Address a = 0; a < (Address{1} << f.family().width) && ok; ++a) {
      ok = st.lookup(a) == scan_lookup(f, a);
    }
    eq.expect(ok, fmt::format("{} mismatch on a toy table", what));
    return st;
  };
  for (const auto& f : fibs) {
    for (int pivot = 0; pivot <= 8; ++pivot) {
      for (int mb = 0; mb <= pivot; ++mb) {
        ResailConfig rc = ResailConfig::defaults_for(f.family());
        rc.pivot = pivot;
        rc.min_bmp = mb;
        const auto s = sweep_all(
            f, [&] { return ResailStructure::build(f, rc); }, "resail");
        lat.expect(latency_steps(s.to_program()) == 2, "resail toy latency");
      }
    }
    for (int k = 1; k <= 8; ++k) {
      const auto s = sweep_all(
          f, [&] { return BsicStructure::build(f, BsicConfig{k}); }, "bsic");
      lat.expect(latency_steps(s.to_program()) ==
                     1u + static_cast<std::uint64_t>(bsic_max_depth(s)),
                 "bsic toy latency");
    }
    for (const auto& plan : all_plans(8)) {
      MashupConfig mc = MashupConfig::defaults_for(f.family());
      mc.plan = plan;
      const auto s = sweep_all(
          f, [&] { return MashupStructure::build(f, mc); }, "mashup");
      lat.expect(latency_steps(s.to_program()) == plan.strides.size(),
                 "mashup toy latency");
    }
  }
  const Fib fig3 = load_fib_file(fixture_path("fig3.fib")).fib;
  for (const auto& plan : all_plans(4)) {
    MashupConfig mc = MashupConfig::defaults_for(fig3.family());
    mc.plan = plan;
    sweep_all(fig3, [&] { return MashupStructure::build(fig3, mc); },
              "mashup (4-bit)");
  }
}

struct RandomJob {
  Family family;
  std::size_t routes;
  std::uint64_t seed;
};

void random_job(const RandomJob& job, Checks& eq, Checks& lat) {
  const Fib f = testing::random_fib(job.family, job.routes, job.seed);
  const auto cfg = setup_for(job.family);
  const auto trie = build_trie(f);
  const auto addrs = testing::random_addresses(f, kC2Addresses, job.seed + 1);
  const auto resail = ResailStructure::build(f, cfg.resail);
  const auto bsic = BsicStructure::build(f, cfg.bsic);
  const auto mashup = MashupStructure::build(f, cfg.mashup);
  std::size_t bad[3] = {0, 0, 0};
  for (std::size_t i = 0; i < addrs.size(); ++i) {
    const Address a = addrs[i];
    const NextHop want = trie.lookup(a);
    if (i < kC2ScanAddresses && want != scan_lookup(f, a)) {
      eq.expect(false, "trie and scan oracles disagree");
    }
    bad[0] += resail.lookup(a) != want;
    bad[1] += bsic.lookup(a) != want;
    bad[2] += mashup.lookup(a) != want;
  }
  const std::string tag =
      fmt::format("{} n={} seed={}", job.family.name(), job.routes, job.seed);
  eq.expect(bad[0] == 0, fmt::format("resail {} mismatches ({})", bad[0], tag));
  eq.expect(bad[1] == 0, fmt::format("bsic {} mismatches ({})", bad[1], tag));
  eq.expect(bad[2] == 0, fmt::format("mashup {} mismatches ({})", bad[2], tag));

  lat.expect(latency_steps(resail.to_program()) == 2,
             "resail latency != 2 (" + tag + ")");
  lat.expect(latency_steps(mashup.to_program()) ==
                 cfg.mashup.plan.strides.size(),
             "mashup latency != stride count (" + tag + ")");
  lat.expect(latency_steps(bsic.to_program()) ==
                 1u + static_cast<std::uint64_t>(bsic_max_depth(bsic)),
             "bsic latency != 1 + depth (" + tag + ")");
}

std::pair<Outcome, Outcome> equivalence_and_latency() {
  const auto t0 = std::chrono::steady_clock::now();
  Checks eq;
  Checks lat;
  toy_exhaustive(eq, lat);

  std::vector<RandomJob> jobs;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> logn(std::log(double(kC2MinRoutes)),
                                              std::log(double(kC2MaxRoutes)));
  for (auto fam : {Family::ipv4(), Family::ipv6()}) {
    for (int i = 0; i < kC2FibsPerFamily; ++i) {
      jobs.push_back({fam, static_cast<std::size_t>(std::exp(logn(rng))),
                      rng()});
    }
  }
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        random_job(jobs[i], eq, lat);
      }
    });
  }
  for (auto& t : pool) t.join();

  const double secs = seconds_since(t0);
  eq.expect(secs < kC2MaxSeconds, fmt::format("took {:.0f} s", secs));
  Outcome c2{eq.ok() ? Verdict::kPass : Verdict::kFail,
             fmt::format("{} random tables x {} addresses, toy sweeps; {}; "
                         "{:.1f} s",
                         jobs.size(), kC2Addresses, eq.summary(), secs)};
  Outcome c3{lat.ok() ? Verdict::kPass : Verdict::kFail,
             fmt::format("{} programs; {}", lat.total(), lat.summary())};
  return {c2, c3};
}

// ---- C4 -------------------------------------------------------------------

Outcome capacity() {
  const ChipSpec chip;
  const auto v4 = logical_tcam_cost(0, 32, chip).capacity;
  const auto v6 = logical_tcam_cost(0, 64, chip).capacity;
  const bool ok = v4 == 245760 && v6 == 122880 && chip.total_blocks() == 480 &&
                  chip.stage_count == 20;
  return {ok ? Verdict::kPass : Verdict::kFail,
          fmt::format("v4 {} entries, v6 {} entries", v4, v6)};
}

// ---- C5 -------------------------------------------------------------------

struct V4Numbers {
  double sram_mib;
  std::uint64_t blocks;
  std::uint64_t pages;
  int stages;
};

V4Numbers resail_numbers(const Fib& f) {
  ResailConfig rc = ResailConfig::defaults_for(Family::ipv4());
  rc.min_bmp = 13;
  const auto prog = ResailStructure::build(f, rc).to_program();
  const auto m = map_program(prog, ChipSpec{});
  return {static_cast<double>(sram_bits(prog)) / kBitsPerMiB, m.total_blocks,
          m.total_pages, m.stage_total};
}

struct V6Numbers {
  double tcam_mib;
  double sram_mib;
  std::uint64_t steps;
};

V6Numbers bsic_numbers(const Fib& f) {
  const auto prog = BsicStructure::build(f, BsicConfig{24}).to_program();
  return {static_cast<double>(tcam_bits(prog)) / kBitsPerMiB,
          static_cast<double>(sram_bits(prog)) / kBitsPerMiB,
          latency_steps(prog)};
}

bool v4_ok(const V4Numbers& n) {
  return within(n.sram_mib, 8.58, kC5RelTol) &&
         within(static_cast<double>(n.blocks), 2, kC5RelTol) &&
         within(static_cast<double>(n.pages), 556, kC5RelTol) &&
         std::abs(n.stages - 9) <= kC5StageSlack;
}

bool v6_ok(const V6Numbers& n) {
  return within(n.tcam_mib, 0.02, kC5RelTol) &&
         within(n.sram_mib, 3.18, kC5RelTol) &&
         within(static_cast<double>(n.steps), 14, kC5RelTol);
}

std::string describe(const V4Numbers& n) {
  return fmt::format("RESAIL {:.2f} MiB, {} blocks, {} pages, {} stages",
                     n.sram_mib, n.blocks, n.pages, n.stages);
}

std::string describe(const V6Numbers& n) {
  return fmt::format("BSIC k24 {:.3f} MiB TCAM, {:.2f} MiB SRAM, {} steps",
                     n.tcam_mib, n.sram_mib, n.steps);
}

std::optional<Fib> snapshot(const char* env) {
  const char* p = std::getenv(env);
  if (p == nullptr || *p == '\0') return std::nullopt;
  return load_fib_file(p).fib;
}

Fib synthetic_v4() {
  return synthesize(testing::v4_reference_histogram(), Family::ipv4(), 64,
                    kSeed);
}

// Inside 000::/3 so the multiverse precondition holds.
Fib synthetic_v6() {
  return synthesize(testing::v6_reference_histogram(), Family::ipv6(), 64,
                    kSeed, IpPrefix(Family::ipv6(), 0, 3));
}

Outcome dataset(const std::optional<Fib>& v4, const std::optional<Fib>& v6) {
  if (!v4 && !v6) {
    return {Verdict::kSkip,
            fmt::format("no snapshot (set CRAMLENS_V4_SNAPSHOT / "
                        "CRAMLENS_V6_SNAPSHOT); synthetic stand-in, not "
                        "judged: {}; {}",
                        describe(resail_numbers(synthetic_v4())),
                        describe(bsic_numbers(synthetic_v6())))};
  }
  Checks c;
  std::string detail;
  if (v4) {
    const auto n = resail_numbers(*v4);
    c.expect(v4_ok(n), "v4 outside tolerance");
    detail += fmt::format("v4 {} routes: {}", v4->size(), describe(n));
  } else {
    detail += "v4 snapshot absent";
  }
  if (v6) {
    const auto n = bsic_numbers(*v6);
    c.expect(v6_ok(n), "v6 outside tolerance");
    detail += fmt::format("; v6 {} routes: {}", v6->size(), describe(n));
  } else {
    detail += "; v6 snapshot absent";
  }
  // Half a criterion is not a pass.
  const Verdict v = !c.ok() ? Verdict::kFail
                            : (v4 && v6 ? Verdict::kPass : Verdict::kSkip);
  return {v, detail};
}

// ---- C6 -------------------------------------------------------------------

Outcome sweep_monotone() {
  Checks c;
  const ChipSpec chip;
  const Fib v4 = synthesize(testing::v4_reference_histogram(50000),
                            Family::ipv4(), 64, kSeed + 6);
  const std::vector<std::size_t> sizes{50000, 100000, 200000, 400000};
  auto check = [&](const std::vector<SweepRow>& rows, const std::string& what) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      c.expect(rows[i].tcam_blocks >= rows[i - 1].tcam_blocks &&
                   rows[i].sram_pages >= rows[i - 1].sram_pages &&
                   rows[i].stages >= rows[i - 1].stages,
               fmt::format("{} decreases at size {}", what, rows[i].size));
    }
  };
  for (auto s : {Scheme::kResail, Scheme::kBsic, Scheme::kMashup,
                 Scheme::kLogicalTcam, Scheme::kSail}) {
    check(sweep(s, v4, sizes, chip, SchemeParams{}, ScaleMode::kByLength,
                kSeed),
          scheme_name(s) + " v4");
  }
  const Fib v6 = synthesize(testing::v6_reference_histogram(25000),
                            Family::ipv6(), 64, kSeed + 7,
                            IpPrefix(Family::ipv6(), 0, 3));
  const std::vector<std::size_t> v6_sizes{25000, 50000, 100000, 200000};
  for (auto s : {Scheme::kResail, Scheme::kBsic, Scheme::kMashup,
                 Scheme::kLogicalTcam}) {
    check(sweep(s, v6, v6_sizes, chip, SchemeParams{}, ScaleMode::kMultiverse,
                kSeed),
          scheme_name(s) + " v6");
  }
  return {c.ok() ? Verdict::kPass : Verdict::kFail,
          fmt::format("blocks, pages and stages over 9 sweeps; {}",
                      c.summary())};
}

// Smallest size whose mapping is infeasible, by bisection over sizes
// produced by `make`. nullopt when even `hi` fits.
std::optional<std::size_t> onset(
    std::size_t lo, std::size_t hi,
    const std::function<bool(std::size_t)>& feasible) {
  if (!feasible(lo)) return lo;
  if (feasible(hi)) return std::nullopt;
  while (static_cast<double>(hi - lo) >
         kC6OnsetResolution * static_cast<double>(lo)) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (feasible(mid) ? lo : hi) = mid;
  }
  return hi;
}

std::optional<std::size_t> bsic_onset(const Fib& v6) {
  return onset(v6.size(), 8 * v6.size(), [&](std::size_t n) {
    const Fib f = multiverse_to_size(v6, n, kSeed);
    return map_program(BsicStructure::build(f, BsicConfig{24}).to_program(),
                       ChipSpec{})
        .feasible;
  });
}

std::optional<std::size_t> resail_onset(const Fib& v4) {
  // Stop before any length runs out of address space.
  const auto h = length_histogram(v4);
  double cap = 8.0;
  for (std::size_t L = 0; L < h.counts.size(); ++L) {
    if (h.counts[L] == 0) continue;
    cap = std::min(cap, std::ldexp(1.0, static_cast<int>(L)) /
                            static_cast<double>(h.counts[L]));
  }
  const auto hi = static_cast<std::size_t>(
      std::floor(0.999 * cap * static_cast<double>(v4.size())));
  return onset(v4.size(), std::max(hi, v4.size()), [&](std::size_t n) {
    const Fib f = scale_by_length(
        v4, static_cast<double>(n) / static_cast<double>(v4.size()), kSeed);
    ResailConfig rc = ResailConfig::defaults_for(Family::ipv4());
    rc.min_bmp = 13;
    return map_program(ResailStructure::build(f, rc).to_program(), ChipSpec{})
        .feasible;
  });
}

std::string onset_text(const std::optional<std::size_t>& n) {
  return n ? fmt::format("{}", *n) : std::string("none");
}

// Returns (ks attaining the minimum stage count, stage list).
std::pair<std::vector<int>, std::string> k_minimum(const Fib& v6) {
  const std::vector<int> ks{12, 16, 20, 24, 28, 32};
  const auto rows = k_sweep(v6, ks, ChipSpec{}, kSeed);
  int best = rows.front().stages;
  for (const auto& r : rows) best = std::min(best, r.stages);
  std::vector<int> argmin;
  std::string stages;
  for (const auto& r : rows) {
    if (r.stages == best) argmin.push_back(*r.k);
    stages += fmt::format("{}k{}={}", stages.empty() ? "" : " ", *r.k,
                          r.stages);
  }
  return {argmin, stages};
}

// Real tables live in 2000::/3. Routes there move to 000::/3; anything
// else is dropped.
Fib universe_zero(const Fib& v6) {
  std::vector<Route> moved;
  for (const auto& r : v6) {
    if (r.prefix.length() < 3 || r.prefix.first_bits(3) > 1) continue;
    moved.push_back({IpPrefix(r.prefix.family(),
                              r.prefix.value() & bits::low_mask(61),
                              r.prefix.length()),
                     r.hop});
  }
  return Fib::from_routes(v6.family(), std::move(moved), v6.hop_bits());
}

Outcome sweep_conditional(const std::optional<Fib>& v4,
                          const std::optional<Fib>& v6) {
  if (!v4 && !v6) {
    return {Verdict::kSkip,
            "no snapshot; onsets and the k-sweep need a representative "
            "table (run `cramlens sweep` on synthetic data for curves)"};
  }
  Checks c;
  std::string detail;
  if (v6) {
    const auto n = bsic_onset(universe_zero(*v6));
    c.expect(n && *n >= kC6OnsetBsicLo && *n <= kC6OnsetBsicHi,
             "BSIC onset outside band");
    detail += "BSIC multiverse onset " + onset_text(n);
    const auto [argmin, stages] = k_minimum(*v6);
    c.expect(std::find(argmin.begin(), argmin.end(), 24) != argmin.end(),
             "k=24 does not minimise stages");
    detail += "; k-sweep " + stages;
  }
  if (v4) {
    const auto n = resail_onset(*v4);
    c.expect(n && *n >= kC6OnsetResailLo && *n <= kC6OnsetResailHi,
             "RESAIL onset outside band");
    detail += (detail.empty() ? "" : "; ") +
              std::string("RESAIL by-length onset ") + onset_text(n);
  }
  const Verdict v = !c.ok() ? Verdict::kFail
                            : (v4 && v6 ? Verdict::kPass : Verdict::kSkip);
  return {v, detail + "; " + c.summary()};
}

// ---- C7 -------------------------------------------------------------------

Outcome churn() {
  Checks c;
  for (auto fam : {Family::ipv4(), Family::ipv6()}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      Fib f = testing::random_fib(fam, 5000 + 3000 * s, kSeed + 70 + s);
      const auto cfg = setup_for(fam);
      auto resail = ResailStructure::build(f, cfg.resail);
      auto mashup = MashupStructure::build(f, cfg.mashup);
      for (const auto& op : testing::random_churn(f, kC7Ops, kSeed + s)) {
        resail.update(op.op, op.route);
        mashup.update(op.op, op.route);
      }
      const auto bsic = bsic_rebuild(f, cfg.bsic);
      const auto trie = build_trie(f);
      std::size_t bad[3] = {0, 0, 0};
      for (auto a : testing::random_addresses(f, kC7Addresses, kSeed + s)) {
        const NextHop want = trie.lookup(a);
        bad[0] += resail.lookup(a) != want;
        bad[1] += mashup.lookup(a) != want;
        bad[2] += bsic.lookup(a) != want;
      }
      c.expect(bad[0] + bad[1] + bad[2] == 0,
               fmt::format("{} seed {}: resail {} mashup {} bsic {}",
                           fam.name(), s, bad[0], bad[1], bad[2]));
    }
  }
  return {c.ok() ? Verdict::kPass : Verdict::kFail,
          fmt::format("10 tables x {} ops; {}", kC7Ops, c.summary())};
}

int run() {
  fmt::print("cramlens {} acceptance, seed {}\n", kVersion, kSeed);
  bool failed = false;
  auto report = [&](const char* id, const char* title, const Outcome& o) {
    fmt::print("{} {} {}: {}\n", id, verdict_name(o.verdict), title, o.detail);
    std::fflush(stdout);
    failed = failed || o.verdict == Verdict::kFail;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{Verdict::kFail, std::string("exception: ") + e.what()};
    }
  };

  report("C1", "worked examples", guarded(worked_examples));
  std::pair<Outcome, Outcome> eq;
  try {
    eq = equivalence_and_latency();
  } catch (const std::exception& e) {
    eq.first = eq.second = {Verdict::kFail, std::string("exception: ") + e.what()};
  }
  report("C2", "oracle equivalence", eq.first);
  report("C3", "latency structure", eq.second);
  report("C4", "logical TCAM capacity", guarded(capacity));

  std::optional<Fib> v4;
  std::optional<Fib> v6;
  try {
    v4 = snapshot("CRAMLENS_V4_SNAPSHOT");
    v6 = snapshot("CRAMLENS_V6_SNAPSHOT");
  } catch (const std::exception& e) {
    report("C5", "dataset reproduction",
           {Verdict::kFail, std::string("snapshot unreadable: ") + e.what()});
    return 1;
  }
  report("C5", "dataset reproduction", guarded([&] { return dataset(v4, v6); }));
  report("C6", "sweep monotonicity", guarded(sweep_monotone));
  report("C6", "scaling onsets and k-sweep",
         guarded([&] { return sweep_conditional(v4, v6); }));
  report("C7", "update churn", guarded(churn));
  return failed ? 1 : 0;
}

}  // namespace
}  // namespace cramlens

int main() { return cramlens::run(); }
