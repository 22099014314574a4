#include <catch2/catch_amalgamated.hpp>

#include <sumsets/core.hpp>
#include <sumsets/rigbounds.hpp>

#include "reference_tables.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

using namespace sumsets;
using namespace sumsets::rigbounds;

TEST_CASE("prefix analysis, hand examples") {
  // n=2, beta={0}: miss at 1 is definite, 2 and 3 are likely
  core::RepCounts rc = core::init_repcounts(2, 0b01);
  BetaAnalysis ba = analyze_beta_mask(2, 0b01, rc);
  CHECK(ba.definite_count == 1);
  CHECK(ba.min_likely == 2);
  CHECK(ba.mu_scaled == 2);   // P(2 missing) = 1/2
  CHECK(ba.eta_scaled == 14); // 5/2 + 1/2 + 1/2, times 4

  // n=2, beta={0,1}: nothing below 2 missing, only 3 still can
  rc = core::init_repcounts(2, 0b11);
  ba = analyze_beta_mask(2, 0b11, rc);
  CHECK(ba.definite_count == 0);
  CHECK(ba.min_likely == 3);
  CHECK(ba.mu_scaled == 1);  // 3 = 1+2 or 0+3: missing with probability 1/4
  CHECK(ba.eta_scaled == 6); // 5/4 + 1/4, times 4

  // n=4, beta={0,2}: 1 and 3 definite; 4 = 2+2 present; 5, 6, 7 likely
  rc = core::init_repcounts(4, 0b0101);
  ba = analyze_beta_mask(4, 0b0101, rc);
  CHECK(ba.definite_count == 2);
  CHECK(ba.min_likely == 5);
  CHECK(ba.mu_scaled == 8);
  CHECK(ba.eta_scaled == 36);

  core::BitSubset beta(4, {0, 2});
  BetaAnalysis same = analyze_beta(beta, rc);
  CHECK(same.definite_count == ba.definite_count);
  CHECK(same.eta_scaled == ba.eta_scaled);
  core::BitSubset no_zero(4, {1, 2});
  CHECK_THROWS_AS(analyze_beta(no_zero, rc), std::invalid_argument);
}

TEST_CASE("eta dominates mu for every prefix") {
  const uint32_t n = 10;
  core::gray_iterate(n, n, 0, [&, rc = core::RepCounts{}](uint64_t mask, int pos, bool ins) mutable {
    if (pos < 0)
      rc = core::init_repcounts(n, mask);
    else
      core::update_repcounts(rc, mask, uint32_t(pos), ins);
    BetaAnalysis ba = analyze_beta_mask(n, mask, rc);
    REQUIRE(ba.eta_scaled >= ba.mu_scaled);
    REQUIRE(ba.mu_scaled >= 1);
  });
}

TEST_CASE("contribution rows, hand example") {
  BetaAnalysis ba;
  ba.window = 4;
  ba.definite_count = 2;
  ba.min_likely = 5;
  ba.mu_scaled = 8;
  ba.eta_scaled = 36;
  BoundsAccumulator acc;
  acc.window = 4;
  contribute(ba, acc);
  CHECK(acc.processed == 1);
  CHECK(acc.lower[2] == 0);
  CHECK(acc.upper[2] == 8);    // 16 - mu
  CHECK(acc.overhang[2] == 36);
  CHECK(acc.lower[3] == 0);
  CHECK(acc.upper[3] == 16);   // min(2^n, eta)
  CHECK(acc.upper[0] == 0);
  BetaAnalysis wrong = ba;
  wrong.window = 5;
  CHECK_THROWS_AS(contribute(wrong, acc), std::invalid_argument);
}

TEST_CASE("combined bounds at n=2 match the exact aggregation") {
  IntervalVector z = combine(enumerate_shard(2, 2, 0));
  CHECK(z.window == 2);
  CHECK(z.kind == Kind::z);
  CHECK(z.upper[0] == Rational(3, 8));
  CHECK(z.upper[1] == Rational(3, 4));
  CHECK(z.upper[2] == Rational(7, 8));
  CHECK(z.upper[3] == 1);
  for (uint32_t k = 0; k < kTableSize; ++k) {
    CHECK(z.lower[k] >= 0);
    CHECK(z.lower[k] <= z.upper[k]);
  }
}

TEST_CASE("enumerate_shard equals the per-prefix slow path") {
  const uint32_t n = 12;
  BoundsAccumulator slow;
  slow.window = n;
  slow.split = n;
  slow.shards = {0};
  core::RepCounts rc;
  core::gray_iterate(n, n, 0, [&](uint64_t mask, int pos, bool ins) {
    if (pos < 0)
      rc = core::init_repcounts(n, mask);
    else
      core::update_repcounts(rc, mask, uint32_t(pos), ins);
    core::BitSubset beta(n, mask);
    contribute(analyze_beta(beta, rc), slow);
  });
  BoundsAccumulator fast = enumerate_shard(n, n, 0);
  CHECK(fast.processed == slow.processed);
  for (uint32_t k = 0; k < kTableSize; ++k) {
    CHECK(fast.lower[k] == slow.lower[k]);
    CHECK(fast.upper[k] == slow.upper[k]);
    CHECK(fast.overhang[k] == slow.overhang[k]);
  }
}

TEST_CASE("enumeration is deterministic and shard splits merge to the full run") {
  BoundsAccumulator once = enumerate_shard(11, 11, 0);
  BoundsAccumulator twice = enumerate_shard(11, 11, 0);
  CHECK(once.lower == twice.lower);
  CHECK(once.upper == twice.upper);
  CHECK(once.overhang == twice.overhang);

  const uint32_t n = 11, n1 = 8;
  std::vector<BoundsAccumulator> parts;
  for (uint64_t i = 0; i < (uint64_t(1) << (n - n1)); ++i)
    parts.push_back(enumerate_shard(n, n1, i << n1));
  // fold right-to-left; merge order must not matter
  BoundsAccumulator folded = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) folded = merge(parts[i], folded);
  IntervalVector za = combine(folded);
  IntervalVector zb = combine(enumerate_shard(n, n, 0));
  // the full run uses a different split, so compare the rational bounds
  for (uint32_t k = 0; k < kTableSize; ++k) {
    CHECK(za.lower[k] == zb.lower[k]);
    CHECK(za.upper[k] == zb.upper[k]);
  }
}

TEST_CASE("merge and combine reject inconsistent inputs") {
  BoundsAccumulator a = enumerate_shard(10, 8, 0);
  BoundsAccumulator b = enumerate_shard(10, 8, 1u << 8);
  BoundsAccumulator other = enumerate_shard(11, 8, 0);
  CHECK_THROWS_AS(merge(a, other), integrity_error);
  CHECK_THROWS_AS(merge(a, a), integrity_error);
  CHECK_THROWS_AS(combine(a), integrity_error);  // one shard of four
  BoundsAccumulator ab = merge(a, b);
  CHECK_THROWS_AS(combine(ab), integrity_error);
  BoundsAccumulator full = merge(merge(ab, enumerate_shard(10, 8, 2u << 8)),
                                 enumerate_shard(10, 8, 3u << 8));
  IntervalVector z = combine(full);
  CHECK(z.upper[0] < 1);
}

TEST_CASE("derived interval vectors") {
  IntervalVector z = combine(enumerate_shard(14, 14, 0));
  IntervalVector y = derive_y(z);
  IntervalVector m = derive_convolution(y, Convolution::m_from_y);
  IntervalVector w = derive_convolution(z, Convolution::w_from_z);
  CHECK(y.kind == Kind::y);
  CHECK(m.kind == Kind::m);
  CHECK(w.kind == Kind::w);
  for (const IntervalVector* v : {&y, &m, &w})
    for (uint32_t k = 0; k < kTableSize; ++k) {
      CHECK(v->lower[k] >= 0);
      CHECK(v->lower[k] <= v->upper[k]);
      CHECK(v->upper[k] <= 1);
    }
  // y(0) = z(0)/2, m(0) = y(0)^2, w(0) = z(0)^2
  CHECK(y.lower[0] == z.lower[0] / 2);
  CHECK(m.lower[0] == y.lower[0] * y.lower[0]);
  CHECK(w.upper[0] == z.upper[0] * z.upper[0]);
  CHECK_THROWS_AS(derive_y(y), std::invalid_argument);
  CHECK_THROWS_AS(derive_convolution(z, Convolution::m_from_y), std::invalid_argument);
  CHECK_THROWS_AS(derive_convolution(y, Convolution::w_from_z), std::invalid_argument);
}

TEST_CASE("windows give intersecting intervals and sub-unit lower mass") {
  IntervalVector z12 = combine(enumerate_shard(12, 12, 0));
  IntervalVector z14 = combine(enumerate_shard(14, 14, 0));
  Rational mass = 0;
  for (uint32_t k = 0; k < kTableSize; ++k) {
    CHECK(z12.lower[k] <= z14.upper[k]);
    CHECK(z14.lower[k] <= z12.upper[k]);
    mass += z12.lower[k];
  }
  CHECK(mass < 1);
}

TEST_CASE("bounds at n=20 intersect the reference tables") {
  IntervalVector z = combine(enumerate_shard(20, 20, 0));
  IntervalVector y = derive_y(z);
  IntervalVector m = derive_convolution(y, Convolution::m_from_y);
  IntervalVector w = derive_convolution(z, Convolution::w_from_z);
  auto intersects = [](const IntervalVector& v, const std::array<reference::Row, 32>& table) {
    for (uint32_t k = 0; k < kTableSize; ++k) {
      Rational ref_lo(table[k].lower, 100000), ref_hi(table[k].upper, 100000);
      REQUIRE(v.lower[k] <= ref_hi);
      REQUIRE(ref_lo <= v.upper[k]);
    }
  };
  intersects(z, reference::kZ);
  intersects(y, reference::kY);
  intersects(m, reference::kM);
  intersects(w, reference::kW);
}

namespace {

// Exhaustive check of the per-prefix inequalities.  Fixing the window-2n set
// S = beta | (gamma << n) fixes the misses below 2n exactly (elements >= 2n
// never produce sums < 2n), so tallying those misses over all gamma gives the
// scaled conditional distribution up to the tail above 2n, whose expected
// count is below 5 * 2^(-|beta|) whatever gamma is.  All quantities here are
// integers scaled by 2^n.
void check_prefix_inequalities(uint32_t n, uint64_t beta) {
  core::RepCounts rc = core::init_repcounts(n, beta);
  BetaAnalysis ba = analyze_beta_mask(n, beta, rc);
  std::array<uint64_t, 64> counts{};
  const uint32_t win = 2 * n;
  const uint64_t low_mask = (uint64_t(1) << win) - 1;
  for (uint64_t gamma = 0; gamma < (uint64_t(1) << n); ++gamma) {
    uint64_t set = beta | (gamma << n);
    uint64_t sums = 0, rest = set;
    while (rest) {
      uint32_t x = std::countr_zero(rest);
      rest &= rest - 1;
      sums |= set << x;
    }
    counts[win - std::popcount(sums & low_mask)] += 1;
  }
  const uint64_t slack = 5 * (uint64_t(1) << (n - std::popcount(beta)));
  const uint32_t d = ba.definite_count;
  std::array<uint64_t, 3> row_lower{}, row_upper{};
  uint64_t overhang = 0;
  contribution_rows(ba, [&](int vec, uint32_t k, uint64_t amount) {
    if (vec == 2) {
      overhang = amount;
      return;
    }
    REQUIRE(k >= d);
    REQUIRE(k <= d + 1);
    (vec == 0 ? row_lower : row_upper)[k - d] = amount;
  });
  for (uint32_t k = 0; k < d && k < 64; ++k) REQUIRE(counts[k] == 0);
  for (uint32_t i = 0; i < 2; ++i) {
    if (d + i >= kTableSize) continue;
    REQUIRE(row_lower[i] <= counts[d + i] + slack);
    REQUIRE(counts[d + i] <= row_upper[i] + slack);
  }
  for (uint32_t i = 2; d + i < 64; ++i) {
    if (counts[d + i] == 0) continue;
    // z(d+i | beta) <= overhang / i
    REQUIRE(uint64_t(i) * counts[d + i] <= overhang + uint64_t(i) * slack);
  }
}

}  // namespace

TEST_CASE("prefix inequalities hold against exhaustive window-2n tallies") {
  uint64_t state = 0x9E3779B97F4A7C15ULL;
  auto rnd = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  for (uint32_t n : {10u, 12u, 14u, 16u}) {
    check_prefix_inequalities(n, 1);                              // sparsest prefix
    check_prefix_inequalities(n, (uint64_t(1) << n) - 1);         // densest
    for (int it = 0; it < 100; ++it)
      check_prefix_inequalities(n, (rnd() & ((uint64_t(1) << n) - 1)) | 1);
  }
}

TEST_CASE("checkpoints round-trip and reject corruption") {
  BoundsAccumulator acc = merge(enumerate_shard(10, 8, 0), enumerate_shard(10, 8, 2u << 8));
  std::string path = "checkpoint_test.tmp";
  checkpoint_save(acc, path);
  BoundsAccumulator back = checkpoint_load(path);
  CHECK(back.window == acc.window);
  CHECK(back.split == acc.split);
  CHECK(back.shards == acc.shards);
  CHECK(back.processed == acc.processed);
  CHECK(back.lower == acc.lower);
  CHECK(back.upper == acc.upper);
  CHECK(back.overhang == acc.overhang);

  auto write_file = [&](const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    out << text;
  };
  std::ifstream in(path);
  std::string good((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  auto expect_reject = [&](std::string text) {
    write_file(text);
    CHECK_THROWS_AS(checkpoint_load(path), integrity_error);
  };
  expect_reject(good.substr(0, good.size() / 2));                          // truncated
  expect_reject(good + "junk");                                           // trailing content
  expect_reject("bounds-checkpoint 2\n" + good.substr(good.find("window")));

  std::string bad = good;
  bad.replace(bad.find("processed ") + 10, 1, "-");                       // sign sneaks in
  expect_reject(bad);
  size_t shard_line = good.find("shards 2 0 512");
  REQUIRE(shard_line != std::string::npos);
  bad = good;
  bad.replace(shard_line, 14, "shards 2 512 0");                          // not ascending
  expect_reject(bad);
  bad = good;
  bad.replace(shard_line, 14, "shards 2 0 513");                          // key off-grid
  expect_reject(bad);

  std::remove(path.c_str());
  CHECK_THROWS_AS(checkpoint_load(path), integrity_error);
}

TEST_CASE("checkpoint merge reassembles a sharded run") {
  std::vector<std::string> paths;
  for (uint64_t i = 0; i < 4; ++i) {
    std::string p = "checkpoint_shard" + std::to_string(i) + ".tmp";
    checkpoint_save(enumerate_shard(10, 8, i << 8), p);
    paths.push_back(p);
  }
  BoundsAccumulator merged = checkpoint_merge(paths);
  IntervalVector za = combine(merged);
  IntervalVector zb = combine(enumerate_shard(10, 10, 0));
  for (uint32_t k = 0; k < kTableSize; ++k) {
    CHECK(za.lower[k] == zb.lower[k]);
    CHECK(za.upper[k] == zb.upper[k]);
  }
  CHECK_THROWS_AS(checkpoint_merge({paths[0], paths[0]}), integrity_error);
  CHECK_THROWS_AS(checkpoint_merge({}), std::invalid_argument);
  for (const std::string& p : paths) std::remove(p.c_str());
}

TEST_CASE("denominator exponents") {
  CHECK(denominator_log2(Kind::z, 26) == 51);
  CHECK(denominator_log2(Kind::y, 26) == 67);
  CHECK(denominator_log2(Kind::m, 26) == 134);
  CHECK(denominator_log2(Kind::w, 26) == 102);
}

TEST_CASE("window capacity limits") {
  CHECK_THROWS_AS(enumerate_shard(1, 1, 0), capacity_error);
  CHECK_THROWS_AS(enumerate_shard(58, 20, 0), capacity_error);
}
