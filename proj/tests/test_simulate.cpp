#include <catch2/catch_amalgamated.hpp>

#include <sumsets/core.hpp>
#include <sumsets/simulate.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

using namespace sumsets;
using namespace sumsets::simulate;

TEST_CASE("tallies are deterministic in the seed") {
  TallyTable a = sample_m(12, 1 << 14, 7);
  TallyTable b = sample_m(12, 1 << 14, 7);
  TallyTable c = sample_m(12, 1 << 14, 8);
  CHECK(a.counts == b.counts);
  CHECK(a.counts != c.counts);
  uint64_t total = a.overflow;
  for (uint64_t v : a.counts) total += v;
  CHECK(total == a.samples);
}

TEST_CASE("worker count never changes the tallies") {
  TallyTable one = sample_z(1 << 14, 96, 3, 1);
  TallyTable four = sample_z(1 << 14, 96, 3, 4);
  CHECK(one.counts == four.counts);
  CHECK(one.overflow == four.overflow);
  FringeTable f1 = fringe_stats(32, 1 << 13, 5, 1);
  FringeTable f3 = fringe_stats(32, 1 << 13, 5, 3);
  CHECK(f1.counts == f3.counts);
  CHECK(f1.x_sums == f3.x_sums);
  CHECK(f1.w_sums == f3.w_sums);
}

TEST_CASE("window 1 leaves a single forced element") {
  // sample_z conditions on 0 being present, so A = {0} always and A+A = {0}
  TallyTable t = sample_z(1000, 1, 9);
  CHECK(t.counts.size() == 1);
  CHECK(t.counts[0] == 1000);
  CHECK(t.overflow == 0);
}

TEST_CASE("n=1 miss count is a fair coin") {
  // A = {0} fills the single sum position, A = {} misses it
  TallyTable t = sample_m(1, 100000, 1);
  REQUIRE(t.counts.size() == 2);
  CHECK(t.counts[0] + t.counts[1] == 100000);
  CHECK(double(t.counts[0]) > 49000);
  CHECK(double(t.counts[0]) < 51000);
}

TEST_CASE("left-fringe tallies match the known masses") {
  const uint64_t s = uint64_t(1) << 20;
  TallyTable t = sample_z(s, 256, 1);
  double z0 = double(t.counts[0]) / double(s);
  double z4 = double(t.counts[4]) / double(s);
  double z5 = double(t.counts[5]) / double(s);
  CHECK(z0 > 0.2355 - 0.002);
  CHECK(z0 < 0.2355 + 0.002);
  CHECK(z4 > 1.3 * z5);  // parity: even fringe counts run ahead of odd
}

TEST_CASE("windowed miss tallies track the exact distribution") {
  const uint32_t n = 16;
  const uint64_t s = uint64_t(1) << 20;
  core::ExactDistribution exact = core::brute_distribution(n);
  TallyTable t = sample_m(n, s, 2);
  double tv = 0;
  for (uint32_t k = 0; k < t.counts.size(); ++k) {
    double p = k < exact.masses.size() ? exact.masses[k].to_double() : 0.0;
    tv += std::abs(double(t.counts[k]) / double(s) - p);
  }
  CHECK(tv / 2 < 0.01);
}

TEST_CASE("missing 0 forces missing 1") {
  // 0 and 1 are both sums only when 0 is in the set, so M=1 never happens
  // with the smallest element at least 1; spot-check the raw sample stream
  uint64_t with_zero = 0, m_one = 0;
  detail::run_sample_stream(16, false, 42, 0, 10000,
                            [&](const uint64_t* set, const uint64_t* sum, size_t, size_t) {
                              bool zero = set[0] & 1;
                              with_zero += zero;
                              uint32_t missing = 0;
                              for (uint32_t k = 0; k < 31; ++k)
                                if (!((sum[k / 64] >> (k % 64)) & 1)) ++missing;
                              if (!zero) REQUIRE(missing >= 2);
                              m_one += missing == 1;
                            });
  CHECK(with_zero > 4500);
  CHECK(with_zero < 5500);
  CHECK(m_one > 0);  // but it does happen when 0 is present
}

TEST_CASE("confidence intervals cover the binomial rate") {
  // synthetic binomial draws at p=0.3: the 99.9% interval should rarely miss
  const double p = 0.3;
  const uint64_t s = 2000;
  uint64_t state = 0x2545F4914F6CDD1DULL;
  auto rnd = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  uint32_t misses = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    uint64_t hits = 0;
    for (uint64_t i = 0; i < s; ++i) hits += (rnd() >> 11) < uint64_t(p * (uint64_t(1) << 53));
    TallyTable tab;
    tab.kind = "z";
    tab.window = 4;
    tab.samples = s;
    tab.seed = 0;
    tab.counts = {hits, s - hits};
    ConfidenceTable ct = confidence(tab, 0.999);
    REQUIRE(ct.rows[0].lower <= ct.rows[0].estimate);
    REQUIRE(ct.rows[0].estimate <= ct.rows[0].upper);
    if (p < ct.rows[0].lower || p > ct.rows[0].upper) ++misses;
  }
  CHECK(misses <= 5);  // expect about one miss in a thousand
}

TEST_CASE("confidence endpoints at the boundary counts") {
  TallyTable tab;
  tab.kind = "z";
  tab.window = 4;
  tab.samples = 100;
  tab.seed = 0;
  tab.counts = {0, 100};
  ConfidenceTable ct = confidence(tab);
  CHECK(ct.rows[0].lower == 0.0);
  CHECK(ct.rows[0].estimate == 0.0);
  CHECK(ct.rows[0].upper > 0.0);
  CHECK(ct.rows[1].upper == 1.0);
  CHECK(ct.rows[1].lower < 1.0);
  CHECK_THROWS_AS(confidence(tab, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(confidence(tab, 1.0), std::invalid_argument);
}

TEST_CASE("two independent half tallies convolve to the miss tallies") {
  // m(k) = sum_i y(i) y(k-i): estimate both sides from separate runs and
  // require agreement within four combined standard errors
  const uint64_t s = uint64_t(1) << 20;
  TallyTable m = sample_m(128, s, 11);
  TallyTable y1 = sample_y(s, 256, 12);
  TallyTable y2 = sample_y(s, 256, 13);
  auto rate = [&](const TallyTable& t, uint32_t k) { return double(t.counts[k]) / double(s); };
  auto se2 = [&](const TallyTable& t, uint32_t k) {
    double p = rate(t, k);
    return p * (1 - p) / double(s);
  };
  for (uint32_t k = 0; k <= 10; ++k) {
    double conv = 0, var = 0;
    for (uint32_t i = 0; i <= k; ++i) {
      conv += rate(y1, i) * rate(y2, k - i);
      var += rate(y2, k - i) * rate(y2, k - i) * se2(y1, i) +
             rate(y1, i) * rate(y1, i) * se2(y2, k - i);
    }
    double direct = rate(m, k);
    double tol = 4 * std::sqrt(var + se2(m, k));
    INFO("k=" << k << " direct=" << direct << " conv=" << conv << " tol=" << tol);
    REQUIRE(std::abs(direct - conv) <= tol);
  }
}

TEST_CASE("conditional fringe means drift right with the miss count") {
  // 2^21 samples keeps every bin k <= 12 above 25k draws; the adjacent-bin
  // gaps appear at 30 standard errors or more
  FringeTable f = fringe_stats(256, uint64_t(1) << 21, 1);
  std::vector<FringeRow> rows = f.rows();
  REQUIRE(rows.size() >= 13);
  for (uint32_t k = 0; k <= 12; ++k) {
    REQUIRE(rows[k].k == k);
    REQUIRE(rows[k].count > 25000);
  }
  // a full window forces 0 into the set and the filled run to start at 0;
  // a single miss still requires 0 present, so X stays pinned there too
  CHECK(rows[0].mean_first_present == 0.0);
  CHECK(rows[0].mean_run_start == 0.0);
  CHECK(rows[1].mean_first_present == 0.0);
  CHECK(rows[1].mean_run_start > 0.0);
  for (uint32_t k = 2; k <= 12; ++k) {
    INFO("k=" << k);
    REQUIRE(rows[k].mean_first_present > rows[k - 1].mean_first_present);
    REQUIRE(rows[k].mean_run_start > rows[k - 1].mean_run_start);
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(sample_z(0, 256, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_z(10, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_z(10, 2000, 1), capacity_error);
  CHECK_THROWS_AS(sample_m(0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_m(1025, 10, 1), capacity_error);
  CHECK_THROWS_AS(sample_y(10, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(fringe_stats(0, 10, 1), std::invalid_argument);
}

TEST_CASE("stream quotas partition the sample count") {
  uint64_t total = 0;
  for (uint32_t s = 0; s < kStreamCount; ++s) total += stream_quota(1000003, s);
  CHECK(total == 1000003);
  CHECK(stream_quota(63, 0) == 1);
  CHECK(stream_quota(63, 63) == 0);
}
