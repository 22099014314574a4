#pragma once

// Monte Carlo estimation of the missing-sum statistics.
//
// All samplers draw from SplitMix64 split into kStreamCount fixed streams.
// Stream s always handles the same contiguous block of sample indexes, so a
// tally is a function of (kind, window, samples, seed) only; the worker count
// affects scheduling, never the result. Tallies from disjoint streams merge
// by addition in stream order.

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include <sumsets/arith.hpp>

namespace sumsets::simulate {

inline constexpr uint32_t kStreamCount = 64;
inline constexpr uint32_t kMaxSampleWindow = 1024;
inline constexpr const char* kGeneratorName = "splitmix64";

namespace detail {

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

struct SplitMix64 {
  uint64_t state = 0;

  uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    return detail::mix64(state);
  }
};

// Generator for one of the kStreamCount fixed streams of a run.
inline SplitMix64 stream_generator(uint64_t seed, uint32_t stream) {
  return SplitMix64{detail::mix64(seed + 0x9E3779B97F4A7C15ULL * (uint64_t{stream} + 1))};
}

// Number of samples assigned to a stream. Streams take contiguous quotas:
// stream 0 gets sample indexes [0, quota_0), stream 1 the next block, etc.
inline uint64_t stream_quota(uint64_t samples, uint32_t stream) {
  return samples / kStreamCount + (stream < samples % kStreamCount ? 1 : 0);
}

struct TallyTable {
  std::string kind;  // "z", "m", or "y"
  uint32_t window = 0;
  uint64_t samples = 0;
  uint64_t seed = 0;
  std::vector<uint64_t> counts;  // counts[k] = samples with miss count k
  uint64_t overflow = 0;         // samples whose statistic exceeds the table
};

struct ConfidenceRow {
  uint64_t count = 0;
  double estimate = 0;
  double lower = 0;
  double upper = 0;
};

struct ConfidenceTable {
  std::string kind;
  uint32_t window = 0;
  uint64_t samples = 0;
  uint64_t seed = 0;
  double level = 0.999;
  std::vector<ConfidenceRow> rows;
};

namespace detail {

// OR (src << shift) into dst. dst must have room for src_words plus the word
// offset plus one carry word; callers size it as 2 * src_words.
inline void or_shifted(const uint64_t* src, uint32_t src_words, uint64_t* dst, uint32_t shift) {
  const uint32_t wo = shift >> 6;
  const uint32_t bo = shift & 63u;
  if (bo == 0) {
    for (uint32_t i = 0; i < src_words; ++i) dst[wo + i] |= src[i];
    return;
  }
  uint64_t carry = 0;
  for (uint32_t i = 0; i < src_words; ++i) {
    const uint64_t v = src[i];
    dst[wo + i] |= (v << bo) | carry;
    carry = v >> (64 - bo);
  }
  dst[wo + src_words] |= carry;
}

struct SampleScratch {
  std::array<uint64_t, 16> set{};
  std::array<uint64_t, 32> sum{};
};

// Drives one stream: draws `quota` uniform subsets of [0, window) (optionally
// forcing 0 in), builds each sumset bitmap over [0, 2*window-1), and hands
// (set words, sum words, word counts) to `consume`.
template <class Consume>
void run_sample_stream(uint32_t window, bool force_zero, uint64_t seed, uint32_t stream,
                       uint64_t quota, Consume&& consume) {
  const uint32_t set_words = (window + 63) / 64;
  const uint32_t sum_words = 2 * set_words;
  const uint64_t top_mask =
      (window % 64 == 0) ? ~uint64_t{0} : ((uint64_t{1} << (window % 64)) - 1);
  SplitMix64 gen = stream_generator(seed, stream);
  SampleScratch s;
  for (uint64_t it = 0; it < quota; ++it) {
    for (uint32_t w = 0; w < set_words; ++w) s.set[w] = gen.next();
    s.set[set_words - 1] &= top_mask;
    if (force_zero) s.set[0] |= 1;
    std::fill(s.sum.begin(), s.sum.begin() + sum_words, uint64_t{0});
    for (uint32_t w = 0; w < set_words; ++w) {
      uint64_t bits = s.set[w];
      while (bits != 0) {
        const uint32_t x = w * 64 + static_cast<uint32_t>(std::countr_zero(bits));
        bits &= bits - 1;
        or_shifted(s.set.data(), set_words, s.sum.data(), x);
      }
    }
    consume(s.set.data(), s.sum.data(), set_words, sum_words);
  }
}

// Runs body(stream) for every stream, on up to `workers` threads. Results go
// into out[stream]; the caller folds them in index order.
template <class Local, class Body>
void map_streams(uint32_t workers, Body&& body, std::vector<Local>& out) {
  out.assign(kStreamCount, Local{});
  if (workers <= 1) {
    for (uint32_t s = 0; s < kStreamCount; ++s) out[s] = body(s);
    return;
  }
  std::atomic<uint32_t> next{0};
  const uint32_t nthreads = std::min(workers, kStreamCount);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (uint32_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const uint32_t s = next.fetch_add(1);
        if (s >= kStreamCount) return;
        out[s] = body(s);
      }
    });
  }
  for (auto& th : pool) th.join();
}

inline uint32_t popcount_range(const uint64_t* words, uint32_t nbits) {
  uint32_t total = 0;
  uint32_t full = nbits / 64;
  for (uint32_t i = 0; i < full; ++i) total += static_cast<uint32_t>(std::popcount(words[i]));
  if (nbits % 64 != 0)
    total += static_cast<uint32_t>(
        std::popcount(words[full] & ((uint64_t{1} << (nbits % 64)) - 1)));
  return total;
}

inline void check_sample_args(uint32_t window, uint64_t samples) {
  if (window == 0) throw std::invalid_argument("sampler: window must be >= 1");
  if (window > kMaxSampleWindow) throw capacity_error("sampler: window must be <= 1024");
  if (samples == 0) throw std::invalid_argument("sampler: need at least one sample");
}

}  // namespace detail

// Tally of k = |[0,W) \ (E+E)| over S uniform subsets E of [0,W) forced to
// contain 0. Misses at indexes >= W fall outside the tally by design.
inline TallyTable sample_z(uint64_t samples, uint32_t window = 256, uint64_t seed = 0,
                           uint32_t workers = 1) {
  detail::check_sample_args(window, samples);
  std::vector<std::vector<uint64_t>> locals;
  detail::map_streams<std::vector<uint64_t>>(
      workers,
      [&](uint32_t stream) {
        std::vector<uint64_t> counts(window, 0);
        detail::run_sample_stream(
            window, /*force_zero=*/true, seed, stream, stream_quota(samples, stream),
            [&](const uint64_t*, const uint64_t* sum, uint32_t, uint32_t) {
              const uint32_t k = window - detail::popcount_range(sum, window);
              counts[k] += 1;
            });
        return counts;
      },
      locals);
  TallyTable t{"z", window, samples, seed, std::vector<uint64_t>(window, 0), 0};
  for (const auto& local : locals)
    for (uint32_t k = 0; k < window; ++k) t.counts[k] += local[k];
  return t;
}

// Tally of M = (2n-1) - |A+A| over S uniform subsets A of [0,n), unforced.
inline TallyTable sample_m(uint32_t n, uint64_t samples, uint64_t seed = 0,
                           uint32_t workers = 1) {
  detail::check_sample_args(n, samples);
  const uint32_t kmax = 2 * n - 1;
  std::vector<std::vector<uint64_t>> locals;
  detail::map_streams<std::vector<uint64_t>>(
      workers,
      [&](uint32_t stream) {
        std::vector<uint64_t> counts(kmax + 1, 0);
        detail::run_sample_stream(
            n, /*force_zero=*/false, seed, stream, stream_quota(samples, stream),
            [&](const uint64_t*, const uint64_t* sum, uint32_t, uint32_t) {
              const uint32_t k = kmax - detail::popcount_range(sum, kmax);
              counts[k] += 1;
            });
        return counts;
      },
      locals);
  TallyTable t{"m", n, samples, seed, std::vector<uint64_t>(kmax + 1, 0), 0};
  for (const auto& local : locals)
    for (uint32_t k = 0; k <= kmax; ++k) t.counts[k] += local[k];
  return t;
}

// Tally of k = |[0, W/2) \ (A+A)| over S uniform subsets A of [0,W), unforced.
// The half-window miss count approximates the one-sided fringe distribution;
// used to cross-check sample_m through the convolution identity.
inline TallyTable sample_y(uint64_t samples, uint32_t window = 256, uint64_t seed = 0,
                           uint32_t workers = 1) {
  detail::check_sample_args(window, samples);
  if (window < 2) throw std::invalid_argument("sample_y: window must be >= 2");
  const uint32_t half = window / 2;
  std::vector<std::vector<uint64_t>> locals;
  detail::map_streams<std::vector<uint64_t>>(
      workers,
      [&](uint32_t stream) {
        std::vector<uint64_t> counts(half + 1, 0);
        detail::run_sample_stream(
            window, /*force_zero=*/false, seed, stream, stream_quota(samples, stream),
            [&](const uint64_t*, const uint64_t* sum, uint32_t, uint32_t) {
              const uint32_t k = half - detail::popcount_range(sum, half);
              counts[k] += 1;
            });
        return counts;
      },
      locals);
  TallyTable t{"y", window, samples, seed, std::vector<uint64_t>(half + 1, 0), 0};
  for (const auto& local : locals)
    for (uint32_t k = 0; k <= half; ++k) t.counts[k] += local[k];
  return t;
}

// Exact binomial (Clopper-Pearson) intervals, conservative at the stated
// two-sided level.
inline ConfidenceTable confidence(const TallyTable& t, double level = 0.999) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("confidence: level must be in (0,1)");
  if (t.samples == 0) throw std::invalid_argument("confidence: empty tally");
  using binom = boost::math::binomial_distribution<double>;
  const double alpha = 1.0 - level;
  ConfidenceTable c{t.kind, t.window, t.samples, t.seed, level, {}};
  c.rows.reserve(t.counts.size());
  const double s = static_cast<double>(t.samples);
  for (const uint64_t count : t.counts) {
    ConfidenceRow row;
    row.count = count;
    const double x = static_cast<double>(count);
    row.estimate = x / s;
    row.lower = (count == 0) ? 0.0 : binom::find_lower_bound_on_p(s, x, alpha / 2);
    row.upper = (count == t.samples) ? 1.0 : binom::find_upper_bound_on_p(s, x, alpha / 2);
    c.rows.push_back(row);
  }
  return c;
}

struct FringeRow {
  uint32_t k = 0;
  uint64_t count = 0;
  double mean_first_present = 0;  // E[X | M=k], X = index of the first present sum
  double mean_run_start = 0;      // E[W | M=k], W = left endpoint of a longest filled run
};

struct FringeTable {
  uint32_t window = 0;
  uint64_t samples = 0;
  uint64_t seed = 0;
  std::vector<uint64_t> counts;  // per M=k
  std::vector<uint64_t> x_sums;
  std::vector<uint64_t> w_sums;

  // Bins with zero samples are omitted.
  std::vector<FringeRow> rows() const {
    std::vector<FringeRow> out;
    for (uint32_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0) continue;
      const double c = static_cast<double>(counts[k]);
      out.push_back({k, counts[k], static_cast<double>(x_sums[k]) / c,
                     static_cast<double>(w_sums[k]) / c});
    }
    return out;
  }
};

namespace detail {

inline uint32_t find_next_one(const uint64_t* words, uint32_t nbits, uint32_t pos) {
  while (pos < nbits) {
    const uint32_t w = pos / 64;
    const uint64_t masked = words[w] & (~uint64_t{0} << (pos % 64));
    if (masked != 0) {
      const uint32_t hit = w * 64 + static_cast<uint32_t>(std::countr_zero(masked));
      return hit < nbits ? hit : nbits;
    }
    pos = (w + 1) * 64;
  }
  return nbits;
}

inline uint32_t find_next_zero(const uint64_t* words, uint32_t nbits, uint32_t pos) {
  while (pos < nbits) {
    const uint32_t w = pos / 64;
    const uint64_t masked = ~words[w] & (~uint64_t{0} << (pos % 64));
    if (masked != 0) {
      const uint32_t hit = w * 64 + static_cast<uint32_t>(std::countr_zero(masked));
      return hit < nbits ? hit : nbits;
    }
    pos = (w + 1) * 64;
  }
  return nbits;
}

// Left endpoint of the first run [start, end] of present sums maximizing
// end - start. Returns nbits when no sum is present at all.
inline uint32_t longest_run_start(const uint64_t* words, uint32_t nbits) {
  uint32_t best_start = nbits;
  uint32_t best_len = 0;
  bool found = false;
  uint32_t pos = 0;
  while (pos < nbits) {
    const uint32_t start = find_next_one(words, nbits, pos);
    if (start >= nbits) break;
    const uint32_t end = find_next_zero(words, nbits, start);
    const uint32_t len = end - start;  // run covers [start, end-1]
    if (!found || len > best_len) {
      found = true;
      best_len = len;
      best_start = start;
    }
    pos = end;
  }
  return best_start;
}

}  // namespace detail

// Per-sample fringe statistics over the sample_m protocol, tallied per M=k:
// X = smallest present sum (= twice the smallest element; capped at 2n-1 for
// the empty set) and W = left endpoint of a longest fully-present interval of
// sums (leftmost on ties; capped at 2n-1 when no sum is present).
inline FringeTable fringe_stats(uint32_t n, uint64_t samples, uint64_t seed = 0,
                                uint32_t workers = 1) {
  detail::check_sample_args(n, samples);
  const uint32_t kmax = 2 * n - 1;
  struct Local {
    std::vector<uint64_t> counts, x_sums, w_sums;
  };
  std::vector<Local> locals;
  detail::map_streams<Local>(
      workers,
      [&](uint32_t stream) {
        Local local{std::vector<uint64_t>(kmax + 1, 0), std::vector<uint64_t>(kmax + 1, 0),
                    std::vector<uint64_t>(kmax + 1, 0)};
        detail::run_sample_stream(
            n, /*force_zero=*/false, seed, stream, stream_quota(samples, stream),
            [&](const uint64_t* set, const uint64_t* sum, uint32_t set_words, uint32_t) {
              const uint32_t k = kmax - detail::popcount_range(sum, kmax);
              uint32_t min_elem = n;
              for (uint32_t w = 0; w < set_words; ++w) {
                if (set[w] != 0) {
                  min_elem = w * 64 + static_cast<uint32_t>(std::countr_zero(set[w]));
                  break;
                }
              }
              const uint32_t x = (min_elem == n) ? kmax : 2 * min_elem;
              const uint32_t run = detail::longest_run_start(sum, kmax);
              local.counts[k] += 1;
              local.x_sums[k] += x;
              local.w_sums[k] += run;
            });
        return local;
      },
      locals);
  FringeTable t{n, samples, seed, std::vector<uint64_t>(kmax + 1, 0),
                std::vector<uint64_t>(kmax + 1, 0), std::vector<uint64_t>(kmax + 1, 0)};
  for (const auto& local : locals) {
    for (uint32_t k = 0; k <= kmax; ++k) {
      t.counts[k] += local.counts[k];
      t.x_sums[k] += local.x_sums[k];
      t.w_sums[k] += local.w_sums[k];
    }
  }
  return t;
}

}  // namespace sumsets::simulate
