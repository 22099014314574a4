#pragma once

// Rigorous bounds on the left-fringe miss distribution z(k), k < 32.
//
// Condition on the prefix beta = D cap [0,n) of a random D containing 0.
// Misses below n are definite (D), misses in [n,2n) are likely (L, with
// m = min L the most likely one), misses beyond 2n are the tail.  With
//   mu  = P(m missing | beta)           = 2^-|beta cap [0,m-n]|
//   eta = E[#misses >= n | beta]        = 5 2^-|beta| + sum_L 2^-|beta cap [0,l-n]|
// the conditional distribution satisfies
//   max(0, 1-eta)    <= z(|D|   | beta) <= 1 - mu
//   max(0, 2mu-eta)  <= z(|D|+1 | beta) <= min(1, eta)
//   z(|D|+i | beta)  <= min(eta, 2eta-2mu) / i   for i >= 2.
// Everything is accumulated as exact integers scaled by 2^n; division happens
// once, in combine.  Enumeration over prefixes runs in Gray order so the
// representation counts update in O(|beta|) per step, and splits into shards
// keyed by the high bits beta cap [n1, n).

#include "arith.hpp"
#include "core.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sumsets::rigbounds {

inline constexpr uint32_t kTableSize = 32;  // tabulated range k < 32

// 2^n fits u64 and eta_scaled <= (5+n) 2^(n-1) fits u64 at this cap
inline constexpr uint32_t kMaxWindow = 57;

struct BetaAnalysis {
  uint32_t window = 0;          // n
  uint32_t definite_count = 0;  // |D| = misses certain from the prefix
  uint32_t min_likely = 0;      // m = least position >= n that can still miss
  uint64_t mu_scaled = 0;       // 2^n * P(m missing | beta)
  uint64_t eta_scaled = 0;      // 2^n * E[#misses >= n | beta]
};

// rc must be the representation counts of beta over window n.
inline BetaAnalysis analyze_beta_mask(uint32_t n, uint64_t beta, const core::RepCounts& rc) {
  BetaAnalysis ba;
  ba.window = n;
  ba.definite_count = rc.zero_low;
  // positions n+t, t in [0, n-1): missed iff rc says so; 2n-1 always missable
  uint64_t likely = rc.miss_high | (uint64_t(1) << (n - 1));
  uint32_t mt = std::countr_zero(likely);
  ba.min_likely = n + mt;
  uint32_t beta_size = std::popcount(beta);
  ba.mu_scaled = uint64_t(1) << (n - std::popcount(beta & ((uint64_t(2) << mt) - 1)));
  uint64_t eta = 5 * (uint64_t(1) << (n - beta_size));
  while (likely) {
    uint32_t t = std::countr_zero(likely);
    likely &= likely - 1;
    eta += uint64_t(1) << (n - std::popcount(beta & ((uint64_t(2) << t) - 1)));
  }
  ba.eta_scaled = eta;
  return ba;
}

inline BetaAnalysis analyze_beta(const core::BitSubset& beta, const core::RepCounts& rc) {
  uint32_t n = beta.window();
  if (n < 2 || n > kMaxWindow) throw capacity_error("analyze_beta: window must be in [2, 57]");
  if (!beta.contains(0)) throw std::invalid_argument("analyze_beta: prefix must contain 0");
  if (rc.window != n) throw std::invalid_argument("analyze_beta: window mismatch");
  return analyze_beta_mask(n, beta.low_word(), rc);
}

// The five case rows a prefix adds to the accumulator, emitted through
// add(vector, index, amount) with vector 0 = lower, 1 = upper, 2 = overhang.
// Prefixes with |D| >= 32 contribute nothing below the tabulated range.
template <typename AddFn>
inline void contribution_rows(const BetaAnalysis& ba, AddFn&& add) {
  uint32_t d = ba.definite_count;
  if (d >= kTableSize) return;
  uint64_t full = uint64_t(1) << ba.window;
  uint64_t eta = ba.eta_scaled, mu = ba.mu_scaled;
  add(0, d, full > eta ? full - eta : 0);
  add(1, d, full - mu);
  add(2, d, std::min(eta, 2 * (eta - mu)));
  if (d + 1 < kTableSize) {
    add(0, d + 1, 2 * mu > eta ? 2 * mu - eta : 0);
    add(1, d + 1, std::min(full, eta));
  }
}

struct BoundsAccumulator {
  uint32_t window = 0;           // n
  uint32_t split = 0;            // n1: shard key is beta cap [n1, n)
  std::vector<uint64_t> shards;  // shard keys merged in, ascending
  BigInt processed;              // prefixes folded in
  std::array<BigInt, kTableSize> lower{}, upper{}, overhang{};
};

inline void contribute(const BetaAnalysis& ba, BoundsAccumulator& acc) {
  if (ba.window != acc.window) throw std::invalid_argument("contribute: window mismatch");
  contribution_rows(ba, [&](int vec, uint32_t k, uint64_t amount) {
    auto& column = vec == 0 ? acc.lower : vec == 1 ? acc.upper : acc.overhang;
    column[k] += amount;
  });
  acc.processed += 1;
}

namespace detail {

inline BigInt to_bigint(unsigned __int128 v) {
  BigInt hi = uint64_t(v >> 64);
  return (hi << 64) | uint64_t(v);
}

}  // namespace detail

// All prefixes with the given high-bit pattern, in Gray order.  Pure integer
// work; deterministic for fixed (n, n1, shard).
inline BoundsAccumulator enumerate_shard(uint32_t n, uint32_t n1, uint64_t shard) {
  if (n < 2 || n > kMaxWindow) throw capacity_error("enumerate_shard: window must be in [2, 57]");
  std::array<unsigned __int128, kTableSize> lower{}, upper{}, overhang{};
  core::RepCounts rc = core::init_repcounts(n, uint64_t(1) | shard);
  core::gray_iterate(n, n1, shard, [&](uint64_t mask, int pos, bool inserted) {
    if (pos >= 0) core::update_repcounts(rc, mask, uint32_t(pos), inserted);
    BetaAnalysis ba = analyze_beta_mask(n, mask, rc);
    contribution_rows(ba, [&](int vec, uint32_t k, uint64_t amount) {
      auto& column = vec == 0 ? lower : vec == 1 ? upper : overhang;
      column[k] += amount;
    });
  });
  BoundsAccumulator acc;
  acc.window = n;
  acc.split = n1;
  acc.shards = {shard};
  acc.processed = pow2(n1 - 1);
  for (uint32_t k = 0; k < kTableSize; ++k) {
    acc.lower[k] = detail::to_bigint(lower[k]);
    acc.upper[k] = detail::to_bigint(upper[k]);
    acc.overhang[k] = detail::to_bigint(overhang[k]);
  }
  return acc;
}

inline BoundsAccumulator merge(const BoundsAccumulator& a, const BoundsAccumulator& b) {
  if (a.window != b.window || a.split != b.split)
    throw integrity_error("merge: accumulators disagree on window or split");
  BoundsAccumulator out = a;
  for (uint64_t s : b.shards) {
    if (std::find(out.shards.begin(), out.shards.end(), s) != out.shards.end())
      throw integrity_error("merge: duplicate shard " + std::to_string(s));
    out.shards.push_back(s);
  }
  std::sort(out.shards.begin(), out.shards.end());
  out.processed += b.processed;
  for (uint32_t k = 0; k < kTableSize; ++k) {
    out.lower[k] += b.lower[k];
    out.upper[k] += b.upper[k];
    out.overhang[k] += b.overhang[k];
  }
  return out;
}

enum class Kind { z, y, m, w };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::z: return "z";
    case Kind::y: return "y";
    case Kind::m: return "m";
    default: return "w";
  }
}

struct IntervalVector {
  Kind kind = Kind::z;
  uint32_t window = 0;
  std::array<Rational, kTableSize> lower{}, upper{};
};

// Denominator exponent used when exporting exact numerators: z bounds live
// over 2^(2n-1); y adds the 2^-(i+1) weights up to i=15; m and w square those.
inline unsigned denominator_log2(Kind kind, uint32_t window) {
  switch (kind) {
    case Kind::z: return 2 * window - 1;
    case Kind::y: return 2 * window - 1 + kTableSize / 2;
    case Kind::m: return 2 * (2 * window - 1 + kTableSize / 2);
    default: return 2 * (2 * window - 1);
  }
}

// Requires complete coverage: every shard key over [n1, n) merged exactly once.
inline IntervalVector combine(const BoundsAccumulator& acc) {
  uint32_t n = acc.window, n1 = acc.split;
  uint64_t shard_count = uint64_t(1) << (n - n1);
  if (acc.shards.size() != shard_count)
    throw integrity_error("combine: shard coverage incomplete");
  uint64_t step = uint64_t(1) << n1;
  for (uint64_t i = 0; i < shard_count; ++i)
    if (acc.shards[i] != i * step) throw integrity_error("combine: shard coverage incomplete");
  if (acc.processed != pow2(n - 1)) throw integrity_error("combine: prefix count mismatch");

  IntervalVector iv;
  iv.kind = Kind::z;
  iv.window = n;
  BigInt denominator = pow2(2 * n - 1);
  BigInt lcm = 1;  // common denominator for the 1/(k-i) spread weights
  for (uint32_t gap = 2; gap <= kTableSize; ++gap)
    lcm = boost::multiprecision::lcm(lcm, BigInt(gap));
  for (uint32_t k = 0; k < kTableSize; ++k) {
    iv.lower[k] = Rational(acc.lower[k], denominator);
    BigInt spread_num = 0;  // sum over i <= k-2 of overhang[i]/(k-i), over lcm
    for (uint32_t i = 0; i + 2 <= k; ++i) spread_num += acc.overhang[i] * (lcm / (k - i));
    Rational up = Rational(acc.upper[k], denominator) + Rational(spread_num, lcm * denominator);
    iv.upper[k] = up > 1 ? Rational(1) : up;
  }
  return iv;
}

// y(k) = sum_{2i <= k} 2^-(i+1) z(k-2i); positive coefficients, so the bound
// vectors map through separately.
inline IntervalVector derive_y(const IntervalVector& z) {
  if (z.kind != Kind::z) throw std::invalid_argument("derive_y: input must be z bounds");
  IntervalVector y;
  y.kind = Kind::y;
  y.window = z.window;
  for (uint32_t k = 0; k < kTableSize; ++k) {
    for (uint32_t i = 0; 2 * i <= k; ++i) {
      Rational w(1, pow2(i + 1));
      y.lower[k] += w * z.lower[k - 2 * i];
      y.upper[k] += w * z.upper[k - 2 * i];
    }
  }
  return y;
}

enum class Convolution { m_from_y, w_from_z };

inline IntervalVector derive_convolution(const IntervalVector& x, Convolution conv) {
  if (conv == Convolution::m_from_y && x.kind != Kind::y)
    throw std::invalid_argument("derive_convolution: m bounds need y input");
  if (conv == Convolution::w_from_z && x.kind != Kind::z)
    throw std::invalid_argument("derive_convolution: w bounds need z input");
  IntervalVector out;
  out.kind = conv == Convolution::m_from_y ? Kind::m : Kind::w;
  out.window = x.window;
  for (uint32_t k = 0; k < kTableSize; ++k) {
    for (uint32_t i = 0; i <= k; ++i) {
      out.lower[k] += x.lower[i] * x.lower[k - i];
      out.upper[k] += x.upper[i] * x.upper[k - i];
    }
    if (out.upper[k] > 1) out.upper[k] = 1;
  }
  return out;
}

// --- checkpoints ----------------------------------------------------------
//
// Line-oriented text, decimal integers throughout:
//   bounds-checkpoint 1
//   window N
//   split N1
//   shards COUNT KEY...
//   processed COUNT
//   lower    (32 lines)
//   upper    (32 lines)
//   overhang (32 lines)

namespace detail {

inline void expect_token(std::istream& in, const std::string& want) {
  std::string got;
  if (!(in >> got) || got != want)
    throw integrity_error("checkpoint: expected '" + want + "', found '" + got + "'");
}

inline BigInt read_bigint(std::istream& in, const char* field) {
  std::string token;
  if (!(in >> token)) throw integrity_error(std::string("checkpoint: missing ") + field);
  for (char c : token)
    if (c < '0' || c > '9')
      throw integrity_error(std::string("checkpoint: malformed integer in ") + field);
  return BigInt(token);
}

}  // namespace detail

inline void checkpoint_save(const BoundsAccumulator& acc, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw integrity_error("checkpoint_save: cannot open " + path);
  out << "bounds-checkpoint 1\n";
  out << "window " << acc.window << "\n";
  out << "split " << acc.split << "\n";
  out << "shards " << acc.shards.size();
  for (uint64_t s : acc.shards) out << " " << s;
  out << "\n";
  out << "processed " << acc.processed << "\n";
  out << "lower\n";
  for (const BigInt& v : acc.lower) out << v << "\n";
  out << "upper\n";
  for (const BigInt& v : acc.upper) out << v << "\n";
  out << "overhang\n";
  for (const BigInt& v : acc.overhang) out << v << "\n";
  if (!out) throw integrity_error("checkpoint_save: write failed for " + path);
}

inline BoundsAccumulator checkpoint_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw integrity_error("checkpoint_load: cannot open " + path);
  detail::expect_token(in, "bounds-checkpoint");
  detail::expect_token(in, "1");
  BoundsAccumulator acc;
  detail::expect_token(in, "window");
  uint64_t window = uint64_t(detail::read_bigint(in, "window"));
  detail::expect_token(in, "split");
  uint64_t split = uint64_t(detail::read_bigint(in, "split"));
  if (window < 2 || window > kMaxWindow || split < 1 || split > window)
    throw integrity_error("checkpoint_load: window/split out of range");
  acc.window = uint32_t(window);
  acc.split = uint32_t(split);
  detail::expect_token(in, "shards");
  uint64_t count = uint64_t(detail::read_bigint(in, "shard count"));
  if (count > (uint64_t(1) << (window - split)))
    throw integrity_error("checkpoint_load: shard count out of range");
  uint64_t key_range = ((uint64_t(1) << window) - 1) & ~((uint64_t(1) << split) - 1);
  for (uint64_t i = 0; i < count; ++i) {
    uint64_t key = uint64_t(detail::read_bigint(in, "shard key"));
    if (key & ~key_range) throw integrity_error("checkpoint_load: shard key outside [split, window)");
    if (!acc.shards.empty() && key <= acc.shards.back())
      throw integrity_error("checkpoint_load: shard keys not ascending");
    acc.shards.push_back(key);
  }
  detail::expect_token(in, "processed");
  acc.processed = detail::read_bigint(in, "processed");
  detail::expect_token(in, "lower");
  for (BigInt& v : acc.lower) v = detail::read_bigint(in, "lower entry");
  detail::expect_token(in, "upper");
  for (BigInt& v : acc.upper) v = detail::read_bigint(in, "upper entry");
  detail::expect_token(in, "overhang");
  for (BigInt& v : acc.overhang) v = detail::read_bigint(in, "overhang entry");
  std::string extra;
  if (in >> extra) throw integrity_error("checkpoint_load: trailing content");
  return acc;
}

inline BoundsAccumulator checkpoint_merge(const std::vector<std::string>& paths) {
  if (paths.empty()) throw std::invalid_argument("checkpoint_merge: no inputs");
  BoundsAccumulator acc = checkpoint_load(paths[0]);
  for (size_t i = 1; i < paths.size(); ++i) acc = merge(acc, checkpoint_load(paths[i]));
  return acc;
}

}  // namespace sumsets::rigbounds
