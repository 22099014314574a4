#pragma once

// Set representations and exhaustive enumeration.  Everything here is exact:
// distributions come out as dyadic probabilities whose masses sum to one.
//
// Two window regimes:
//   - enumeration windows fit one machine word (n <= 63); the Gray-code
//     iterator and representation counters live here,
//   - simulation windows up to 1024 bits use the array-of-words BitSubset.

#include "arith.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

namespace sumsets::core {

inline constexpr uint32_t kMaxEnumWindow = 63;    // single machine word
inline constexpr uint32_t kMaxSimWindow = 1024;   // array of words

// --- BitSubset ------------------------------------------------------------

// Subset of [0, window).  Fixed inline storage covering the largest supported
// simulation window; enumeration-scale call sites work on raw uint64_t masks
// and convert at API boundaries.
class BitSubset {
 public:
  explicit BitSubset(uint32_t window) : window_(window) {
    if (window == 0 || window > kMaxSimWindow)
      throw capacity_error("BitSubset: window must be in [1, 1024]");
  }
  BitSubset(uint32_t window, uint64_t low_word_mask) : BitSubset(window) {
    if (window < 64 && (low_word_mask >> window) != 0)
      throw std::invalid_argument("BitSubset: mask exceeds window");
    words_[0] = low_word_mask;
  }
  BitSubset(uint32_t window, std::initializer_list<uint32_t> elements)
      : BitSubset(window) {
    for (uint32_t e : elements) insert(e);
  }

  uint32_t window() const { return window_; }
  bool contains(uint32_t i) const {
    check(i);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  void insert(uint32_t i) {
    check(i);
    words_[i >> 6] |= uint64_t(1) << (i & 63);
  }
  void erase(uint32_t i) {
    check(i);
    words_[i >> 6] &= ~(uint64_t(1) << (i & 63));
  }
  void toggle(uint32_t i) {
    check(i);
    words_[i >> 6] ^= uint64_t(1) << (i & 63);
  }
  uint32_t popcount() const {
    uint32_t c = 0;
    for (uint32_t w = 0; w <= (window_ - 1) >> 6; ++w) c += std::popcount(words_[w]);
    return c;
  }
  bool empty() const { return popcount() == 0; }

  // Lowest element; window() when empty.
  uint32_t min_element() const {
    for (uint32_t w = 0; w <= (window_ - 1) >> 6; ++w)
      if (words_[w]) {
        uint32_t v = (w << 6) + std::countr_zero(words_[w]);
        return v < window_ ? v : window_;
      }
    return window_;
  }

  uint64_t low_word() const { return words_[0]; }
  const std::array<uint64_t, kMaxSimWindow / 64>& words() const { return words_; }

  std::vector<uint32_t> elements() const {
    std::vector<uint32_t> out;
    for (uint32_t w = 0; w <= (window_ - 1) >> 6; ++w) {
      uint64_t x = words_[w];
      while (x) {
        out.push_back((w << 6) + std::countr_zero(x));
        x &= x - 1;
      }
    }
    return out;
  }

 private:
  void check(uint32_t i) const {
    if (i >= window_) throw std::invalid_argument("BitSubset: element outside window");
  }

  uint32_t window_;
  std::array<uint64_t, kMaxSimWindow / 64> words_{};
};

// --- representation counters -----------------------------------------------

// r[s] = number of ordered pairs (a,b), a,b in the tracked set, with a+b = s,
// for s in [0, 2n-2].  Maintained incrementally under single-element toggles;
// also tracks the zero counts the prefix analysis needs:
//   zero_low   = #{s in [0, n) : r[s] == 0}
//   miss_high  = bitmask over t in [0, n-2]: bit t set iff r[n+t] == 0
struct RepCounts {
  uint32_t window = 0;
  std::array<uint16_t, 2 * kMaxEnumWindow - 1> r{};
  uint32_t zero_low = 0;
  uint64_t miss_high = 0;
};

namespace detail {
inline void rep_bump(RepCounts& rc, uint32_t s, int delta) {
  uint16_t old = rc.r[s];
  if (delta < 0 && old < uint16_t(-delta))
    throw integrity_error("RepCounts: count underflow (toggle direction bug)");
  uint16_t now = uint16_t(int(old) + delta);
  rc.r[s] = now;
  bool was_zero = old == 0, is_zero = now == 0;
  if (was_zero == is_zero) return;
  if (s < rc.window) {
    rc.zero_low += is_zero ? 1 : uint32_t(-1);
  } else {
    uint64_t bit = uint64_t(1) << (s - rc.window);
    if (is_zero)
      rc.miss_high |= bit;
    else
      rc.miss_high &= ~bit;
  }
}
}  // namespace detail

// `set_after` is the set after the toggle has been applied (so it contains x
// iff inserted).  Cost O(|set|).
inline void update_repcounts(RepCounts& rc, uint64_t set_after, uint32_t x, bool inserted) {
  int delta = inserted ? 1 : -1;
  uint64_t others = set_after & ~(uint64_t(1) << x);
  while (others) {
    uint32_t b = std::countr_zero(others);
    others &= others - 1;
    detail::rep_bump(rc, x + b, 2 * delta);
  }
  detail::rep_bump(rc, 2 * x, delta);
}

inline RepCounts init_repcounts(uint32_t window, uint64_t set_mask) {
  if (window == 0 || window > kMaxEnumWindow)
    throw capacity_error("RepCounts: window must be in [1, 63]");
  if (window < 64 && (set_mask >> window) != 0)
    throw std::invalid_argument("RepCounts: set exceeds window");
  RepCounts rc;
  rc.window = window;
  rc.zero_low = window;
  rc.miss_high = window >= 2 ? ((uint64_t(1) << (window - 1)) - 1) : 0;
  uint64_t built = 0;
  uint64_t rest = set_mask;
  while (rest) {
    uint32_t x = std::countr_zero(rest);
    rest &= rest - 1;
    built |= uint64_t(1) << x;
    update_repcounts(rc, built, x, true);
  }
  return rc;
}

// --- Gray-code enumeration ---------------------------------------------------

// Enumerates all subsets beta of [0, n) with 0 in beta and beta /\ [n1, n) equal
// to the fixed shard bits, in reflected-binary Gray order over the free
// positions [1, n1) (lowest position toggles fastest).  The callback receives
// (mask, toggled_position, inserted); the initial mask is delivered with
// toggled_position = -1.  Exactly 2^(n1-1) masks are visited.
template <class F>
inline void gray_iterate(uint32_t n, uint32_t n1, uint64_t shard_mask, F&& visit) {
  if (n == 0 || n > kMaxEnumWindow)
    throw capacity_error("gray_iterate: window must be in [1, 63]");
  if (n1 == 0 || n1 > n) throw std::invalid_argument("gray_iterate: need 1 <= n1 <= n");
  uint64_t shard_range = ((uint64_t(1) << n) - 1) & ~((uint64_t(1) << n1) - 1);
  if ((shard_mask & ~shard_range) != 0)
    throw std::invalid_argument("gray_iterate: shard bits outside [n1, n)");

  uint64_t mask = uint64_t(1) | shard_mask;
  visit(mask, -1, false);
  uint64_t steps = uint64_t(1) << (n1 - 1);
  for (uint64_t t = 1; t < steps; ++t) {
    uint32_t pos = 1 + std::countr_zero(t);
    uint64_t bit = uint64_t(1) << pos;
    bool inserted = (mask & bit) == 0;
    mask ^= bit;
    visit(mask, int(pos), inserted);
  }
}

// --- exhaustive enumeration ---------------------------------------------------

// Distribution with exact dyadic masses over a common window.
struct ExactDistribution {
  uint32_t window = 0;                // subsets of [0, window)
  std::vector<DyadicProb> masses;     // masses[k] = P(k missing sums)

  bool sums_to_one() const {
    DyadicProb s;
    for (const auto& m : masses) s = s + m;
    return s == DyadicProb::one();
  }
};

// Distribution of M = |[0, 2n-2] \ (A+A)| over uniform A subset of [0, n).
// Exhaustive over all 2^n subsets; intended for n <= 24.
inline ExactDistribution brute_distribution(uint32_t n) {
  if (n == 0 || n > 24) throw capacity_error("brute_distribution: n must be in [1, 24]");
  std::vector<uint64_t> counts(2 * n, 0);
  uint64_t full = (uint64_t(1) << (2 * n - 1)) - 1;
  for (uint64_t a = 0; a < (uint64_t(1) << n); ++a) {
    uint64_t sums = 0;
    uint64_t rest = a;
    while (rest) {
      uint32_t x = std::countr_zero(rest);
      rest &= rest - 1;
      sums |= a << x;
    }
    counts[2 * n - 1 - std::popcount(sums & full)]++;
  }
  ExactDistribution d;
  d.window = n;
  d.masses.reserve(counts.size());
  for (uint64_t c : counts) d.masses.emplace_back(BigInt(c), n);
  return d;
}

// P(no target is in A+A) for uniform A subset of [0, window), where window
// defaults to max(targets)+1.  Exhaustive: every subset of the window is
// visited (in Gray order so the per-subset update is O(|A|), not O(|A|^2)).
inline DyadicProb brute_config_prob(const std::vector<uint32_t>& targets,
                                    uint32_t window = 0) {
  if (targets.empty()) throw std::invalid_argument("brute_config_prob: no targets");
  uint32_t maxt = 0;
  for (uint32_t t : targets) maxt = t > maxt ? t : maxt;
  if (window == 0) window = maxt + 1;
  if (window > 26) throw capacity_error("brute_config_prob: window must be <= 26");
  if (maxt > 63) throw capacity_error("brute_config_prob: targets must be <= 63");
  // window < maxt+1 is allowed: targets beyond 2(window-1) are never realized
  // by subsets of [0, window) and count as missed.

  uint64_t target_mask = 0;
  for (uint32_t t : targets) {
    if (target_mask >> t & 1) throw std::invalid_argument("brute_config_prob: duplicate target");
    target_mask |= uint64_t(1) << t;
  }

  // rep[t] = #ordered representations of target t from the current subset;
  // present = #targets currently realized.  Start from the empty set.
  std::array<uint32_t, 64> rep{};
  uint32_t present = 0;
  uint64_t mask = 0;
  uint64_t hits = 1;  // empty set misses every target
  uint64_t total = uint64_t(1) << window;
  for (uint64_t t = 1; t < total; ++t) {
    uint32_t x = std::countr_zero(t);
    uint64_t bit = uint64_t(1) << x;
    bool inserted = (mask & bit) == 0;
    mask ^= bit;
    int delta = inserted ? 1 : -1;
    uint64_t others = mask & ~bit;
    auto bump = [&](uint32_t s, int d) {
      if (s > maxt || !(target_mask >> s & 1)) return;
      uint32_t old = rep[s];
      rep[s] = uint32_t(int(old) + d);
      if (old == 0 && rep[s] != 0) present++;
      if (old != 0 && rep[s] == 0) present--;
    };
    while (others) {
      uint32_t b = std::countr_zero(others);
      others &= others - 1;
      if (x + b <= maxt) bump(x + b, 2 * delta);
    }
    bump(2 * x, delta);
    if (present == 0) hits++;
  }
  return DyadicProb(BigInt(hits), window);
}

}  // namespace sumsets::core
