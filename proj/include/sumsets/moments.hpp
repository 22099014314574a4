#pragma once

// Expectation and variance of the missing-sum count M: the exact limit
// E[M] -> 10, the convergent variance series 4 sum P(i,j missing) - 40 with a
// rigorous truncation interval, and finite-window brute-force moments.

#include "arith.hpp"
#include "condgraph.hpp"
#include "core.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace sumsets::moments {

// E[M] limit.  Each window end contributes independently in the limit; one
// side sums P(k missing) over even offsets (2) plus odd offsets (3).
struct ExpectationLimit {
  Rational even_fringe;   // sum of (1/2)(3/4)^t = 2
  Rational odd_fringe;    // sum of (3/4)^(t+1) = 3
  Rational one_sided;     // 5
  Rational value;         // 10
  std::vector<Rational> partial_sums;  // doubled partial sums, audit trail
};

inline ExpectationLimit expectation_limit(uint32_t audit_terms = 41) {
  ExpectationLimit e;
  Rational half(1, 2), ratio(3, 4);
  e.even_fringe = half / (1 - ratio);
  e.odd_fringe = ratio / (1 - ratio);
  e.one_sided = e.even_fringe + e.odd_fringe;
  e.value = 2 * e.one_sided;
  Rational acc = 0;
  e.partial_sums.reserve(audit_terms);
  for (uint32_t k = 0; k < audit_terms; ++k) {
    acc += condgraph::single_prob_exact(k).to_rational();
    e.partial_sums.push_back(2 * acc);
  }
  return e;
}

// Interval certificate for the variance limit 4 sum_{i<j} P(i,j missing) - 40.
//
// Truncating the double sum at j <= N drops two regions with different decay
// rates, both bounded through the per-pair inequality
//   P(i,j missing) <= (phi/2) a^j b^i,  a = phi^2/(2 5^(1/4)), b = 5^(1/4)/phi:
//   - both indices beyond N: <= 87 (phi/2)^(N+1), the steeper region
//     (tail_bound reports the classical 87 (phi/2)^N form for reference);
//   - i <= N < j: <= (phi/2) a^(N+1) / ((1-a)(1-b)), which dominates for
//     large N but is still far below any reporting precision at N = 300.
// The certified interval uses 4x the sum of both regions.
struct VarianceReport {
  uint32_t truncation = 0;
  Rational partial_exact;      // 4 sum - 40, exact
  HighFloat partial_sum;       // same, as a high-precision real
  HighFloat tail_bound;        // 87 (phi/2)^N
  HighFloat cross_tail_bound;  // bound on the dropped i <= N < j region
  HighFloat lower, upper;      // partial +- 4(tail + cross) interval
};

inline VarianceReport variance_series(uint32_t N) {
  if (N < 2) throw std::invalid_argument("variance_series: need N >= 2");
  // row sums accumulated exactly, then folded in index order
  DyadicProb total;
  for (uint32_t j = 1; j <= N; ++j) {
    DyadicProb row;
    for (uint32_t i = 0; i < j; ++i) row = row + condgraph::pair_prob_exact(i, j);
    total = total + row;
  }
  VarianceReport rep;
  rep.truncation = N;
  rep.partial_exact = 4 * total.to_rational() - 40;
  rep.partial_sum = HighFloat(rep.partial_exact);

  HighFloat phi = (1 + boost::multiprecision::sqrt(HighFloat(5))) / 2;
  HighFloat a = phi * phi / (2 * boost::multiprecision::pow(HighFloat(5), HighFloat(1) / 4));
  HighFloat b = boost::multiprecision::pow(HighFloat(5), HighFloat(1) / 4) / phi;
  HighFloat both_const = (phi / 2) / ((1 - a) * (1 - b));  // < 87
  rep.tail_bound = 87 * boost::multiprecision::pow(phi / 2, HighFloat(N));
  rep.cross_tail_bound =
      (phi / 2) * boost::multiprecision::pow(a, HighFloat(N + 1)) / ((1 - a) * (1 - b));
  HighFloat radius = 4 * (both_const * boost::multiprecision::pow(phi / 2, HighFloat(N + 1)) +
                          rep.cross_tail_bound);
  rep.lower = rep.partial_sum - radius;
  rep.upper = rep.partial_sum + radius;
  return rep;
}

// E[M^r] over uniform subsets of [0, n), exact.
inline Rational brute_moments(uint32_t n, uint32_t r) {
  if (n == 0 || n > 22) throw capacity_error("brute_moments: window must be in [1, 22]");
  if (r > 9) throw std::invalid_argument("brute_moments: moment order must be <= 9");
  BigInt accum = 0;
  uint64_t chunk = 0;  // running sum of M^r, flushed before it can overflow
  uint64_t flush_at = uint64_t(1) << 44;
  uint64_t size = uint64_t(1) << n;
  for (uint64_t set = 0; set < size; ++set) {
    uint64_t sums = 0;
    uint64_t rest = set;
    while (rest) {
      uint32_t x = std::countr_zero(rest);
      rest &= rest - 1;
      sums |= set << x;
    }
    uint64_t missing = 2 * n - 1 - std::popcount(sums);
    uint64_t power = 1;
    for (uint32_t t = 0; t < r; ++t) power *= missing;
    chunk += power;
    if (chunk >= flush_at) {
      accum += chunk;
      chunk = 0;
    }
  }
  accum += chunk;
  return Rational(accum, pow2(n));
}

}  // namespace sumsets::moments
