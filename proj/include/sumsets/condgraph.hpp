#pragma once

// Condition graphs: "targets t1..tm all missing from A+A" becomes a vertex
// cover condition on the graph with vertices [0, max target], an edge {u,v}
// per constraint u+v = some target, and a forced vertex u whenever 2u is a
// target.  The excluded set [0,N] \ A must be a cover honoring every forced
// vertex, so miss probabilities are (#covers) / 2^(N+1).
//
// Pair graphs decompose into disjoint paths, whose cover counts are Fibonacci
// numbers; general target sets are handled by a branch-and-factor counter.

#include "arith.hpp"
#include "core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace sumsets::condgraph {

// --- graph construction -----------------------------------------------------

struct ConditionGraph {
  uint32_t max_label = 0;                     // vertices are [0, max_label]
  std::vector<uint32_t> targets;              // shifted, strictly increasing
  std::vector<std::pair<uint32_t, uint32_t>> edges;  // u < v
  std::vector<char> forced;                   // forced[v]: v must be excluded
  std::vector<std::vector<uint32_t>> adjacency;
};

inline ConditionGraph build_graph(const std::vector<uint32_t>& targets, uint32_t k_shift = 0) {
  if (targets.empty()) throw std::invalid_argument("build_graph: no targets");
  ConditionGraph g;
  g.targets.reserve(targets.size());
  for (uint32_t t : targets) g.targets.push_back(t + k_shift);
  std::sort(g.targets.begin(), g.targets.end());
  if (std::adjacent_find(g.targets.begin(), g.targets.end()) != g.targets.end())
    throw std::invalid_argument("build_graph: duplicate target");
  g.max_label = g.targets.back();
  uint32_t nv = g.max_label + 1;
  g.forced.assign(nv, 0);
  g.adjacency.assign(nv, {});
  for (uint32_t t : g.targets) {
    if (t % 2 == 0) g.forced[t / 2] = 1;
    for (uint32_t u = 0; 2 * u < t; ++u) {
      uint32_t v = t - u;
      if (v > g.max_label) continue;
      g.edges.emplace_back(u, v);
      g.adjacency[u].push_back(v);
      g.adjacency[v].push_back(u);
    }
  }
  return g;
}

// --- decomposition ------------------------------------------------------------

struct Component {
  std::vector<uint32_t> order;            // path order when is_path
  std::vector<uint32_t> forced_positions; // indices into `order`
  bool is_path = false;
};

struct ComponentProfile {
  std::vector<Component> components;
};

// Connected components in ascending order of their smallest vertex.  Paths are
// listed from their larger-labeled endpoint; non-path components (these never
// arise from pair targets) fall back to BFS order from the smallest vertex.
inline ComponentProfile decompose(const ConditionGraph& g) {
  uint32_t nv = g.max_label + 1;
  std::vector<char> seen(nv, 0);
  ComponentProfile profile;
  for (uint32_t s = 0; s < nv; ++s) {
    if (seen[s]) continue;
    std::vector<uint32_t> verts{s};
    seen[s] = 1;
    size_t edge_count = 0;
    for (size_t q = 0; q < verts.size(); ++q) {
      uint32_t u = verts[q];
      edge_count += g.adjacency[u].size();
      for (uint32_t v : g.adjacency[u])
        if (!seen[v]) {
          seen[v] = 1;
          verts.push_back(v);
        }
    }
    edge_count /= 2;
    uint32_t max_deg = 0;
    for (uint32_t u : verts) max_deg = std::max<uint32_t>(max_deg, g.adjacency[u].size());

    Component comp;
    comp.is_path = edge_count + 1 == verts.size() && max_deg <= 2;
    if (comp.is_path && verts.size() > 1) {
      uint32_t start = 0;
      bool have = false;
      for (uint32_t u : verts)
        if (g.adjacency[u].size() <= 1 && (!have || u > start)) {
          start = u;
          have = true;
        }
      comp.order.push_back(start);
      uint32_t prev = start, cur = start;
      while (comp.order.size() < verts.size()) {
        uint32_t next = cur;
        for (uint32_t v : g.adjacency[cur])
          if (v != prev) {
            next = v;
            break;
          }
        prev = cur;
        cur = next;
        comp.order.push_back(cur);
      }
    } else {
      comp.order = verts;  // BFS order from smallest vertex
    }
    for (uint32_t idx = 0; idx < comp.order.size(); ++idx)
      if (g.forced[comp.order[idx]]) comp.forced_positions.push_back(idx);
    profile.components.push_back(std::move(comp));
  }
  return profile;
}

// --- cover counting ------------------------------------------------------------

// Covers of a path with `length` vertices where the vertices at
// `forced_positions` must be in the cover.  With no forced vertices the count
// is F(length+2) (F(1)=F(2)=1): 3 for a single edge, 5 for a two-edge path.
inline BigInt count_covers_path(uint32_t length, const std::vector<uint32_t>& forced_positions = {}) {
  if (length == 0) throw std::invalid_argument("count_covers_path: empty path");
  std::vector<char> forced(length, 0);
  for (uint32_t p : forced_positions) {
    if (p >= length) throw std::invalid_argument("count_covers_path: forced position out of range");
    forced[p] = 1;
  }
  BigInt in = 1;                       // last vertex in the cover
  BigInt out = forced[0] ? 0 : 1;     // last vertex not in the cover
  for (uint32_t v = 1; v < length; ++v) {
    BigInt nin = in + out;
    BigInt nout = forced[v] ? BigInt(0) : in;  // edge (v-1, v) needs v-1 in
    in = std::move(nin);
    out = std::move(nout);
  }
  return in + out;
}

namespace detail {

struct CoverCounter {
  std::vector<uint64_t> adj;  // adjacency masks over <= 50 vertices
  std::unordered_map<uint64_t, BigInt> memo;

  BigInt covers(uint64_t mask) {
    if (mask == 0) return 1;
    uint32_t v0 = std::countr_zero(mask);
    uint64_t comp = uint64_t(1) << v0, frontier = comp;
    while (frontier) {
      uint64_t next = 0;
      while (frontier) {
        uint32_t u = std::countr_zero(frontier);
        frontier &= frontier - 1;
        next |= adj[u] & mask & ~comp;
      }
      comp |= next;
      frontier = next;
    }
    BigInt c = component_covers(comp);
    uint64_t rest = mask ^ comp;
    return rest ? c * covers(rest) : c;
  }

  BigInt component_covers(uint64_t comp) {
    if (std::popcount(comp) == 1) return 2;  // isolated free vertex
    auto it = memo.find(comp);
    if (it != memo.end()) return it->second;
    // branch on a max-degree vertex: either it is in the cover, or it is out
    // and its whole neighborhood is in
    uint32_t best = 0, best_deg = 0;
    uint64_t scan = comp;
    while (scan) {
      uint32_t u = std::countr_zero(scan);
      scan &= scan - 1;
      uint32_t deg = std::popcount(adj[u] & comp);
      if (deg >= best_deg) {
        best_deg = deg;
        best = u;
      }
    }
    uint64_t vbit = uint64_t(1) << best;
    BigInt with_v = covers(comp ^ vbit);
    BigInt without_v = covers(comp & ~vbit & ~(adj[best] & comp));
    BigInt result = with_v + without_v;
    memo.emplace(comp, result);
    return result;
  }
};

}  // namespace detail

// Cover count for an arbitrary condition graph (forced vertices are committed
// up front, then branch-and-factor with memoization on component masks).
inline BigInt count_covers_general(const ConditionGraph& g) {
  uint32_t nv = g.max_label + 1;
  if (nv > 50) throw capacity_error("count_covers_general: more than 50 vertices");
  detail::CoverCounter cc;
  cc.adj.assign(nv, 0);
  for (auto [u, v] : g.edges) {
    cc.adj[u] |= uint64_t(1) << v;
    cc.adj[v] |= uint64_t(1) << u;
  }
  uint64_t active = nv == 64 ? ~uint64_t(0) : ((uint64_t(1) << nv) - 1);
  for (uint32_t v = 0; v < nv; ++v)
    if (g.forced[v]) active &= ~(uint64_t(1) << v);  // in the cover; edges covered
  return cc.covers(active);
}

// --- miss probabilities ------------------------------------------------------

// P(k not in A+A) for A an infinite uniform random subset of the naturals:
// (3/4)^((k+1)/2) for odd k, (1/2)(3/4)^(k/2) for even k.
inline DyadicProb single_prob_exact(uint32_t k) {
  BigInt three = 3;
  if (k % 2 == 1) {
    uint32_t c = (k + 1) / 2;
    return DyadicProb(boost::multiprecision::pow(three, c), 2 * c);
  }
  uint32_t c = k / 2;
  return DyadicProb(boost::multiprecision::pow(three, c), 2 * c + 1);
}

// P(i and j not in A+A), exact for every parity, via path decomposition of the
// pair condition graph.  This is the authoritative value.
inline DyadicProb pair_prob_exact(uint32_t i, uint32_t j) {
  if (i >= j) throw std::invalid_argument("pair_prob_exact: need i < j");
  ConditionGraph g = build_graph({i, j});
  ComponentProfile profile = decompose(g);
  BigInt covers = 1;
  for (const Component& c : profile.components) {
    if (!c.is_path)
      throw integrity_error("pair_prob_exact: pair graph decomposed into a non-path");
    covers *= count_covers_path(uint32_t(c.order.size()), c.forced_positions);
  }
  return DyadicProb(covers, j + 1);
}

// Closed-form Fibonacci-product expression, by parity of (i, j).  Only the
// both-odd case is reliable; `valid` records agreement with pair_prob_exact
// (the smallest counterexample is (2,3): closed form 1/8, exact 5/16).
struct ClosedFormResult {
  bool well_formed = false;  // all exponents integral and non-negative
  bool valid = false;        // well_formed and equal to the exact value
  DyadicProb value;
  BigInt fibonacci_product;
};

inline ClosedFormResult pair_prob_closed_form(uint32_t i, uint32_t j) {
  if (i >= j) throw std::invalid_argument("pair_prob_closed_form: need i < j");
  ClosedFormResult res;
  int64_t d = int64_t(j) - int64_t(i);
  auto ceil_div = [](int64_t a, int64_t b) { return (a + b - 1) / b; };
  int64_t ceil_i = ceil_div(int64_t(i) + 1, d);
  int64_t q = 2 * ceil_i;
  int64_t r, rp;
  BigInt extra = 1;
  bool i_odd = i % 2, j_odd = j % 2;
  if (i_odd && j_odd) {
    r = d * ceil_i - (int64_t(i) + 1);
    rp = int64_t(j) + 1 - d * ceil_i;
  } else if (!i_odd && j_odd) {
    int64_t o = 2 * ceil_div(int64_t(i) / 2 + 1, d) - 1;
    r = (d - 1) * ceil_i - (int64_t(i) + 1) + o;
    rp = int64_t(j) - (d - 1) * ceil_i - o;
    extra = fibonacci(unsigned(o));
  } else if (i_odd && !j_odd) {
    int64_t op = 2 * ceil_div(int64_t(j) / 2 + 1, d) - 2;
    r = (d - 1) * ceil_i - (int64_t(i) + 1) + op;
    rp = int64_t(j) - (d - 1) * ceil_i - op;
    extra = fibonacci(unsigned(op + 2));
  } else {
    int64_t o = 2 * ceil_div(int64_t(i) / 2 + 1, d) - 1;
    int64_t op = 2 * ceil_div(int64_t(j) / 2 + 1, d) - 2;
    r = (d - 2) * ceil_i - (int64_t(i) + 1) + o + op;
    rp = int64_t(j) - 1 - (d - 2) * ceil_i - o - op;
    extra = fibonacci(unsigned(o)) * fibonacci(unsigned(op));
  }
  if (r % 2 != 0 || rp % 2 != 0 || r < 0 || rp < 0) return res;  // not well formed
  r /= 2;
  rp /= 2;
  res.well_formed = true;
  res.fibonacci_product = extra *
                          boost::multiprecision::pow(fibonacci(unsigned(q) + 2), unsigned(r)) *
                          boost::multiprecision::pow(fibonacci(unsigned(q) + 4), unsigned(rp));
  res.value = DyadicProb(res.fibonacci_product, j + 1);
  res.valid = res.value == pair_prob_exact(i, j);
  return res;
}

// Golden-ratio sandwich around pair_prob_exact:
//   upper = phi^(2j+1) 5^(i/4) / (2^(j+1) 5^(j/4) phi^i)
//   lower = upper * (1 - (j-i) phi^(-i/(j-i))), clamped at zero.
struct PairBounds {
  double lower = 0, upper = 0;
};

inline PairBounds pair_asymptotic_bounds(uint32_t i, uint32_t j) {
  if (i >= j) throw std::invalid_argument("pair_asymptotic_bounds: need i < j");
  double lphi = std::log(kPhi), l2 = std::log(2.0), l5 = std::log(5.0);
  PairBounds b;
  b.upper = std::exp((2.0 * j + 1) * lphi - (j + 1.0) * l2 - j * l5 / 4 + i * l5 / 4 - double(i) * lphi);
  double rest = 1.0 - double(j - i) * std::exp(-double(i) / double(j - i) * lphi);
  b.lower = rest > 0 ? b.upper * rest : 0.0;
  return b;
}

// Bounds for P(k+1, ..., k+m all missing from A+A):
//   lower (exact, from the explicit construction): (1/2)^(floor((k+m)/2)+1)
//   upper (asymptotic shape, constants absorbed):  2^(k/m) (1/2)^((k+m)/2)
struct ConsecutiveBounds {
  DyadicProb lower;
  double upper = 0;
};

inline ConsecutiveBounds consecutive_bounds(uint32_t k, uint32_t m) {
  if (m == 0) throw std::invalid_argument("consecutive_bounds: need m >= 1");
  ConsecutiveBounds b;
  b.lower = DyadicProb(1, (k + m) / 2 + 1);
  b.upper = std::exp2(double(k) / double(m) - (k + m) / 2.0);
  return b;
}

// --- lambda estimation ---------------------------------------------------------

// Upper bound on the decay rate lambda of P(k+a_1, ..., k+a_m all missing):
// lambda <= P(A, B ~ [0, floor(a_m/2)] : no a_i in A+B)^(1/(a_m+2)).
struct LambdaUpperBound {
  DyadicProb pair_miss_prob;  // over independent A, B
  double bound = 0;
};

inline LambdaUpperBound lambda_upper_bound(const std::vector<uint32_t>& config) {
  if (config.empty()) throw std::invalid_argument("lambda_upper_bound: empty configuration");
  uint32_t am = *std::max_element(config.begin(), config.end());
  uint32_t h = am / 2;
  if (h + 1 > 14) throw capacity_error("lambda_upper_bound: max element must be <= 28");
  uint64_t cfg_mask = 0;
  for (uint32_t a : config) cfg_mask |= uint64_t(1) << a;
  uint64_t half = uint64_t(1) << (h + 1);
  BigInt count = 0;
  for (uint64_t A = 0; A < half; ++A) {
    // bits b with b = a - x for some x in A and target a: B must avoid them all
    uint64_t bad = 0;
    uint64_t rest = A;
    while (rest) {
      uint32_t x = std::countr_zero(rest);
      rest &= rest - 1;
      uint64_t shifted = cfg_mask >> x;
      bad |= shifted & (half - 1);
    }
    count += uint64_t(1) << (h + 1 - std::popcount(bad));
  }
  LambdaUpperBound out;
  out.pair_miss_prob = DyadicProb(count, 2 * (h + 1));
  out.bound = std::pow(out.pair_miss_prob.to_double(), 1.0 / (am + 2));
  return out;
}

// Exact shifted-miss probabilities p_k = P(k+a_1, ..., k+a_m not in A+A) for
// k in [k_min, k_max], their consecutive ratios, and a bracketing interval for
// the decay rate from Fekete approximate multiplicativity with constant
// c = 2^(a_m + 1) (the cost of emptying a_m + 1 elements when splicing).
struct LambdaEstimate {
  std::vector<uint32_t> config;
  uint32_t k_min = 0, k_max = 0;
  std::vector<DyadicProb> probs;   // probs[t] = p_(k_min + t)
  std::vector<double> ratios;      // p_(k+1) / p_k
  unsigned fekete_log2_c = 0;      // c = 2^(a_m + 1)
  double lambda_low = 0, lambda_high = 1;
};

inline LambdaEstimate estimate_lambda(const std::vector<uint32_t>& config,
                                      uint32_t k_min, uint32_t k_max) {
  if (config.empty()) throw std::invalid_argument("estimate_lambda: empty configuration");
  if (k_min == 0 || k_min > k_max) throw std::invalid_argument("estimate_lambda: need 1 <= k_min <= k_max");
  uint32_t am = *std::max_element(config.begin(), config.end());
  if (k_max + am + 1 > 50) throw capacity_error("estimate_lambda: k_max + max element must be <= 49");
  LambdaEstimate est;
  est.config = config;
  est.k_min = k_min;
  est.k_max = k_max;
  est.fekete_log2_c = am + 1;
  for (uint32_t k = k_min; k <= k_max; ++k) {
    ConditionGraph g = build_graph(config, k);
    est.probs.emplace_back(count_covers_general(g), g.max_label + 1);
  }
  for (size_t t = 0; t + 1 < est.probs.size(); ++t)
    est.ratios.push_back(est.probs[t + 1].to_double() / est.probs[t].to_double());
  const DyadicProb& pk = est.probs.back();
  double logp = double(boost::multiprecision::log(HighFloat(pk.to_rational())));
  double logc = est.fekete_log2_c * std::log(2.0);
  est.lambda_low = std::exp((logp - logc) / k_max);
  est.lambda_high = std::min(1.0, std::exp((logp + logc) / k_max));
  return est;
}

}  // namespace sumsets::condgraph
