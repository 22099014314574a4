// Acceptance gate for the missing-sum distribution library.
//
// Prints one line per criterion and exits 0 only when every criterion lands
// on its documented outcome.  Two criteria land on documented failures (8 and
// 9): the measured behavior is printed with an analysis note instead of being
// smoothed over, and any drift from that documented shape (including an
// unexpected pass) makes the gate exit nonzero.
//
// Criteria 1 and 7 drive the installed command-line binary (SUMSETS_CLI_PATH);
// everything else calls the library directly.

#include <sumsets/arith.hpp>
#include <sumsets/condgraph.hpp>
#include <sumsets/core.hpp>
#include <sumsets/models.hpp>
#include <sumsets/moments.hpp>
#include <sumsets/rigbounds.hpp>
#include <sumsets/simulate.hpp>

#include "../tests/reference_tables.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace sumsets;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = SUMSETS_CLI_PATH " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliResult r;
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

class Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

 public:
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

struct Gate {
  int passes = 0;
  int expected_fails = 0;
  int unexpected = 0;

  void report(int idx, bool expect_pass, const Outcome& o) {
    std::string verdict;
    if (o.pass && expect_pass) {
      verdict = "PASS";
      ++passes;
    } else if (!o.pass && !expect_pass) {
      verdict = "FAIL (expected)";
      ++expected_fails;
    } else if (o.pass) {
      verdict = "PASS (UNEXPECTED: documented as a failure)";
      ++unexpected;
    } else {
      verdict = "FAIL (UNEXPECTED)";
      ++unexpected;
    }
    std::printf("criterion %2d %s  %s\n", idx, verdict.c_str(), o.detail.c_str());
    for (const std::string& n : o.notes) std::printf("              note: %s\n", n.c_str());
  }

  // criteria whose documented outcome is a failure with a specific shape:
  // matching the shape counts as expected, anything else is unexpected
  void report_documented_failure(int idx, const Outcome& o, bool shape_matches) {
    std::string verdict;
    if (!o.pass && shape_matches) {
      verdict = "FAIL (expected)";
      ++expected_fails;
    } else if (o.pass) {
      verdict = "PASS (UNEXPECTED: documented as a failure)";
      ++unexpected;
    } else {
      verdict = "FAIL (UNEXPECTED: shape differs from the documented one)";
      ++unexpected;
    }
    std::printf("criterion %2d %s  %s\n", idx, verdict.c_str(), o.detail.c_str());
    for (const std::string& n : o.notes) std::printf("              note: %s\n", n.c_str());
  }
};

std::string fmt(double v, int places = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

std::string rat5(const Rational& q, RoundDir dir) { return format_decimal(q, 5, dir); }

// --- criterion 1: variance series certificate --------------------------------

Outcome criterion_variance_certificate() {
  Outcome o;
  Timer t;
  CliResult r = run_cli("variance --terms 300");
  const long long elapsed = t.ms();
  if (r.status != 0) {
    o.detail = "cli exited with status " + std::to_string(r.status);
    return o;
  }
  double lower = 0, upper = 0, width = -1;
  std::istringstream in(r.out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("lower ", 0) == 0) lower = std::stod(line.substr(6));
    if (line.rfind("upper ", 0) == 0) upper = std::stod(line.substr(6));
    if (line.rfind("width ", 0) == 0) width = std::stod(line.substr(6));
  }
  const bool contained = lower >= 35.9658 && upper < 35.9659;
  o.pass = width >= 0 && width < 1e-3 && contained && elapsed < 10000;
  o.detail = "variance --terms 300 interval [" + fmt(lower, 16) + ", " + fmt(upper, 16) +
             "], width " + fmt(width, 16) + " < 1e-3, pins the constant to 35.9658...; " +
             std::to_string(elapsed) + " ms < 10 s";
  return o;
}

// --- criterion 2: expectation ------------------------------------------------

Outcome criterion_expectation() {
  Outcome o;
  Timer t;
  moments::ExpectationLimit lim = moments::expectation_limit();
  const bool exact_ten = lim.value == Rational(10);
  core::ExactDistribution d = core::brute_distribution(14);
  Rational mean(0);
  for (uint32_t k = 0; k < d.masses.size(); ++k)
    mean += Rational(k) * d.masses[k].to_rational();
  const Rational bound(43740, 16384);  // 20 * (3/4)^7
  Rational diff = mean - 10;
  if (diff < 0) diff = -diff;
  const long long elapsed = t.ms();
  o.pass = exact_ten && diff <= bound && elapsed < 60000;
  o.detail = std::string("limit expectation ") + (exact_ten ? "= 10 exactly" : "!= 10") +
             "; mean miss count at window 14 = " + fmt(double(HighFloat(mean)), 6) +
             ", |mean - 10| = " + fmt(double(HighFloat(diff)), 6) +
             " <= 20*(3/4)^7 = " + fmt(double(HighFloat(bound)), 6) + "; " +
             std::to_string(elapsed) + " ms < 1 min";
  return o;
}

// --- criterion 3: cover-count oracle equivalence ------------------------------

DyadicProb graph_config_prob(const std::vector<uint32_t>& targets) {
  condgraph::ConditionGraph g = condgraph::build_graph(targets);
  return DyadicProb(condgraph::count_covers_general(g), g.max_label + 1);
}

Outcome criterion_graph_equivalence() {
  Outcome o;
  Timer t;
  uint32_t pairs = 0, configs = 0, mismatches = 0;
  for (uint32_t i = 0; i <= 16; ++i)
    for (uint32_t j = i + 1; j <= 16; ++j) {
      const DyadicProb brute = core::brute_config_prob({i, j});
      if (condgraph::pair_prob_exact(i, j) != brute) ++mismatches;
      if (graph_config_prob({i, j}) != brute) ++mismatches;
      ++pairs;
    }
  const bool spot = condgraph::pair_prob_exact(3, 7) == DyadicProb(1, 2);
  for (uint32_t a = 0; a <= 14; ++a)
    for (uint32_t b = a + 1; b <= 15; ++b)
      for (uint32_t c = b + 1; c <= 16; ++c) {
        if (graph_config_prob({a, b, c}) != core::brute_config_prob({a, b, c})) ++mismatches;
        ++configs;
      }
  for (const std::vector<uint32_t>& cfg :
       {std::vector<uint32_t>{0, 1, 2, 3}, {1, 3, 5, 7}, {2, 3, 5, 8}, {0, 4, 8, 12},
        {1, 2, 4, 8}, {0, 1, 2, 3, 4}, {1, 3, 5, 7, 9}, {2, 5, 9, 13, 16}}) {
    if (graph_config_prob(cfg) != core::brute_config_prob(cfg)) ++mismatches;
    ++configs;
  }
  const long long elapsed = t.ms();
  o.pass = mismatches == 0 && spot && configs >= 200 && elapsed < 300000;
  o.detail = "cover-count probability = exhaustive enumeration on " + std::to_string(pairs) +
             " pairs (i<j<=16) and " + std::to_string(configs) +
             " larger configurations, 0 mismatches required, found " +
             std::to_string(mismatches) + "; P(3,7) = 1/4 " + (spot ? "confirmed" : "WRONG") +
             "; " + std::to_string(elapsed) + " ms < 5 min";
  return o;
}

// --- criterion 4: closed form on both-odd pairs --------------------------------

Outcome criterion_closed_form() {
  Outcome o;
  Timer t;
  uint32_t checked = 0, bad = 0;
  for (uint32_t i = 1; i <= 31; i += 2)
    for (uint32_t j = i + 2; j <= 33; j += 2) {
      condgraph::ClosedFormResult cf = condgraph::pair_prob_closed_form(i, j);
      if (!cf.well_formed || !cf.valid || cf.value != condgraph::pair_prob_exact(i, j)) ++bad;
      ++checked;
    }
  condgraph::ClosedFormResult odd_even = condgraph::pair_prob_closed_form(2, 3);
  const DyadicProb exact_23 = condgraph::pair_prob_exact(2, 3);
  const bool discrepancy = exact_23 == DyadicProb(5, 4) && odd_even.value == DyadicProb(1, 3) &&
                           !odd_even.valid;
  const long long elapsed = t.ms();
  o.pass = bad == 0 && discrepancy && elapsed < 60000;
  o.detail = "closed form matches the exact value on all " + std::to_string(checked) +
             " both-odd pairs 1<=i<j<=33 (" + std::to_string(bad) +
             " disagreements); the (2,3) mismatch is reproduced and flagged: exact 5/16, "
             "closed form 1/8, marked INVALID; " +
             std::to_string(elapsed) + " ms < 1 min";
  return o;
}

// --- criterion 5: Fibonacci law -----------------------------------------------

Outcome criterion_fibonacci() {
  Outcome o;
  std::vector<BigInt> fib(33);
  fib[1] = 1;
  fib[2] = 1;
  for (size_t i = 3; i < fib.size(); ++i) fib[i] = fib[i - 1] + fib[i - 2];
  uint32_t bad = 0;
  for (uint32_t n = 1; n <= 30; ++n)
    if (condgraph::count_covers_path(n) != fib[n + 2]) ++bad;
  const bool spots =
      condgraph::count_covers_path(2) == 3 && condgraph::count_covers_path(3) == 5;
  o.pass = bad == 0 && spots;
  o.detail = "path cover counts equal F(n+2) for n <= 30 (" + std::to_string(bad) +
             " misses); single edge -> 3 covers, two-edge path -> 5 covers " +
             (spots ? "confirmed" : "WRONG");
  return o;
}

// --- criterion 6: rigorous bounds at window 26 ---------------------------------

bool intersects(const Rational& lo, const Rational& up, const reference::Row& ref) {
  return lo <= Rational(ref.upper, 100000) && Rational(ref.lower, 100000) <= up;
}

Outcome criterion_bounds_window26() {
  Outcome o;
  Timer t;
  rigbounds::BoundsAccumulator acc = rigbounds::enumerate_shard(26, 26, 0);
  rigbounds::IntervalVector z = rigbounds::combine(acc);
  rigbounds::IntervalVector y = rigbounds::derive_y(z);
  rigbounds::IntervalVector m = rigbounds::derive_convolution(y, rigbounds::Convolution::m_from_y);
  rigbounds::IntervalVector w = rigbounds::derive_convolution(z, rigbounds::Convolution::w_from_z);
  uint32_t order_bad = 0, miss = 0;
  const struct {
    const rigbounds::IntervalVector* v;
    const std::array<reference::Row, 32>* ref;
  } kinds[] = {{&z, &reference::kZ}, {&y, &reference::kY}, {&m, &reference::kM}, {&w, &reference::kW}};
  for (const auto& kv : kinds)
    for (uint32_t k = 0; k < rigbounds::kTableSize; ++k) {
      if (kv.v->lower[k] > kv.v->upper[k]) ++order_bad;
      if (!intersects(kv.v->lower[k], kv.v->upper[k], (*kv.ref)[k])) ++miss;
    }
  const bool z0 = intersects(z.lower[0], z.upper[0], {23532, 23533, 23535});
  const bool m6 = intersects(m.lower[6], m.upper[6], {7177, 7181, 7202});
  const bool m7 = intersects(m.lower[7], m.upper[7], {7138, 7143, 7170});
  const bool m8 = intersects(m.lower[8], m.upper[8], {7243, 7251, 7282});
  const long long elapsed = t.ms();
  o.pass = order_bad == 0 && miss == 0 && z0 && m6 && m7 && m8;
  o.detail =
      "window-26 run (2^25 Gray steps, " + std::to_string(elapsed) +
      " ms): z/y/m/w lower <= upper at every k (" + std::to_string(order_bad) +
      " violations); all 128 intervals intersect the reference tables from an independent "
      "larger computation at prefix window 44 (" +
      std::to_string(miss) + " misses)";
  o.notes.push_back("z(0) in [" + rat5(z.lower[0], RoundDir::down) + ", " +
                    rat5(z.upper[0], RoundDir::up) + "] vs reference [0.23532, 0.23535]: " +
                    (z0 ? "intersects" : "DISJOINT"));
  o.notes.push_back("m(6) in [" + rat5(m.lower[6], RoundDir::down) + ", " +
                    rat5(m.upper[6], RoundDir::up) + "] vs [0.07177, 0.07202]: " +
                    (m6 ? "intersects" : "DISJOINT") + "; m(7) in [" +
                    rat5(m.lower[7], RoundDir::down) + ", " + rat5(m.upper[7], RoundDir::up) +
                    "] vs [0.07138, 0.07170]: " + (m7 ? "intersects" : "DISJOINT") +
                    "; m(8) in [" + rat5(m.lower[8], RoundDir::down) + ", " +
                    rat5(m.upper[8], RoundDir::up) + "] vs [0.07243, 0.07282]: " +
                    (m8 ? "intersects" : "DISJOINT"));
  return o;
}

// --- criterion 7: sampled divot -----------------------------------------------

Outcome criterion_sampled_divot() {
  Outcome o;
  Timer t;
  CliResult r = run_cli("montecarlo --kind m --samples 2^22 --window 256");
  const long long elapsed = t.ms();
  if (r.status != 0) {
    o.detail = "cli exited with status " + std::to_string(r.status);
    return o;
  }
  std::vector<double> est(16, -1);
  std::istringstream in(r.out);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == '{') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::stringstream row(line);
    std::string k_s, count_s, est_s;
    std::getline(row, k_s, ',');
    std::getline(row, count_s, ',');
    std::getline(row, est_s, ',');
    const unsigned long k = std::stoul(k_s);
    if (k < est.size()) est[k] = std::stod(est_s);
  }
  const double N = 4194304.0;  // 2^22
  auto se = [&](double p) { return std::sqrt(p * (1 - p) / N); };
  const double gap67 = est[6] - est[7];
  const double gap87 = est[8] - est[7];
  const double se67 = std::sqrt(se(est[6]) * se(est[6]) + se(est[7]) * se(est[7]));
  const double se87 = std::sqrt(se(est[8]) * se(est[8]) + se(est[7]) * se(est[7]));
  const double z67 = gap67 / se67;
  const double z87 = gap87 / se87;
  o.pass = gap67 > 0 && gap87 > 0 && z67 > 3 && z87 > 3 && elapsed < 600000;
  o.detail = "montecarlo --kind m --samples 2^22 --window 256 (seed 1, preregistered): "
             "estimates m(6)=" + fmt(est[6]) + " m(7)=" + fmt(est[7]) + " m(8)=" + fmt(est[8]) +
             "; gaps " + fmt(gap67) + " and " + fmt(gap87) +
             ", z-scores vs combined standard error sqrt(se_a^2+se_b^2): " + fmt(z67, 2) +
             " and " + fmt(z87, 2) + ", both required > 3; " + std::to_string(elapsed) +
             " ms < 10 min";
  o.notes.push_back("reference point estimates from an independent 2^28-sample run: "
                    "0.07181 / 0.07143 / 0.07251");
  return o;
}

// --- criterion 8: model divot windows -------------------------------------------

Outcome criterion_model_divot(bool& signature_ok) {
  Outcome o;
  models::DivotScan geo = models::divot_scan("geometric", 0.70, 0.80, 1e-4, 7);
  const bool geo_ok = geo.intervals.size() == 1 &&
                      std::fabs(geo.intervals[0].lower - 0.756) <= 0.005 &&
                      std::fabs(geo.intervals[0].upper - 0.771) <= 0.005;
  models::DivotScan poi = models::divot_scan("poisson", 0.01, 20.0, 1e-4, 7);
  const bool poi_empty = poi.intervals.empty();
  models::DivotScan poi_right = models::divot_scan("poisson", 0.5, 20.0, 1e-4, 7);

  o.pass = geo_ok && poi_empty;
  std::string geo_str = geo.intervals.size() == 1
                            ? "[" + fmt(geo.intervals[0].lower) + ", " +
                                  fmt(geo.intervals[0].upper) + "]"
                            : std::to_string(geo.intervals.size()) + " intervals";
  std::string poi_str = poi.intervals.empty()
                            ? "empty"
                            : "[" + fmt(poi.intervals[0].lower) + ", " +
                                  fmt(poi.intervals[0].upper) + "]";
  o.detail = "geometric scan over [0.70, 0.80]: " + geo_str +
             ", endpoints within 0.005 of (0.756, 0.771): " + (geo_ok ? "yes" : "NO") +
             "; poisson scan over (0.01, 20]: " + poi_str + ", required empty: " +
             (poi_empty ? "yes" : "NO");

  // documented failure shape: the poisson grid catches a parity echo at tiny
  // parameters, clamped to the grid edge, while the right of the degenerate
  // regime stays empty
  const bool artifact_shape = poi.intervals.size() == 1 &&
                              poi.intervals[0].lower <= 0.0101 &&
                              poi.intervals[0].upper > 0.40 && poi.intervals[0].upper < 0.46 &&
                              poi_right.intervals.empty();
  signature_ok = geo_ok && !poi_empty && artifact_shape;
  if (!poi_empty) {
    o.notes.push_back(
        "the poisson interval is not a divot window: below parameter ~0.43 the model puts "
        "nearly all prefix mass on k=0, odd-k masses vanish through the parity of the "
        "convolution, and the dip predicate m(7)<m(6), m(7)<m(8) fires on that echo");
    o.notes.push_back(
        "the echo regime is clamped to the grid edge (extends to 0), appears identically in "
        "the geometric family below ~0.423, and vanishes for every parameter >= 0.5: scan "
        "over [0.5, 20] is " +
        std::string(poi_right.intervals.empty() ? "empty" : "NOT EMPTY") +
        ", so no isolated dip window exists anywhere in the poisson family");
  }
  return o;
}

// --- criterion 9: decay sandwich at window 18 -----------------------------------

Outcome criterion_decay_sandwich(bool& signature_ok) {
  Outcome o;
  core::ExactDistribution d = core::brute_distribution(18);
  const double phi_half = (1.0 + std::sqrt(5.0)) / 4.0;
  double mass[4];
  bool lower_ok[4];
  for (uint32_t k = 0; k < 4; ++k) {
    mass[k] = d.masses[k].to_double();
    const Rational lower_bound(1, pow2((k + 1) / 2 + 10));
    lower_ok[k] = d.masses[k].to_rational() > lower_bound;
  }
  const double c = mass[0];
  bool upper_ok[4] = {true, false, false, false};
  for (uint32_t k = 1; k < 4; ++k) upper_ok[k] = mass[k] < c * std::pow(phi_half, k);
  const bool all_lower = lower_ok[0] && lower_ok[1] && lower_ok[2] && lower_ok[3];
  const bool all_upper = upper_ok[1] && upper_ok[2] && upper_ok[3];
  o.pass = all_lower && all_upper;
  o.detail = "window-18 masses m(0..3) = " + fmt(mass[0]) + " / " + fmt(mass[1]) + " / " +
             fmt(mass[2]) + " / " + fmt(mass[3]) +
             "; construction lower bound 2^(-ceil(k/2)-10) holds at k=0..3: " +
             (all_lower ? "yes" : "NO") + "; decay upper bound C*(phi/2)^k with C=m(0)=" +
             fmt(c) + " holds at k=1..3: " + (all_upper ? "yes" : "NO");
  const bool increasing = mass[0] < mass[1] && mass[1] < mass[2] && mass[2] < mass[3];
  signature_ok = all_lower && !upper_ok[1] && !upper_ok[2] && !upper_ok[3] && increasing;
  if (!all_upper) {
    o.notes.push_back("bounds demanded: " + fmt(c * phi_half) + " / " +
                      fmt(c * phi_half * phi_half) + " / " +
                      fmt(c * phi_half * phi_half * phi_half) + " at k=1/2/3");
    o.notes.push_back(
        "the head of the distribution rises over k=0..3 (the mode sits near the mean, far "
        "right of k=3), so a geometric-decay envelope calibrated once at k=0 cannot majorize "
        "it; the (phi/2)^k decay is a tail statement, and the lower bound half confirms the "
        "masses are far above the construction floor");
  }
  return o;
}

// --- criterion 10: consecutive-miss bounds ---------------------------------------

Outcome criterion_consecutive() {
  Outcome o;
  Timer t;
  uint32_t cases = 0, lower_bad = 0;
  double max_slack = 0;
  uint32_t worst_k = 0, worst_m = 0;
  for (uint32_t k = 0; k + 1 <= 18; ++k)
    for (uint32_t m = 1; k + m <= 18; ++m) {
      std::vector<uint32_t> targets;
      for (uint32_t tpos = k + 1; tpos <= k + m; ++tpos) targets.push_back(tpos);
      const DyadicProb p = core::brute_config_prob(targets);
      condgraph::ConsecutiveBounds b = condgraph::consecutive_bounds(k, m);
      if (p.to_rational() < b.lower.to_rational()) ++lower_bad;
      const double slack = p.to_double() / b.upper;
      if (slack > max_slack) {
        max_slack = slack;
        worst_k = k;
        worst_m = m;
      }
      ++cases;
    }
  const long long elapsed = t.ms();
  o.pass = lower_bad == 0 && max_slack <= 4.0;
  o.detail = "exhaustive P(k+1..k+m all missing) on all " + std::to_string(cases) +
             " cases with k+m <= 18: above the construction lower bound everywhere (" +
             std::to_string(lower_bad) + " violations); worst upper-bound slack factor " +
             fmt(max_slack, 4) + " at k=" + std::to_string(worst_k) + " m=" +
             std::to_string(worst_m) + ", required <= 4; " + std::to_string(elapsed) + " ms";
  return o;
}

// --- criterion 11: second-moment identity ----------------------------------------

Outcome criterion_second_moment() {
  Outcome o;
  core::ExactDistribution d = core::brute_distribution(10);
  DyadicProb lhs;
  for (uint32_t k = 0; k < d.masses.size(); ++k) lhs = lhs + d.masses[k].scaled(BigInt(k) * k);
  DyadicProb rhs;
  for (uint32_t i = 0; i <= 18; ++i) {
    for (uint32_t j = i + 1; j <= 18; ++j)
      rhs = rhs + core::brute_config_prob({i, j}, 10).scaled(2);
    rhs = rhs + core::brute_config_prob({i}, 10);
  }
  o.pass = lhs == rhs;
  std::ostringstream both;
  both << "E[M^2] at window 10 = " << lhs.to_rational() << " by full enumeration, "
       << rhs.to_rational() << " by 2*sum pair-miss + sum single-miss; exactly equal: "
       << (o.pass ? "yes" : "NO");
  o.detail = both.str();
  return o;
}

}  // namespace

int main() {
  std::printf("acceptance gate, library + cli at %s\n\n", SUMSETS_CLI_PATH);
  Gate gate;
  auto guarded = [](Outcome (*fn)()) -> Outcome {
    try {
      return fn();
    } catch (const std::exception& e) {
      Outcome o;
      o.detail = std::string("exception: ") + e.what();
      return o;
    }
  };

  gate.report(1, true, guarded(criterion_variance_certificate));
  gate.report(2, true, guarded(criterion_expectation));
  gate.report(3, true, guarded(criterion_graph_equivalence));
  gate.report(4, true, guarded(criterion_closed_form));
  gate.report(5, true, guarded(criterion_fibonacci));
  gate.report(6, true, guarded(criterion_bounds_window26));
  gate.report(7, true, guarded(criterion_sampled_divot));

  // criteria 8 and 9 carry documented failures; the gate demands the exact
  // documented shape, so a silent change in either direction trips it
  bool sig8 = false, sig9 = false;
  try {
    const Outcome o8 = criterion_model_divot(sig8);
    gate.report_documented_failure(8, o8, sig8);
  } catch (const std::exception& e) {
    Outcome o;
    o.detail = std::string("exception: ") + e.what();
    gate.report_documented_failure(8, o, false);
  }
  try {
    const Outcome o9 = criterion_decay_sandwich(sig9);
    gate.report_documented_failure(9, o9, sig9);
  } catch (const std::exception& e) {
    Outcome o;
    o.detail = std::string("exception: ") + e.what();
    gate.report_documented_failure(9, o, false);
  }

  gate.report(10, true, guarded(criterion_consecutive));
  gate.report(11, true, guarded(criterion_second_moment));

  std::printf("\nsummary: %d pass, %d documented failures, %d unexpected\n", gate.passes,
              gate.expected_fails, gate.unexpected);
  return gate.unexpected == 0 ? 0 : 1;
}
