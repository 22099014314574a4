#pragma once

// Analytic model families for the limiting miss distribution: plug a
// candidate z-curve (geometric or Poisson) into the exact convolutions
//   y(k) = sum_{2i <= k} 2^{-(i+1)} z(k-2i)
//   m(k) = sum_{i <= k} y(i) y(k-i)
// and examine the shape of the resulting m-curve, in particular whether it
// dips at k=7 the way the measured distribution does.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumsets::models {

struct ModelCurve {
  std::string family;  // "geometric" or "poisson"
  double lambda = 0;
  uint32_t k_max = 0;
  std::vector<double> z, y, m;  // indexes 0..k_max
  double z_tail = 0;            // 1 - sum of tabulated z; convolution truncation bound
};

// z, y, m for one parameter value. The convolutions are exact for k <= K_max:
// every term they need lies inside the table. Truncation shows up only in the
// lost normalization mass, reported as z_tail.
inline ModelCurve model_curve(const std::string& family, double lambda, uint32_t k_max = 31) {
  ModelCurve c{family, lambda, k_max, {}, {}, {}, 0};
  c.z.assign(k_max + 1, 0.0);
  if (family == "geometric") {
    if (!(lambda > 0.0 && lambda < 1.0))
      throw std::invalid_argument("model_curve: geometric needs 0 < lambda < 1");
    double p = 1.0 - lambda;
    for (uint32_t k = 0; k <= k_max; ++k) {
      c.z[k] = p;
      p *= lambda;
    }
  } else if (family == "poisson") {
    if (!(lambda > 0.0)) throw std::invalid_argument("model_curve: poisson needs lambda > 0");
    double p = std::exp(-lambda);
    for (uint32_t k = 0; k <= k_max; ++k) {
      c.z[k] = p;
      p *= lambda / static_cast<double>(k + 1);
    }
  } else {
    throw std::invalid_argument("model_curve: unknown family " + family);
  }
  double total = 0;
  for (double v : c.z) total += v;
  c.z_tail = 1.0 - total;
  c.y.assign(k_max + 1, 0.0);
  for (uint32_t k = 0; k <= k_max; ++k) {
    double acc = 0;
    double coeff = 0.5;
    for (uint32_t i = 0; 2 * i <= k; ++i) {
      acc += coeff * c.z[k - 2 * i];
      coeff *= 0.5;
    }
    c.y[k] = acc;
  }
  c.m.assign(k_max + 1, 0.0);
  for (uint32_t k = 0; k <= k_max; ++k) {
    double acc = 0;
    for (uint32_t i = 0; i <= k; ++i) acc += c.y[i] * c.y[k - i];
    c.m[k] = acc;
  }
  return c;
}

// Strict two-sided dip at k: m(k) < m(k-1) and m(k) < m(k+1).
inline bool has_divot(const ModelCurve& c, uint32_t k = 7) {
  if (k == 0 || k + 1 > c.k_max) throw std::invalid_argument("has_divot: k out of range");
  return c.m[k] < c.m[k - 1] && c.m[k] < c.m[k + 1];
}

struct DivotInterval {
  double lower = 0;
  double upper = 0;
};

struct DivotScan {
  std::string family;
  uint32_t divot_k = 7;
  double grid_lo = 0, grid_hi = 0, grid_step = 0;
  std::vector<DivotInterval> intervals;  // maximal divot-positive parameter ranges
};

namespace detail {

inline bool divot_at(const std::string& family, double lambda, uint32_t k) {
  return has_divot(model_curve(family, lambda, k + 1), k);
}

// Boundary between a divot-negative lambda `neg` and a divot-positive `pos`
// (in either order), bisected to width `tol`.
inline double refine_boundary(const std::string& family, uint32_t k, double neg, double pos,
                              double tol) {
  while (std::abs(pos - neg) > tol) {
    const double mid = 0.5 * (neg + pos);
    if (divot_at(family, mid, k))
      pos = mid;
    else
      neg = mid;
  }
  return 0.5 * (neg + pos);
}

}  // namespace detail

// Maximal parameter intervals where the m-curve has a strict dip at divot_k.
// Grid scan first; each boundary then bisected down to refine_tol.
inline DivotScan divot_scan(const std::string& family, double lo, double hi,
                            double step = 1e-4, uint32_t divot_k = 7,
                            double refine_tol = 1e-5) {
  if (!(lo < hi)) throw std::invalid_argument("divot_scan: need lo < hi");
  if (!(step > 0.0 && step <= 1e-4 + 1e-12))
    throw std::invalid_argument("divot_scan: grid step must be <= 1e-4");
  if (divot_k == 0) throw std::invalid_argument("divot_scan: divot_k must be >= 1");
  DivotScan scan{family, divot_k, lo, hi, step, {}};
  const auto steps = static_cast<uint64_t>((hi - lo) / step) + 1;
  bool prev_in = false;
  double prev_lambda = lo;
  double open_lower = 0;
  bool open = false;
  for (uint64_t i = 0; i <= steps; ++i) {
    const double lambda = std::min(lo + static_cast<double>(i) * step, hi);
    const bool in = detail::divot_at(family, lambda, divot_k);
    if (in && !prev_in) {
      open_lower = (i == 0) ? lambda
                            : detail::refine_boundary(family, divot_k, prev_lambda, lambda,
                                                      refine_tol);
      open = true;
    } else if (!in && prev_in) {
      const double upper =
          detail::refine_boundary(family, divot_k, lambda, prev_lambda, refine_tol);
      scan.intervals.push_back({open_lower, upper});
      open = false;
    }
    prev_in = in;
    prev_lambda = lambda;
    if (lambda >= hi) break;
  }
  if (open) scan.intervals.push_back({open_lower, hi});
  return scan;
}

struct LambdaFit {
  double lambda = 0;
  double sse = 0;
  std::vector<double> residuals;       // observed - fitted, per k
  std::vector<double> residual_share;  // weighted squared residual fraction per k
};

namespace detail {

inline double fit_objective(const std::vector<double>& z_hat, const std::vector<double>& w,
                            double lambda) {
  double sse = 0;
  double p = 1.0 - lambda;
  for (size_t k = 0; k < z_hat.size(); ++k) {
    const double r = z_hat[k] - p;
    sse += w[k] * r * r;
    p *= lambda;
  }
  return sse;
}

}  // namespace detail

// Least-squares fit of the geometric family to estimates z_hat(0..K).
// Unweighted by default; pass weights (e.g. inverse variances) to override.
// Coarse grid over (0,1) followed by golden-section refinement.
inline LambdaFit fit_lambda(const std::vector<double>& z_hat,
                            const std::vector<double>* weights = nullptr) {
  if (z_hat.empty()) throw std::invalid_argument("fit_lambda: no estimates");
  bool any = false;
  for (double v : z_hat) any = any || v != 0.0;
  if (!any) throw std::invalid_argument("fit_lambda: all estimates are zero");
  std::vector<double> w(z_hat.size(), 1.0);
  if (weights != nullptr) {
    if (weights->size() != z_hat.size())
      throw std::invalid_argument("fit_lambda: weight count mismatch");
    for (double v : *weights)
      if (!(v >= 0.0)) throw std::invalid_argument("fit_lambda: negative weight");
    w = *weights;
  }
  double best = 0.5, best_sse = detail::fit_objective(z_hat, w, 0.5);
  for (int i = 1; i < 1000; ++i) {
    const double lambda = i / 1000.0;
    const double sse = detail::fit_objective(z_hat, w, lambda);
    if (sse < best_sse) {
      best_sse = sse;
      best = lambda;
    }
  }
  double a = std::max(1e-9, best - 1e-3);
  double b = std::min(1.0 - 1e-9, best + 1e-3);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = detail::fit_objective(z_hat, w, x1);
  double f2 = detail::fit_objective(z_hat, w, x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = detail::fit_objective(z_hat, w, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = detail::fit_objective(z_hat, w, x2);
    }
  }
  LambdaFit fit;
  fit.lambda = 0.5 * (a + b);
  fit.sse = detail::fit_objective(z_hat, w, fit.lambda);
  fit.residuals.resize(z_hat.size());
  fit.residual_share.resize(z_hat.size());
  double p = 1.0 - fit.lambda;
  for (size_t k = 0; k < z_hat.size(); ++k) {
    fit.residuals[k] = z_hat[k] - p;
    fit.residual_share[k] = fit.sse > 0 ? w[k] * fit.residuals[k] * fit.residuals[k] / fit.sse : 0;
    p *= fit.lambda;
  }
  return fit;
}

}  // namespace sumsets::models
