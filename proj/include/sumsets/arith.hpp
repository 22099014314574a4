#pragma once

// Exact arithmetic building blocks shared by every module: arbitrary-precision
// integers/rationals (boost.multiprecision), dyadic probabilities, Fibonacci
// numbers, and decimal formatting with directed rounding.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace sumsets {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// 50 decimal digits ~ 166-bit significand; used only for reporting, never for
// the exact accumulation itself.
using HighFloat = boost::multiprecision::cpp_bin_float_50;

inline constexpr double kPhi = 1.6180339887498948482;

// Thrown when an input exceeds a documented size limit (machine-word windows,
// vertex-count caps, ...).  The CLI maps this to its own exit code.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on corrupt or inconsistent persisted state (checkpoints, CSV inputs)
// and on internal bookkeeping violations that indicate a bug.
class integrity_error : public std::runtime_error {
 public:
  explicit integrity_error(const std::string& what) : std::runtime_error(what) {}
};

inline BigInt pow2(unsigned e) { return BigInt(1) << e; }

// F(1) = F(2) = 1 convention; F(0) = 0.
inline BigInt fibonacci(unsigned n) {
  BigInt a = 0, b = 1;
  for (unsigned i = 0; i < n; ++i) {
    BigInt c = a + b;
    a = b;
    b = c;
  }
  return a;
}

// Non-negative rational with a power-of-two denominator, kept normalized
// (numerator odd or zero).  Probabilities under uniform subset models are
// exactly representable; all comparisons and arithmetic are exact.
class DyadicProb {
 public:
  DyadicProb() = default;
  DyadicProb(BigInt numerator, unsigned denominator_log2)
      : num_(std::move(numerator)), exp_(denominator_log2) {
    if (num_ < 0) throw std::invalid_argument("DyadicProb: negative numerator");
    normalize();
  }

  static DyadicProb zero() { return DyadicProb(); }
  static DyadicProb one() { return DyadicProb(1, 0); }

  const BigInt& numerator() const { return num_; }
  unsigned denominator_log2() const { return exp_; }
  bool is_zero() const { return num_ == 0; }

  DyadicProb operator+(const DyadicProb& o) const {
    unsigned e = std::max(exp_, o.exp_);
    return DyadicProb((num_ << (e - exp_)) + (o.num_ << (e - o.exp_)), e);
  }
  DyadicProb operator-(const DyadicProb& o) const {
    unsigned e = std::max(exp_, o.exp_);
    BigInt d = (num_ << (e - exp_)) - (o.num_ << (e - o.exp_));
    if (d < 0) throw std::invalid_argument("DyadicProb: negative difference");
    return DyadicProb(std::move(d), e);
  }
  DyadicProb operator*(const DyadicProb& o) const {
    return DyadicProb(num_ * o.num_, exp_ + o.exp_);
  }
  DyadicProb scaled(const BigInt& factor) const {
    return DyadicProb(num_ * factor, exp_);
  }

  friend bool operator==(const DyadicProb& a, const DyadicProb& b) {
    return a.num_ == b.num_ && a.exp_ == b.exp_;  // both normalized
  }
  friend bool operator!=(const DyadicProb& a, const DyadicProb& b) { return !(a == b); }
  friend bool operator<(const DyadicProb& a, const DyadicProb& b) {
    unsigned e = std::max(a.exp_, b.exp_);
    return (a.num_ << (e - a.exp_)) < (b.num_ << (e - b.exp_));
  }
  friend bool operator<=(const DyadicProb& a, const DyadicProb& b) { return !(b < a); }
  friend bool operator>(const DyadicProb& a, const DyadicProb& b) { return b < a; }
  friend bool operator>=(const DyadicProb& a, const DyadicProb& b) { return !(a < b); }

  Rational to_rational() const { return Rational(num_, pow2(exp_)); }
  double to_double() const { return static_cast<double>(HighFloat(to_rational())); }

  // "num/2^exp"
  std::string to_string() const {
    return num_.str() + "/2^" + std::to_string(exp_);
  }

 private:
  void normalize() {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    unsigned tz = boost::multiprecision::lsb(num_);
    unsigned s = tz < exp_ ? tz : exp_;
    num_ >>= s;
    exp_ -= s;
  }

  BigInt num_ = 0;
  unsigned exp_ = 0;
};

enum class RoundDir { down, up };

// Decimal string of a non-negative rational with `places` fractional digits,
// rounded toward the requested direction.  Used for outward-rounded bound
// columns, so the printed value must never move inward.
inline std::string format_decimal(const Rational& q, int places, RoundDir dir) {
  if (q < 0) throw std::invalid_argument("format_decimal: negative value");
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  BigInt n = boost::multiprecision::numerator(q) * scale;
  BigInt d = boost::multiprecision::denominator(q);
  BigInt units;
  if (dir == RoundDir::down)
    units = n / d;
  else
    units = (n + d - 1) / d;
  BigInt whole = units / scale;
  BigInt frac = units % scale;
  std::string f = frac.str();
  if (static_cast<int>(f.size()) < places) f.insert(0, places - f.size(), '0');
  return places > 0 ? whole.str() + "." + f : whole.str();
}

inline std::string format_decimal(const DyadicProb& p, int places, RoundDir dir) {
  return format_decimal(p.to_rational(), places, dir);
}

// floor/ceil of q * 2^denominator_log2, for exporting rational bounds as
// integer numerators over a fixed dyadic denominator.
inline BigInt scaled_floor(const Rational& q, unsigned denominator_log2) {
  BigInt n = boost::multiprecision::numerator(q) << denominator_log2;
  return n / boost::multiprecision::denominator(q);
}
inline BigInt scaled_ceil(const Rational& q, unsigned denominator_log2) {
  BigInt n = boost::multiprecision::numerator(q) << denominator_log2;
  BigInt d = boost::multiprecision::denominator(q);
  return (n + d - 1) / d;
}

}  // namespace sumsets
