#pragma once

#include <mpfr.h>

#include <stdexcept>
#include <string>

namespace stepline {

/// Arbitrary-precision real backed by MPFR. Every value carries its own
/// precision; arithmetic results use the larger of the operand precisions.
class BigReal {
 public:
  static constexpr long kDefaultPrecision = 256;

  BigReal() : BigReal(0L, kDefaultPrecision) {}
  explicit BigReal(long prec) { mpfr_init2(v_, check_prec(prec)); mpfr_set_zero(v_, 1); }
  BigReal(long value, long prec) { mpfr_init2(v_, check_prec(prec)); mpfr_set_si(v_, value, MPFR_RNDN); }
  BigReal(int value, long prec) : BigReal(static_cast<long>(value), prec) {}
  BigReal(double value, long prec) { mpfr_init2(v_, check_prec(prec)); mpfr_set_d(v_, value, MPFR_RNDN); }

  BigReal(const BigReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigReal(BigReal&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~BigReal() { mpfr_clear(v_); }

  /// Exact rational p/q at the given precision.
  static BigReal ratio(long num, long den, long prec);
  /// Parses "3", "-1.25" or "p/q"; throws std::invalid_argument on bad input.
  static BigReal parse(const std::string& text, long prec);
  /// 2^k, exact.
  static BigReal pow2(long k, long prec);

  long precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Round-to-nearest decimal with the given number of significant digits.
  std::string to_string(long digits) const;

  bool is_negative() const { return mpfr_sgn(v_) < 0; }
  bool exactly_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  BigReal operator-() const;
  BigReal abs() const;
  BigReal exp() const;
  BigReal sqrt() const;

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  BigReal& operator+=(const BigReal& b) { *this = *this + b; return *this; }
  BigReal& operator-=(const BigReal& b) { *this = *this - b; return *this; }
  BigReal& operator*=(const BigReal& b) { *this = *this * b; return *this; }
  BigReal& operator/=(const BigReal& b) { *this = *this / b; return *this; }

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_) != 0; }

  friend BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

 private:
  static long check_prec(long prec) {
    if (prec < 2) throw std::invalid_argument("BigReal precision must be >= 2 bits");
    return prec;
  }
  mpfr_t v_;
};

/// Zero tests and residual checks never use exact equality on computed
/// values; callers supply an absolute floor and a relative factor.
struct Tolerance {
  BigReal abs_floor;
  BigReal rel_factor;

  /// |residual| <= abs_floor + rel_factor * scale
  bool ok(const BigReal& residual, const BigReal& scale) const {
    return residual.abs() <= abs_floor + rel_factor * scale.abs();
  }
  bool is_zero(const BigReal& value) const { return value.abs() <= abs_floor; }
};

/// Default kernel tolerance at working precision P and matrix dimension n:
/// relative factor 2^-(P-8n), same value as absolute floor.
Tolerance default_tolerance(long precision, long n);

/// Breakdown of a pivot-free elimination: the index of the first vanishing
/// leading minor.
class FactorizationBreakdown : public std::runtime_error {
 public:
  FactorizationBreakdown(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Parameter or convergence guard violation.
class GuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace stepline
