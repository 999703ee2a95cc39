#pragma once

#include <array>
#include <cstddef>
#include <functional>

#include "stepline/bigreal.hpp"

namespace stepline {

/// Value plus mixed derivatives d1^i d2^j (i+j <= 3) in the two logarithmic
/// directions. Order 3 is a compile-visible constant: no identity checked
/// here needs more than a third derivative.
class Jet3 {
 public:
  static constexpr int kOrder = 3;
  static constexpr std::size_t kSlots = 10;

  Jet3() = default;
  explicit Jet3(long prec) { for (auto& s : c_) s = BigReal(prec); }

  /// Constant jet: value slot only.
  static Jet3 constant(const BigReal& value);
  /// Coordinate eta^(dir) as a jet: d^(dir) eta = eta, all higher pure
  /// derivatives in that direction equal eta as well (log-derivative of the
  /// coordinate reproduces it), cross-derivatives vanish.
  static Jet3 coordinate(const BigReal& eta, int dir);

  static std::size_t slot(int i, int j);
  const BigReal& d(int i, int j) const { return c_[slot(i, j)]; }
  BigReal& d(int i, int j) { return c_[slot(i, j)]; }
  const BigReal& value() const { return c_[0]; }
  BigReal& value() { return c_[0]; }

  long precision() const { return c_[0].precision(); }

  /// theta = d1 + d2 applied k times (k <= 3), read from the slots.
  BigReal theta(int k = 1) const;
  /// theta-tilde = d1 - d2.
  BigReal theta_tilde() const;
  /// theta^k log f for k in {1,2,3}; requires value() != 0.
  BigReal dlog(int k = 1) const;

  Jet3 operator-() const;
  friend Jet3 operator+(const Jet3& a, const Jet3& b);
  friend Jet3 operator-(const Jet3& a, const Jet3& b);
  friend Jet3 operator*(const Jet3& a, const Jet3& b);
  friend Jet3 operator/(const Jet3& a, const Jet3& b);
  friend Jet3 operator*(const BigReal& a, const Jet3& b);

  Jet3& operator+=(const Jet3& b) { *this = *this + b; return *this; }
  Jet3& operator-=(const Jet3& b) { *this = *this - b; return *this; }
  Jet3& operator*=(const Jet3& b) { *this = *this * b; return *this; }
  Jet3& operator/=(const Jet3& b) { *this = *this / b; return *this; }

  /// Largest |slot| value, used for tail bounds in series summation.
  BigReal max_abs() const;

 private:
  std::array<BigReal, kSlots> c_{};
};

/// Sums a term series of jets. Terms are requested by index until twenty
/// consecutive terms stay below the tail budget while shrinking by the given
/// ratio; a geometric bound on the dropped tail is returned alongside the
/// sum. Throws GuardError if the shrink test keeps failing within max_terms.
/// Callers whose limiting term ratio sits at or above 3/4 must widen the
/// threshold accordingly (the bound stays geometric with that ratio).
struct JetSeriesResult {
  Jet3 sum;
  BigReal tail_bound;
  std::size_t terms_used = 0;
};
JetSeriesResult jet_eval(const std::function<Jet3(std::size_t)>& term, long precision,
                         std::size_t max_terms = 100000,
                         const BigReal* ratio_threshold = nullptr);

/// Shrink threshold for a series whose term ratio tends to `limit_ratio`:
/// max(3/4, (1 + limit)/2), strictly below 1 for convergent series.
BigReal series_ratio_threshold(const BigReal& limit_ratio, long precision);

}  // namespace stepline
