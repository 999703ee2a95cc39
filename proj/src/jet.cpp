#include "stepline/jet.hpp"

#include <stdexcept>

namespace stepline {

namespace {
// Graded slot order of the (i,j) exponent pairs, i+j <= 3.
constexpr int kI[Jet3::kSlots] = {0, 1, 0, 2, 1, 0, 3, 2, 1, 0};
constexpr int kJ[Jet3::kSlots] = {0, 0, 1, 0, 1, 2, 0, 1, 2, 3};

constexpr long kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
}  // namespace

std::size_t Jet3::slot(int i, int j) {
  for (std::size_t s = 0; s < kSlots; ++s)
    if (kI[s] == i && kJ[s] == j) return s;
  throw std::out_of_range("Jet3 slot out of range");
}

Jet3 Jet3::constant(const BigReal& value) {
  Jet3 out(value.precision());
  out.c_[0] = value;
  return out;
}

Jet3 Jet3::coordinate(const BigReal& eta, int dir) {
  Jet3 out(eta.precision());
  for (std::size_t s = 0; s < kSlots; ++s) {
    int pure = dir == 1 ? kI[s] : kJ[s];
    int cross = dir == 1 ? kJ[s] : kI[s];
    if (cross == 0 && (pure >= 0)) out.c_[s] = eta;  // (eta d/deta)^k eta = eta
  }
  return out;
}

BigReal Jet3::theta(int k) const {
  long prec = precision();
  BigReal acc(prec);
  if (k < 0 || k > kOrder) throw std::out_of_range("Jet3::theta order");
  for (int p = 0; p <= k; ++p)
    acc += BigReal(kBinom[k][p], prec) * d(p, k - p);
  return acc;
}

BigReal Jet3::theta_tilde() const {
  return d(1, 0) - d(0, 1);
}

BigReal Jet3::dlog(int k) const {
  const BigReal& f = value();
  BigReal l1 = theta(1) / f;
  if (k == 1) return l1;
  BigReal l2 = theta(2) / f - l1 * l1;
  if (k == 2) return l2;
  if (k == 3) {
    BigReal r1 = theta(1) / f, r2 = theta(2) / f, r3 = theta(3) / f;
    return r3 - BigReal(3, f.precision()) * r2 * r1 + BigReal(2, f.precision()) * r1 * r1 * r1;
  }
  throw std::out_of_range("Jet3::dlog order");
}

Jet3 Jet3::operator-() const {
  Jet3 out(precision());
  for (std::size_t s = 0; s < kSlots; ++s) out.c_[s] = -c_[s];
  return out;
}

Jet3 operator+(const Jet3& a, const Jet3& b) {
  Jet3 out;
  for (std::size_t s = 0; s < Jet3::kSlots; ++s) out.c_[s] = a.c_[s] + b.c_[s];
  return out;
}

Jet3 operator-(const Jet3& a, const Jet3& b) {
  Jet3 out;
  for (std::size_t s = 0; s < Jet3::kSlots; ++s) out.c_[s] = a.c_[s] - b.c_[s];
  return out;
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
  long prec = std::max(a.precision(), b.precision());
  Jet3 out(prec);
  for (std::size_t s = 0; s < Jet3::kSlots; ++s) {
    int i = kI[s], j = kJ[s];
    BigReal acc(prec);
    for (int p = 0; p <= i; ++p)
      for (int q = 0; q <= j; ++q)
        acc += BigReal(kBinom[i][p] * kBinom[j][q], prec) * a.d(p, q) * b.d(i - p, j - q);
    out.c_[s] = acc;
  }
  return out;
}

Jet3 operator/(const Jet3& a, const Jet3& b) {
  long prec = std::max(a.precision(), b.precision());
  if (b.value().exactly_zero()) throw std::domain_error("Jet3 division by zero value");
  Jet3 out(prec);
  // Solve (b*out)(i,j) = a(i,j) in graded order; the (0,0) factor isolates
  // the unknown slot.
  for (std::size_t s = 0; s < Jet3::kSlots; ++s) {
    int i = kI[s], j = kJ[s];
    BigReal acc = a.d(i, j);
    for (int p = 0; p <= i; ++p)
      for (int q = 0; q <= j; ++q) {
        if (p == 0 && q == 0) continue;
        acc -= BigReal(kBinom[i][p] * kBinom[j][q], prec) * b.d(p, q) * out.d(i - p, j - q);
      }
    out.c_[s] = acc / b.value();
  }
  return out;
}

Jet3 operator*(const BigReal& a, const Jet3& b) {
  Jet3 out(std::max(a.precision(), b.precision()));
  for (std::size_t s = 0; s < Jet3::kSlots; ++s) out.c_[s] = a * b.c_[s];
  return out;
}

BigReal Jet3::max_abs() const {
  BigReal m = c_[0].abs();
  for (std::size_t s = 1; s < kSlots; ++s) m = max(m, c_[s].abs());
  return m;
}

BigReal series_ratio_threshold(const BigReal& limit_ratio, long precision) {
  BigReal base = BigReal::ratio(3, 4, precision);
  BigReal widened = (BigReal(1, precision) + limit_ratio.abs()) / BigReal(2, precision);
  return max(base, widened);
}

JetSeriesResult jet_eval(const std::function<Jet3(std::size_t)>& term, long precision,
                         std::size_t max_terms, const BigReal* ratio_threshold) {
  // Stop once 20 consecutive terms fall below the per-slot tail budget while
  // shrinking geometrically, then bound the tail by that ratio. The k^n
  // prefactors on moment terms make single-term smallness an unsafe stop
  // rule.
  const BigReal budget = BigReal::pow2(-(precision + 32), precision);
  const BigReal r = ratio_threshold ? *ratio_threshold : BigReal::ratio(3, 4, precision);
  if (!(r < BigReal(1, precision))) throw GuardError("jet_eval: shrink ratio must be < 1");
  const BigReal tail_factor = r / (BigReal(1, precision) - r);
  Jet3 acc(precision);
  BigReal prev_mag(precision);
  std::size_t quiet = 0;
  for (std::size_t k = 0; k < max_terms; ++k) {
    Jet3 t = term(k);
    acc += t;
    BigReal mag = t.max_abs();
    BigReal scale = max(acc.max_abs(), BigReal(1, precision));
    bool small = mag <= budget * scale;
    bool shrinking = k == 0 || prev_mag.exactly_zero() || mag <= r * prev_mag;
    quiet = (small && shrinking) ? quiet + 1 : 0;
    prev_mag = mag;
    if (quiet >= 20) {
      JetSeriesResult out;
      out.sum = acc;
      out.tail_bound = mag * tail_factor;
      out.terms_used = k + 1;
      return out;
    }
  }
  throw GuardError("jet_eval: series did not pass the tail test (divergent or too slow)");
}

}  // namespace stepline
