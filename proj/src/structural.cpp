#include "stepline/structural.hpp"

#include <algorithm>

namespace stepline {

Win operator*(const Win& a_raw, const Win& b_raw) {
  Win a = a_raw.normalized(), b = b_raw.normalized();
  long n = a.size();
  if (b.size() != n) throw std::invalid_argument("Win product size mismatch");
  Mat<BigReal> m = a.m_ * b.m_;
  // Row i of the product needs rows i..i+ubw(a) of b and a complete sum.
  long vr = std::min({a.vr_, b.vr_ - a.ubw_, n - a.ubw_});
  long vc = std::min({b.vc_, a.vc_ - b.lbw_, n - b.lbw_});
  long lbw = std::min(n, a.lbw_ + b.lbw_);
  long ubw = std::min(n, a.ubw_ + b.ubw_);
  return Win(std::move(m), std::max(0L, vr), std::max(0L, vc), lbw, ubw);
}

Win operator+(const Win& a_raw, const Win& b_raw) {
  Win a = a_raw.normalized(), b = b_raw.normalized();
  return Win(a.m_ + b.m_, std::min(a.vr_, b.vr_), std::min(a.vc_, b.vc_),
             std::max(a.lbw_, b.lbw_), std::max(a.ubw_, b.ubw_));
}

Win operator-(const Win& a_raw, const Win& b_raw) {
  Win a = a_raw.normalized(), b = b_raw.normalized();
  return Win(a.m_ - b.m_, std::min(a.vr_, b.vr_), std::min(a.vc_, b.vc_),
             std::max(a.lbw_, b.lbw_), std::max(a.ubw_, b.ubw_));
}

Win Win::banded(long lower_bw, long upper_bw) const {
  long n = size();
  long prec = n ? m_.at(0, 0).precision() : BigReal::kDefaultPrecision;
  Mat<BigReal> m = m_;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (j - i > upper_bw || i - j > lower_bw) m.at(i, j) = BigReal(0, prec);
  long vr = std::max(vr_, vc_ - upper_bw);
  long vc = std::max(vc_, vr_ - lower_bw);
  return Win(std::move(m), vr, vc, lower_bw, upper_bw);
}

Win Win::scaled(const BigReal& s) const {
  Mat<BigReal> m = m_;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) *= s;
  return Win(std::move(m), vr_, vc_, lbw_, ubw_);
}

BigReal Win::window_max_abs() const {
  if (vr_ <= 0 && vc_ <= 0) throw GuardError("window empty: truncation too small for this check");
  long prec = size() ? m_.at(0, 0).precision() : BigReal::kDefaultPrecision;
  BigReal best(prec);
  for (long i = 0; i < size(); ++i)
    for (long j = 0; j < size(); ++j)
      if (entry_valid(i, j)) best = max(best, m_.at(i, j).abs());
  return best;
}

BigReal Win::max_abs_diff(const Win& a, const Win& b) {
  long n = a.size();
  long prec = n ? a.m_.at(0, 0).precision() : BigReal::kDefaultPrecision;
  BigReal best(prec);
  bool any = false;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (a.entry_valid(i, j) && b.entry_valid(i, j)) {
        best = max(best, (a.m_.at(i, j) - b.m_.at(i, j)).abs());
        any = true;
      }
  if (!any) throw GuardError("window empty: truncation too small for this check");
  return best;
}

BigReal Win::max_rel_diff(const Win& a, const Win& b) {
  long n = a.size();
  long prec = n ? a.m_.at(0, 0).precision() : BigReal::kDefaultPrecision;
  BigReal best(prec);
  BigReal one(1, prec);
  bool any = false;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (a.entry_valid(i, j) && b.entry_valid(i, j)) {
        BigReal scale = max(one, max(a.m_.at(i, j).abs(), b.m_.at(i, j).abs()));
        best = max(best, (a.m_.at(i, j) - b.m_.at(i, j)).abs() / scale);
        any = true;
      }
  if (!any) throw GuardError("window empty: truncation too small for this check");
  return best;
}

Win commutator(const Win& a, const Win& b) { return a * b - b * a; }

Mat<BigReal> shift_up(std::size_t n, long prec) {
  Mat<BigReal> m(n, n, BigReal(prec));
  for (std::size_t i = 0; i + 1 < n; ++i) m.at(i, i + 1) = BigReal(1, prec);
  return m;
}

Mat<BigReal> parity_projector(std::size_t n, int a, long prec) {
  Mat<BigReal> m(n, n, BigReal(prec));
  for (std::size_t i = (a == 1 ? 0u : 1u); i < n; i += 2) m.at(i, i) = BigReal(1, prec);
  return m;
}

Mat<BigReal> shift_up_parity(std::size_t n, int a, long prec) {
  Mat<BigReal> m(n, n, BigReal(prec));
  for (std::size_t i = 0; i + 2 < n; ++i)
    if (static_cast<int>(i % 2) == (a == 1 ? 0 : 1)) m.at(i, i + 2) = BigReal(1, prec);
  return m;
}

namespace {
BigReal binom(std::size_t n, std::size_t k, long prec) {
  if (k > n) return BigReal(prec);
  BigReal acc(1, prec);
  for (std::size_t i = 0; i < k; ++i)
    acc = acc * BigReal(static_cast<long>(n - i), prec) / BigReal(static_cast<long>(i + 1), prec);
  return acc;
}
}  // namespace

Mat<BigReal> pascal(std::size_t n, long prec) {
  Mat<BigReal> m(n, n, BigReal(prec));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m.at(i, j) = binom(i, j, prec);
  return m;
}

Mat<BigReal> pascal_inverse(std::size_t n, long prec) {
  Mat<BigReal> m(n, n, BigReal(prec));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      BigReal v = binom(i, j, prec);
      m.at(i, j) = ((i + j) % 2 == 0) ? v : -v;
    }
  return m;
}

Mat<BigReal> pascal_partial(std::size_t n, int a, int sign, long prec) {
  Mat<BigReal> m(n, n, BigReal(prec));
  for (std::size_t nn = 0;; ++nn) {
    std::size_t row = 2 * nn + (a == 1 ? 0 : 1);
    if (row >= n) break;
    for (std::size_t mm = 0; mm <= nn; ++mm) {
      std::size_t col = 2 * mm + (a == 1 ? 0 : 1);
      BigReal v = binom(nn, mm, prec);
      bool negate = sign < 0 && ((nn + mm) % 2 == 1);
      m.at(row, col) = negate ? -v : v;
    }
  }
  return m;
}

Win win_shift_up(std::size_t n, long prec) { return Win::exact(shift_up(n, prec), 0, 1); }
Win win_parity(std::size_t n, int a, long prec) { return Win::diagonal(parity_projector(n, a, prec)); }
Win win_shift_up_parity(std::size_t n, int a, long prec) {
  return Win::exact(shift_up_parity(n, a, prec), 0, 2);
}
Win win_pascal(std::size_t n, long prec) { return Win::lower(pascal(n, prec)); }
Win win_pascal_inverse(std::size_t n, long prec) { return Win::lower(pascal_inverse(n, prec)); }
Win win_pascal_partial(std::size_t n, int a, int sign, long prec) {
  return Win::lower(pascal_partial(n, a, sign, prec));
}
Win win_identity(std::size_t n, long prec) {
  return Win::diagonal(Mat<BigReal>::identity(n, prec));
}

}  // namespace stepline
