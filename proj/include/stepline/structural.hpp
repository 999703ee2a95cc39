#pragma once

#include <string>

#include "stepline/matrix.hpp"

namespace stepline {

/// Truncation of a semi-infinite matrix together with the window on which
/// the truncation agrees with the infinite object. Row i is trustworthy for
/// i < valid_rows, column j for j < valid_cols; a product consumes validity
/// according to the band profile of its factors, so identity checks shrink
/// by the sum of the bandwidths involved and never read truncation edges.
class Win {
 public:
  Win() = default;
  Win(Mat<BigReal> m, long valid_rows, long valid_cols, long lower_bw, long upper_bw)
      : m_(std::move(m)), vr_(valid_rows), vc_(valid_cols), lbw_(lower_bw), ubw_(upper_bw) {}

  /// Exact truncation of an infinite matrix with the given band profile.
  static Win exact(Mat<BigReal> m, long lower_bw, long upper_bw) {
    long n = static_cast<long>(m.rows());
    return Win(std::move(m), n, n, std::min(lower_bw, n), std::min(upper_bw, n));
  }
  /// Exact truncation of a lower-triangular infinite matrix.
  static Win lower(Mat<BigReal> m) {
    long n = static_cast<long>(m.rows());
    return Win(std::move(m), n, n, n, 0);
  }
  static Win diagonal(Mat<BigReal> m) { return exact(std::move(m), 0, 0); }

  const Mat<BigReal>& mat() const { return m_; }
  long size() const { return static_cast<long>(m_.rows()); }
  long valid_rows() const { return vr_; }
  long valid_cols() const { return vc_; }
  long lower_bw() const { return lbw_; }
  long upper_bw() const { return ubw_; }

  bool entry_valid(long i, long j) const { return i < vr_ || j < vc_; }

  Win transposed() const { return Win(m_.transposed(), vc_, vr_, ubw_, lbw_); }

  /// Asserts a structural band profile known for the infinite object (e.g.
  /// the recursion matrix is tetradiagonal). Out-of-band entries are
  /// structural zeros, so the truncation garbage there is replaced by the
  /// true value 0; validity then extends across the band: a fully valid row
  /// window certifies columns up to the bandwidth and vice versa.
  Win banded(long lower_bw, long upper_bw) const;

  /// A matrix fully valid through either rows or columns is fully valid,
  /// period; normalize so window combination does not discard that.
  Win normalized() const {
    if (vr_ >= size() || vc_ >= size()) return Win(m_, size(), size(), lbw_, ubw_);
    return *this;
  }

  friend Win operator*(const Win& a, const Win& b);
  friend Win operator+(const Win& a, const Win& b);
  friend Win operator-(const Win& a, const Win& b);

  Win scaled(const BigReal& s) const;

  /// max |entry| over the valid window; throws GuardError when the window
  /// is empty (the identity cannot be checked at this truncation size).
  BigReal window_max_abs() const;

  /// max |A - B| over entries valid in both windows.
  static BigReal max_abs_diff(const Win& a, const Win& b);
  /// max over entries valid in both windows of |A-B| / max(1, |A|, |B|).
  static BigReal max_rel_diff(const Win& a, const Win& b);

 private:
  Mat<BigReal> m_;
  long vr_ = 0, vc_ = 0, lbw_ = 0, ubw_ = 0;
};

Win commutator(const Win& a, const Win& b);

/// Structural matrices of the step-line calculus, generated on demand at a
/// given truncation size; entries are exact.
Mat<BigReal> shift_up(std::size_t n, long prec);                       // Lambda
Mat<BigReal> parity_projector(std::size_t n, int a, long prec);        // I^(a)
Mat<BigReal> shift_up_parity(std::size_t n, int a, long prec);         // Lambda^(a) = Lambda^2 I^(a)
Mat<BigReal> pascal(std::size_t n, long prec);                         // L
Mat<BigReal> pascal_inverse(std::size_t n, long prec);                 // L^-1
Mat<BigReal> pascal_partial(std::size_t n, int a, int sign, long prec);// L^(+-(a))

Win win_shift_up(std::size_t n, long prec);
Win win_parity(std::size_t n, int a, long prec);
Win win_shift_up_parity(std::size_t n, int a, long prec);
Win win_pascal(std::size_t n, long prec);
Win win_pascal_inverse(std::size_t n, long prec);
Win win_pascal_partial(std::size_t n, int a, int sign, long prec);
Win win_identity(std::size_t n, long prec);

}  // namespace stepline
