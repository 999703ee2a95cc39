#pragma once

#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include "stepline/bigreal.hpp"
#include "stepline/jet.hpp"

namespace stepline {

/// Row-major dense matrix over BigReal or Jet3.
template <class T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  static Mat identity(std::size_t n, long prec);

  Mat transposed() const {
    Mat out(cols_, rows_, data_.empty() ? T() : data_[0]);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
    return out;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> data_;
};

template <class T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b);
template <class T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b);
template <class T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b);

/// Scalar magnitude used for pivot decisions: |x| for reals, |value slot|
/// for jets.
inline BigReal pivot_magnitude(const BigReal& x) { return x.abs(); }
inline BigReal pivot_magnitude(const Jet3& x) { return x.value().abs(); }

/// Leading principal minors d_0..d_n of a square matrix, d_0 = 1, computed
/// by one pivot-free LDU sweep. Throws FactorizationBreakdown with the index
/// of the first minor below tolerance (row exchanges would break the minor
/// identification, so breakdown is an error, never repaired).
template <class T>
std::vector<T> leading_minors(const Mat<T>& m, const Tolerance& tol);

/// Gauss-Borel factorization M = S^-1 H S~^-T with S, S~ lower unitriangular
/// and H diagonal. Minors come from the same sweep, so H_k * d_k = d_{k+1}
/// holds exactly as computed.
template <class T>
struct GaussBorel {
  Mat<T> s;            // S
  Mat<T> s_inv;        // S^-1
  Mat<T> stilde;       // S~
  Mat<T> stilde_inv;   // S~^-1
  std::vector<T> h;    // diagonal of H
  std::vector<T> minors;
};

template <class T>
GaussBorel<T> gauss_borel(const Mat<T>& m, const Tolerance& tol);

/// Determinant by elimination with partial pivoting (used for row-surgery
/// determinants that need no minor bookkeeping).
template <class T>
T det_pivoted(Mat<T> m);

namespace detail {
inline BigReal scalar_zero(const BigReal&, long prec) { return BigReal(prec); }
inline Jet3 scalar_zero(const Jet3&, long prec) { return Jet3(prec); }
inline BigReal scalar_one(const BigReal&, long prec) { return BigReal(1, prec); }
inline Jet3 scalar_one(const Jet3&, long prec) { return Jet3::constant(BigReal(1, prec)); }
inline long scalar_prec(const BigReal& x) { return x.precision(); }
inline long scalar_prec(const Jet3& x) { return x.precision(); }
}  // namespace detail

template <class T>
Mat<T> Mat<T>::identity(std::size_t n, long prec) {
  T z = detail::scalar_zero(T(), prec);
  Mat out(n, n, z);
  for (std::size_t i = 0; i < n; ++i) out.at(i, i) = detail::scalar_one(z, prec);
  return out;
}

template <class T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Mat product shape mismatch");
  long prec = a.rows() && a.cols() ? detail::scalar_prec(a.at(0, 0)) : BigReal::kDefaultPrecision;
  T z = detail::scalar_zero(T(), prec);
  Mat<T> out(a.rows(), b.cols(), z);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a.at(i, k);
      if constexpr (std::is_same_v<T, BigReal>) {
        if (aik.exactly_zero()) continue;
      } else {
        if (aik.max_abs().exactly_zero()) continue;
      }
      for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

template <class T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("Mat sum shape mismatch");
  Mat<T> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) += b.at(i, j);
  return out;
}

template <class T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("Mat difference shape mismatch");
  Mat<T> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) -= b.at(i, j);
  return out;
}

template <class T>
std::vector<T> leading_minors(const Mat<T>& m, const Tolerance& tol) {
  return gauss_borel(m, tol).minors;
}

template <class T>
GaussBorel<T> gauss_borel(const Mat<T>& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("gauss_borel: matrix not square");
  const std::size_t n = m.rows();
  long prec = n ? detail::scalar_prec(m.at(0, 0)) : BigReal::kDefaultPrecision;
  T zero = detail::scalar_zero(T(), prec);
  T one = detail::scalar_one(zero, prec);

  BigReal scale(1, prec);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = max(scale, pivot_magnitude(m.at(i, j)));

  Mat<T> a = m;                       // working copy, reduced in place
  Mat<T> l = Mat<T>::identity(n, prec);  // unit lower multipliers
  Mat<T> u = Mat<T>::identity(n, prec);  // unit upper rows
  GaussBorel<T> out;
  out.minors.reserve(n + 1);
  out.minors.push_back(one);
  out.h.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    const T pivot = a.at(k, k);
    if (pivot_magnitude(pivot) <= tol.abs_floor + tol.rel_factor * scale) {
      throw FactorizationBreakdown(k + 1, "zero pivot: leading minor " + std::to_string(k + 1) +
                                              " vanishes within tolerance");
    }
    out.h.push_back(pivot);
    out.minors.push_back(out.minors.back() * pivot);
    for (std::size_t j = k + 1; j < n; ++j) u.at(k, j) = a.at(k, j) / pivot;
    for (std::size_t i = k + 1; i < n; ++i) l.at(i, k) = a.at(i, k) / pivot;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a.at(i, j) -= l.at(i, k) * (pivot * u.at(k, j));
  }

  // S = L^-1 and S~ = (U^-1)^T by unit-triangular substitution.
  Mat<T> s = Mat<T>::identity(n, prec);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j-- > 0;) {
      T acc = zero;
      for (std::size_t k = j; k < i; ++k) acc += l.at(i, k) * s.at(k, j);
      s.at(i, j) = -acc;
    }
  Mat<T> uinv = Mat<T>::identity(n, prec);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i-- > 0;) {
      T acc = zero;
      for (std::size_t k = i + 1; k <= j; ++k) acc += u.at(i, k) * uinv.at(k, j);
      uinv.at(i, j) = -acc;
    }
  out.s = std::move(s);
  out.s_inv = std::move(l);
  out.stilde = uinv.transposed();
  out.stilde_inv = u.transposed();
  return out;
}

template <class T>
T det_pivoted(Mat<T> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det_pivoted: matrix not square");
  const std::size_t n = m.rows();
  long prec = n ? detail::scalar_prec(m.at(0, 0)) : BigReal::kDefaultPrecision;
  T det = detail::scalar_one(T(), prec);
  bool negate = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    BigReal best_mag = pivot_magnitude(m.at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      BigReal mag = pivot_magnitude(m.at(i, k));
      if (mag > best_mag) { best = i; best_mag = mag; }
    }
    if (best_mag.exactly_zero()) return detail::scalar_zero(T(), prec);
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(best, j));
      negate = !negate;
    }
    const T pivot = m.at(k, k);
    det *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      T f = m.at(i, k) / pivot;
      for (std::size_t j = k + 1; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
    }
  }
  if (negate) det = -det;
  return det;
}

}  // namespace stepline
