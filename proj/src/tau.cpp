#include "stepline/tau.hpp"

namespace stepline {

Mat<Jet3> moment_matrix(MomentTable& table, std::size_t n) {
  long prec = table.precision();
  Mat<Jet3> m(n, n, Jet3(prec));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      int a = static_cast<int>(c % 2) + 1;
      std::size_t mm = c / 2;
      m.at(r, c) = table.jet(a, r + mm);
    }
  return m;
}

Mat<Jet3> moment_matrix_single(MomentTable& table, int a, std::size_t n) {
  long prec = table.precision();
  Mat<Jet3> m(n, n, Jet3(prec));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m.at(r, c) = table.jet(a, r + c);
  return m;
}

Mat<BigReal> jet_value(const Mat<Jet3>& m) {
  Mat<BigReal> out(m.rows(), m.cols(), BigReal());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j).value();
  return out;
}

Mat<BigReal> jet_theta(const Mat<Jet3>& m, int k) {
  Mat<BigReal> out(m.rows(), m.cols(), BigReal());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j).theta(k);
  return out;
}

namespace {
template <class T>
Mat<T> take(const Mat<T>& m, std::size_t n) {
  Mat<T> out(n, n, m.at(0, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = m.at(i, j);
  return out;
}
}  // namespace

Lab::Lab(WeightFamily family) : table_(std::move(family)) {}

const GaussBorel<Jet3>& Lab::fact(std::size_t n) {
  if (!fact_ || fact_size_ < n) {
    Mat<Jet3> m = moment_matrix(table_, n);
    Tolerance tol = default_tolerance(precision(), static_cast<long>(n));
    fact_ = std::make_unique<GaussBorel<Jet3>>(gauss_borel(m, tol));
    fact_size_ = n;
  }
  return *fact_;
}

Jet3 Lab::tau_jet(std::size_t n) {
  if (n == 0) return Jet3::constant(BigReal(1, precision()));
  return fact(n).minors[n];
}

BigReal Lab::tau(std::size_t n) { return tau_jet(n).value(); }

Jet3 Lab::tau_assoc_jet(std::size_t n, std::size_t j) {
  if (j < 1 || j > n) throw std::out_of_range("tau_assoc: need 1 <= j <= n");
  long prec = precision();
  Mat<Jet3> m(n, n, Jet3(prec));
  std::size_t drop = n - j;
  std::size_t out_row = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == drop) continue;
    for (std::size_t c = 0; c < n; ++c) {
      int a = static_cast<int>(c % 2) + 1;
      m.at(out_row, c) = table_.jet(a, r + c / 2);
    }
    ++out_row;
  }
  for (std::size_t c = 0; c < n; ++c) {
    int a = static_cast<int>(c % 2) + 1;
    m.at(n - 1, c) = table_.jet(a, n + c / 2);
  }
  return det_pivoted(m);
}

BigReal Lab::tau_assoc(std::size_t n, std::size_t j) { return tau_assoc_jet(n, j).value(); }

BigReal Lab::tau_assoc_or_zero(std::size_t n, long j) {
  if (j > static_cast<long>(n)) return BigReal(0, precision());
  return tau_assoc(n, static_cast<std::size_t>(j));
}

BigReal Lab::wronskian_tau(std::size_t n) {
  long prec = precision();
  if (n == 0) return BigReal(1, prec);
  Mat<BigReal> w(n, n, BigReal(prec));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      int a = static_cast<int>(c % 2) + 1;
      w.at(i, c) = table_.scalar(a, i + c / 2);  // theta^(i+m) of rho_0
    }
  return det_pivoted(w);
}

BigReal Lab::h(std::size_t k) { return h_jet(k).value(); }

Jet3 Lab::h_jet(std::size_t k) { return fact(k + 1).h[k]; }

Jet3 Lab::s_band(std::size_t band, std::size_t k) {
  const auto& f = fact(k + band + 1);
  return f.s.at(k + band, k);
}

Jet3 Lab::stilde_band(std::size_t band, std::size_t k) {
  const auto& f = fact(k + band + 1);
  return f.stilde.at(k + band, k);
}

Lab::Coeffs Lab::coeffs(std::size_t n_max) {
  std::size_t n = n_max + 2;
  const auto& f = fact(n);
  long prec = precision();
  Mat<Jet3> lam(n, n, Jet3(prec));
  for (std::size_t i = 0; i + 1 < n; ++i) lam.at(i, i + 1) = Jet3::constant(BigReal(1, prec));
  // the cached factorization may be larger than requested
  Mat<Jet3> t = take(f.s, n) * lam * take(f.s_inv, n);
  Coeffs out;
  Jet3 zero(prec);
  for (std::size_t k = 0; k <= n_max; ++k) {
    out.alpha.push_back(t.at(k, k));
    out.beta.push_back(k >= 1 ? t.at(k, k - 1) : zero);
    out.gamma.push_back(k >= 2 ? t.at(k, k - 2) : zero);
  }
  return out;
}

Win Lab::win_s(std::size_t n) { return Win::lower(jet_value(take(fact(n).s, n))); }
Win Lab::win_s_inv(std::size_t n) { return Win::lower(jet_value(take(fact(n).s_inv, n))); }
Win Lab::win_stilde(std::size_t n) { return Win::lower(jet_value(take(fact(n).stilde, n))); }
Win Lab::win_stilde_inv(std::size_t n) {
  return Win::lower(jet_value(take(fact(n).stilde_inv, n)));
}

Win Lab::win_h(std::size_t n) {
  long prec = precision();
  Mat<BigReal> m(n, n, BigReal(prec));
  for (std::size_t k = 0; k < n; ++k) m.at(k, k) = h(k);
  return Win::diagonal(std::move(m));
}

Win Lab::win_h_inv(std::size_t n) {
  long prec = precision();
  Mat<BigReal> m(n, n, BigReal(prec));
  BigReal one(1, prec);
  for (std::size_t k = 0; k < n; ++k) m.at(k, k) = one / h(k);
  return Win::diagonal(std::move(m));
}

Win Lab::win_t(std::size_t n) {
  Win s = win_s(n);
  Win sinv = win_s_inv(n);
  // tetradiagonal by the recursion structure
  return (s * win_shift_up(n, precision()) * sinv).banded(2, 1);
}

Lab& LabCache::get(const WeightFamily& f) {
  std::string key = f.cache_key();
  auto it = labs_.find(key);
  if (it == labs_.end()) it = labs_.emplace(key, std::make_unique<Lab>(f)).first;
  return *it->second;
}

}  // namespace stepline
