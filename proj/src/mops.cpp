#include "stepline/mops.hpp"

namespace stepline {

long PolynomialVector::degree(const Tolerance& tol) const {
  for (std::size_t i = coeff.size(); i-- > 0;)
    if (!tol.is_zero(coeff[i])) return static_cast<long>(i);
  return -1;
}

BigReal PolynomialVector::eval(const BigReal& x) const {
  if (coeff.empty()) return BigReal(0, x.precision());
  BigReal acc = coeff.back();
  for (std::size_t i = coeff.size() - 1; i-- > 0;) acc = acc * x + coeff[i];
  return acc;
}

PolynomialVector typeII(Lab& lab, std::size_t n) {
  const auto& f = lab.fact(n + 1);
  PolynomialVector p;
  p.role = PolynomialVector::Role::TypeII;
  p.coeff.reserve(n + 1);
  for (std::size_t m = 0; m <= n; ++m) p.coeff.push_back(f.s.at(n, m).value());
  return p;
}

PolynomialVector typeI(Lab& lab, int a, std::size_t n) {
  const auto& f = lab.fact(n + 1);
  long prec = lab.precision();
  BigReal hn = f.h[n].value();
  PolynomialVector p;
  p.role = a == 1 ? PolynomialVector::Role::TypeI1 : PolynomialVector::Role::TypeI2;
  // X^(1) carries x^p at slot 2p, X^(2) at slot 2p+1.
  for (std::size_t m = (a == 1 ? 0u : 1u); m <= n; m += 2)
    p.coeff.push_back(f.stilde.at(n, m).value() / hn);
  if (p.coeff.empty()) p.coeff.push_back(BigReal(0, prec));
  return p;
}

RecursionData recursion_coeffs(Lab& lab, std::size_t n_max) {
  auto jets = lab.coeffs(n_max);
  RecursionData out;
  for (std::size_t k = 0; k <= n_max; ++k) {
    out.alpha.push_back(jets.alpha[k].value());
    out.beta.push_back(jets.beta[k].value());
    out.gamma.push_back(jets.gamma[k].value());
  }
  return out;
}

namespace {
// sum_k p(k) w^(a)(k) k^m with the quiet-run stop rule.
BigReal lattice_sum(const WeightFamily& fam, int a, const PolynomialVector& p, std::size_t m) {
  long prec = fam.precision;
  const BigReal limit = fam.m_params(a) == fam.n_params() + 1 ? fam.eta[a - 1].abs()
                                                              : BigReal(0, prec);
  const BigReal r = series_ratio_threshold(limit, prec);
  const BigReal budget = BigReal::pow2(-(prec + 32), prec);
  BigReal w(1, prec), sum(0, prec), prev(0, prec);
  std::size_t quiet = 0;
  for (unsigned long k = 0; k < 200000; ++k) {
    BigReal kk(static_cast<long>(k), prec);
    BigReal kpow(1, prec);
    for (std::size_t i = 0; i < m; ++i) kpow *= kk;
    BigReal term = p.eval(kk) * w * kpow;
    sum += term;
    BigReal mag = term.abs();
    bool small = mag <= budget * max(sum.abs(), BigReal(1, prec));
    bool shrinking = k == 0 || prev.exactly_zero() || mag <= r * prev;
    quiet = (small && shrinking) ? quiet + 1 : 0;
    prev = mag;
    if (quiet >= 20) return sum;
    w *= fam.sigma_at(a, kk) / fam.theta_at(kk + BigReal(1, prec));
  }
  throw GuardError("orthogonality sum did not converge within term budget");
}

long type_i_degree_bound(int a, std::size_t n) {
  // ceil((n+2-a)/2) - 1
  long v = static_cast<long>(n) + 2 - a;
  return (v + 1) / 2 - 1;
}
}  // namespace

OrthoReport orthogonality_residuals(Lab& lab, std::size_t n) {
  const WeightFamily& fam = lab.family();
  long prec = lab.precision();
  OrthoReport rep{{}, {}, BigReal(0, prec)};
  if (n >= 1) {
    PolynomialVector b = typeII(lab, n);
    for (int a : {1, 2}) {
      long upto = type_i_degree_bound(a, n - 1);
      for (long m = 0; m <= upto; ++m) {
        BigReal res = lattice_sum(fam, a, b, static_cast<std::size_t>(m));
        rep.max_abs = max(rep.max_abs, res.abs());
        rep.type_ii.push_back({a, static_cast<std::size_t>(m), res});
      }
    }
    PolynomialVector a1 = typeI(lab, 1, n), a2 = typeI(lab, 2, n);
    long upto = static_cast<long>(n) - 1;  // deg B_{n-1}
    for (long m = 0; m <= upto; ++m) {
      BigReal res = lattice_sum(fam, 1, a1, static_cast<std::size_t>(m)) +
                    lattice_sum(fam, 2, a2, static_cast<std::size_t>(m));
      rep.max_abs = max(rep.max_abs, res.abs());
      rep.type_i.push_back({0, static_cast<std::size_t>(m), res});
    }
  }
  return rep;
}

BigReal recurrence_residual(Lab& lab, std::size_t n, const std::vector<BigReal>& z_samples) {
  long prec = lab.precision();
  RecursionData rc = recursion_coeffs(lab, n);
  PolynomialVector bn = typeII(lab, n), bn1 = typeII(lab, n + 1);
  PolynomialVector bm1, bm2;
  if (n >= 1) bm1 = typeII(lab, n - 1);
  if (n >= 2) bm2 = typeII(lab, n - 2);
  BigReal worst(0, prec);
  for (const auto& z : z_samples) {
    BigReal lhs = z * bn.eval(z);
    BigReal rhs = bn1.eval(z) + rc.alpha[n] * bn.eval(z);
    if (n >= 1) rhs += rc.beta[n] * bm1.eval(z);
    if (n >= 2) rhs += rc.gamma[n] * bm2.eval(z);
    worst = max(worst, (lhs - rhs).abs());
  }
  return worst;
}

PascalData dressed_pascal(Lab& lab, std::size_t n) {
  long prec = lab.precision();
  Win s = lab.win_s(n), sinv = lab.win_s_inv(n);
  Win st = lab.win_stilde(n), stinv = lab.win_stilde_inv(n);
  Win h = lab.win_h(n), hinv = lab.win_h_inv(n);
  PascalData out{
      s * win_pascal(n, prec) * sinv,
      s * win_pascal_inverse(n, prec) * sinv,
      {hinv * st * win_pascal_partial(n, 1, +1, prec) * stinv * h,
       hinv * st * win_pascal_partial(n, 2, +1, prec) * stinv * h},
      {hinv * st * win_pascal_partial(n, 1, -1, prec) * stinv * h,
       hinv * st * win_pascal_partial(n, 2, -1, prec) * stinv * h}};
  return out;
}

namespace {
std::vector<BigReal> poly_vector_values(Lab& lab, std::size_t count, const BigReal& z,
                                        int role_a) {
  std::vector<BigReal> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(role_a == 0 ? typeII(lab, k).eval(z) : typeI(lab, role_a, k).eval(z));
  return out;
}

BigReal apply_residual(const Win& op, const std::vector<BigReal>& in,
                       const std::vector<BigReal>& want, long rows) {
  long prec = in.empty() ? BigReal::kDefaultPrecision : in[0].precision();
  BigReal worst(0, prec);
  for (long i = 0; i < rows && i < op.valid_rows(); ++i) {
    BigReal acc(0, prec);
    for (std::size_t j = 0; j < in.size(); ++j) acc += op.mat().at(i, j) * in[j];
    worst = max(worst, (acc - want[static_cast<std::size_t>(i)]).abs());
  }
  return worst;
}
}  // namespace

PascalShiftReport pascal_shift_residuals(Lab& lab, std::size_t n, const BigReal& z) {
  long prec = lab.precision();
  BigReal one(1, prec);
  PascalData pd = dressed_pascal(lab, n);
  auto b_at = poly_vector_values(lab, n, z, 0);
  auto b_up = poly_vector_values(lab, n, z + one, 0);
  auto b_dn = poly_vector_values(lab, n, z - one, 0);
  PascalShiftReport rep{BigReal(0, prec), BigReal(0, prec),
                        {BigReal(0, prec), BigReal(0, prec)},
                        {BigReal(0, prec), BigReal(0, prec)}, BigReal(0, prec)};
  long rows = static_cast<long>(n);
  rep.type_ii_shift = apply_residual(pd.pi, b_at, b_up, rows);
  rep.type_ii_unshift = apply_residual(pd.pi_inv, b_at, b_dn, rows);
  for (int a : {1, 2}) {
    auto a_at = poly_vector_values(lab, n, z, a);
    auto a_up = poly_vector_values(lab, n, z + one, a);
    auto a_dn = poly_vector_values(lab, n, z - one, a);
    rep.type_i_shift[a - 1] = apply_residual(pd.pi_a[a - 1], a_at, a_up, rows);
    rep.type_i_unshift[a - 1] = apply_residual(pd.pi_a_inv[a - 1], a_at, a_dn, rows);
  }
  for (int a : {1, 2}) {
    Win prod = win_pascal_partial(n, a, +1, prec) * win_pascal_partial(n, a, -1, prec);
    Win diff = prod - win_parity(n, a, prec);
    rep.partial_inverse = max(rep.partial_inverse, diff.window_max_abs());
  }
  return rep;
}

}  // namespace stepline
