#include "stepline/toda.hpp"

#include <functional>

namespace stepline {

namespace {
Mat<Jet3> lift(const Mat<BigReal>& m) {
  Mat<Jet3> out(m.rows(), m.cols(), Jet3(m.rows() ? m.at(0, 0).precision() : 64));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = Jet3::constant(m.at(i, j));
  return out;
}

// Exact truncation of theta(Lambda): computed at padded size so the product
// corruption stays outside the kept block.
Mat<BigReal> theta_lambda(const WeightFamily& f, std::size_t n) {
  long prec = f.precision;
  std::size_t big = n + f.c.size() + 2;
  Mat<BigReal> acc = shift_up(big, prec);
  for (const auto& cj : f.c) {
    Mat<BigReal> factor = shift_up(big, prec);
    for (std::size_t i = 0; i < big; ++i) factor.at(i, i) = cj - BigReal(1, prec);
    acc = acc * factor;
  }
  Mat<BigReal> out(n, n, BigReal(prec));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = acc.at(i, j);
  return out;
}

Mat<Jet3> corner(const Mat<Jet3>& m, std::size_t n, long prec) {
  Mat<Jet3> out(n, n, Jet3(prec));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = m.at(i, j);
  return out;
}

Mat<Jet3> t_jets(Lab& lab, std::size_t n) {
  const auto& f = lab.fact(n);
  long prec = lab.precision();
  Mat<Jet3> lam(n, n, Jet3(prec));
  for (std::size_t i = 0; i + 1 < n; ++i) lam.at(i, i + 1) = Jet3::constant(BigReal(1, prec));
  return corner(f.s, n, prec) * lam * corner(f.s_inv, n, prec);
}

Mat<Jet3> psi_jets(Lab& lab, std::size_t n) {
  const auto& f = lab.fact(n);
  long prec = lab.precision();
  Mat<Jet3> linv = lift(pascal_inverse(n, prec));
  Mat<Jet3> th = lift(theta_lambda(lab.family(), n));
  return corner(f.s, n, prec) * linv * th * corner(f.s_inv, n, prec);
}
}  // namespace

ThetaFlow theta_flow(Lab& lab, std::size_t n) {
  long prec = lab.precision();
  lab.fact(n + 1);  // recursion data below needs one extra row; grow first so
                    // the reference stays put
  const auto& f = lab.fact(n);
  long ln = static_cast<long>(n);

  auto slot_mat = [&](const Mat<Jet3>& src, int i, int j) {
    Mat<BigReal> out(n, n, BigReal(prec));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out.at(r, c) = src.at(r, c).d(i, j);
    return out;
  };
  auto take_val = [&](const Mat<Jet3>& src) {
    Mat<BigReal> out(n, n, BigReal(prec));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out.at(r, c) = src.at(r, c).value();
    return out;
  };

  Win s_val = Win::lower(take_val(f.s));
  Win st_val = Win::lower(take_val(f.stilde));
  Win s_inv = Win::lower(take_val(f.s_inv));
  Win st_inv = Win::lower(take_val(f.stilde_inv));
  Win h = lab.win_h(n), h_inv = lab.win_h_inv(n);

  ThetaFlow out{
      {Win::lower(slot_mat(f.s, 1, 0)) * s_inv, Win::lower(slot_mat(f.s, 0, 1)) * s_inv},
      Win(Mat<BigReal>(0, 0, BigReal(prec)), 0, 0, 0, 0),
      {Win::lower(slot_mat(f.stilde, 1, 0)) * st_inv,
       Win::lower(slot_mat(f.stilde, 0, 1)) * st_inv},
      Win(Mat<BigReal>(0, 0, BigReal(prec)), 0, 0, 0, 0),
      Win(Mat<BigReal>(0, 0, BigReal(prec)), 0, 0, 0, 0),
      BigReal(0, prec), BigReal(0, prec), BigReal(0, prec),
      {BigReal(0, prec), BigReal(0, prec)}, BigReal(0, prec), BigReal(0, prec)};
  out.phi_sum = out.phi[0] + out.phi[1];
  out.phitilde_sum = out.phitilde[0] + out.phitilde[1];

  // mu = (theta H^-1) H + H^-1 phitilde H = -alpha + H^-1 phitilde H
  auto rc = lab.coeffs(n - 1);
  Mat<BigReal> neg_alpha(n, n, BigReal(prec));
  for (std::size_t k = 0; k < n; ++k) neg_alpha.at(k, k) = -rc.alpha[k].value();
  out.mu = Win::diagonal(std::move(neg_alpha)) + h_inv * out.phitilde_sum * h;

  // (theta H) H^-1 = alpha
  for (std::size_t k = 0; k + 1 < n; ++k) {
    BigReal lhs = lab.h_jet(k).theta(1) / lab.h(k);
    out.dprin = max(out.dprin, (lhs - rc.alpha[k].value()).abs());
  }

  // -phi carries beta on the first subdiagonal, gamma on the second,
  // nothing deeper
  for (long i = 0; i < out.phi_sum.valid_rows(); ++i)
    for (long j = 0; j <= i; ++j) {
      BigReal got = -out.phi_sum.mat().at(i, j);
      BigReal want(0, prec);
      if (j == i - 1) want = rc.beta[static_cast<std::size_t>(i)].value();
      if (j == i - 2) want = rc.gamma[static_cast<std::size_t>(i)].value();
      out.sub = max(out.sub, (got - want).abs());
    }

  // -phitilde has the single subdiagonal H_{k+1}/H_k
  for (long i = 0; i < out.phitilde_sum.valid_rows(); ++i)
    for (long j = 0; j <= i; ++j) {
      BigReal got = -out.phitilde_sum.mat().at(i, j);
      BigReal want(0, prec);
      if (j == i - 1) want = lab.h(static_cast<std::size_t>(i)) / lab.h(static_cast<std::size_t>(i - 1));
      out.super = max(out.super, (got - want).abs());
    }

  // theta^(a) H - phi^(a) H - H phitilde^(a)T = T^(a)T H
  for (int a : {1, 2}) {
    Mat<BigReal> th_h(n, n, BigReal(prec));
    for (std::size_t k = 0; k < n; ++k)
      th_h.at(k, k) = a == 1 ? lab.h_jet(k).d(1, 0) : lab.h_jet(k).d(0, 1);
    Win lhs = Win::diagonal(std::move(th_h)) - out.phi[a - 1] * h -
              h * out.phitilde[a - 1].transposed();
    Win t_a = h_inv * st_val * win_shift_up_parity(n, a, prec) * st_inv * h;
    Win rhs = t_a.transposed() * h;
    out.satow[a - 1] = Win::max_abs_diff(lhs, rhs);
  }

  // band flow equations for S and S~
  Jet3 zero(prec);
  auto sj = [&](long band, long k) -> Jet3 {
    if (band < 0 || k < 0) return zero;
    if (band == 0) return Jet3::constant(BigReal(1, prec));
    return lab.s_band(static_cast<std::size_t>(band), static_cast<std::size_t>(k));
  };
  auto stj = [&](long band, long k) -> Jet3 {
    if (band < 0 || k < 0) return zero;
    if (band == 0) return Jet3::constant(BigReal(1, prec));
    return lab.stilde_band(static_cast<std::size_t>(band), static_cast<std::size_t>(k));
  };
  auto rc_beta = [&](long i) {
    return i >= 1 && i < ln ? rc.beta[static_cast<std::size_t>(i)].value() : BigReal(0, prec);
  };
  auto rc_gamma = [&](long i) {
    return i >= 2 && i < ln ? rc.gamma[static_cast<std::size_t>(i)].value() : BigReal(0, prec);
  };
  for (long band = 1; band <= 3; ++band)
    for (long k = 0; k + band + 1 < ln - 1; ++k) {
      BigReal lhs = sj(band, k).theta(1);
      BigReal rhs = -(sj(band - 2, k).value() * rc_gamma(k + band) +
                      sj(band - 1, k).value() * rc_beta(k + band));
      out.s_bands = max(out.s_bands, (lhs - rhs).abs());
      BigReal lhs2 = stj(band, k).theta(1);
      BigReal rhs2 = -lab.h(static_cast<std::size_t>(k + band)) /
                     lab.h(static_cast<std::size_t>(k + band - 1)) * stj(band - 1, k).value();
      out.stilde_bands = max(out.stilde_bands, (lhs2 - rhs2).abs());
    }
  return out;
}

std::vector<TodaPair> toda2_residual(Lab& lab, std::size_t n_max) {
  long prec = lab.precision();
  lab.fact(n_max + 4);
  std::vector<TodaPair> out;
  BigReal two(2, prec);
  for (std::size_t n = 0; n <= n_max; ++n) {
    Jet3 h = lab.h_jet(n);
    Jet3 f = lab.s_band(1, n);
    BigReal f_prev = n == 0 ? BigReal(0, prec) : lab.s_band(1, n - 1).value();
    BigReal first = h.theta(1) / h.value() - (f_prev - f.value());
    BigReal second(0, prec);
    if (n >= 1) {
      BigReal f_next = lab.s_band(1, n + 1).value();
      BigReal lhs = f.theta(2) - (two * f.value() - f_next - f_prev) * f.theta(1);
      BigReal rhs = lab.h(n + 1) / lab.h(n - 1) - lab.h(n + 2) / lab.h(n);
      second = lhs - rhs;
    }
    out.push_back({first.abs(), second.abs()});
  }
  return out;
}

BigReal tau_pde_residual(Lab& lab, std::size_t n) {
  if (n < 1) throw std::out_of_range("tau_pde_residual needs n >= 1");
  long prec = lab.precision();
  lab.fact(n + 3);
  Jet3 t0 = lab.tau_jet(n - 1), t1 = lab.tau_jet(n), t2 = lab.tau_jet(n + 1),
       t3 = lab.tau_jet(n + 2), t4 = lab.tau_jet(n + 3);
  // The third term carries the sum of the two neighbour log-derivatives
  // (a difference convention circulates but does not close numerically).
  BigReal lhs = t2.theta(3) -
                (t3.theta(1) / t3.value() + t2.theta(1) / t2.value() +
                 t1.theta(1) / t1.value()) *
                    t2.theta(2) +
                t2.theta(1) * t2.theta(1) / t2.value() *
                    (t3.theta(1) / t3.value() + t1.theta(1) / t1.value());
  BigReal rhs = t4.value() * t1.value() / t3.value() - t3.value() * t0.value() / t1.value();
  BigReal scale = max(BigReal(1, prec), max(lhs.abs(), rhs.abs()));
  return (lhs - rhs).abs() / scale;
}

BigReal single_weight_toda_residual(MomentTable& table, int a, std::size_t n) {
  long prec = table.precision();
  Tolerance tol = default_tolerance(prec, static_cast<long>(n) + 2);
  Mat<Jet3> m = moment_matrix_single(table, a, n + 2);
  auto gb = gauss_borel(m, tol);
  Jet3 t1 = gb.minors[n], t2 = gb.minors[n + 1], t3 = gb.minors[n + 2];
  BigReal lhs = t2.theta(2) - t2.theta(1) * t2.theta(1) / t2.value();
  BigReal rhs = t3.value() * t1.value() / t2.value();
  BigReal scale = max(BigReal(1, prec), max(lhs.abs(), rhs.abs()));
  return (lhs - rhs).abs() / scale;
}

std::vector<AbcTriple> abc_toda_residual(Lab& lab, std::size_t n_max) {
  long prec = lab.precision();
  auto rc = lab.coeffs(n_max + 1);
  std::vector<AbcTriple> out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    BigReal ra = rc.alpha[n].theta(1) - (rc.beta[n + 1].value() - rc.beta[n].value());
    BigReal rb(0, prec), rg(0, prec);
    if (n >= 1)
      rb = rc.beta[n].theta(1) -
           (rc.gamma[n + 1].value() - rc.gamma[n].value() +
            rc.beta[n].value() * (rc.alpha[n].value() - rc.alpha[n - 1].value()));
    if (n >= 2)
      rg = rc.gamma[n].theta(1) -
           rc.gamma[n].value() * (rc.alpha[n].value() - rc.alpha[n - 2].value());
    out.push_back({ra.abs(), rb.abs(), rg.abs()});
  }
  return out;
}

LaxReport lax_residual(Lab& lab, std::size_t n) {
  long prec = lab.precision();
  Mat<Jet3> t = t_jets(lab, n);
  long vr = static_cast<long>(n) - 1;
  Win t_val = Win(jet_value(t), vr, 0, static_cast<long>(n), 1).banded(2, 1);
  Win t_dot = Win(jet_theta(t, 1), vr, 0, static_cast<long>(n), 1).banded(2, 1);

  auto rc = lab.coeffs(n - 1);
  Mat<BigReal> alpha(n, n, BigReal(prec));
  for (std::size_t k = 0; k < n; ++k) alpha.at(k, k) = rc.alpha[k].value();
  Win t_plus = Win::diagonal(std::move(alpha)) + win_shift_up(n, prec);
  Win t_minus = t_val - t_plus;  // (L^T)^2 gamma + L^T beta

  LaxReport rep{BigReal(0, prec), BigReal(0, prec)};
  rep.lax = Win::max_abs_diff(t_dot, commutator(t_plus, t_val));
  rep.splitting =
      Win::max_abs_diff(commutator(t_plus, t_val), commutator(t_minus, t_val).scaled(BigReal(-1, prec)));
  return rep;
}

CompatIIReport compat_II_residual(Lab& lab, std::size_t n) {
  long prec = lab.precision();
  long n_theta = lab.family().theta_degree();
  long two_m = 2 * lab.family().sigma_degree();
  Mat<Jet3> psi = psi_jets(lab, n);
  long vr = static_cast<long>(n) - n_theta;
  Win psi_val = Win(jet_value(psi), vr, 0, static_cast<long>(n), n_theta);
  Win psi_dot = Win(jet_theta(psi, 1), vr, 0, static_cast<long>(n), n_theta);

  ThetaFlow flow = theta_flow(lab, n);
  CompatIIReport rep{BigReal(0, prec), BigReal(0, prec), BigReal(0, prec)};
  rep.direct = Win::max_abs_diff(psi_dot, commutator(flow.phi_sum, psi_val));

  Mat<Jet3> t = t_jets(lab, n);
  Win t_val = Win(jet_value(t), static_cast<long>(n) - 1, 0, static_cast<long>(n), 1).banded(2, 1);
  auto rc = lab.coeffs(n - 1);
  Mat<BigReal> alpha(n, n, BigReal(prec));
  for (std::size_t k = 0; k < n; ++k) alpha.at(k, k) = rc.alpha[k].value();
  Win t_minus = t_val - Win::diagonal(std::move(alpha)) - win_shift_up(n, prec);
  rep.via_t_minus = Win::max_abs_diff(psi_dot, commutator(psi_val, t_minus));

  Win psi_t = psi_val.banded(two_m, n_theta).transposed();
  Win psi_t_dot = psi_dot.banded(two_m, n_theta).transposed();
  rep.transposed =
      Win::max_abs_diff(psi_t_dot, psi_t + commutator(flow.mu, psi_t));
  return rep;
}

BigReal tau_derivative_crosscheck(Lab& lab, std::size_t n, int order) {
  long prec = lab.precision();
  MomentTable& t = lab.table();
  std::vector<std::size_t> bumps(n, 0);
  BigReal acc(prec);
  std::function<void(std::size_t, int, long)> rec = [&](std::size_t col, int left, long coeff) {
    if (left == 0) {
      Mat<BigReal> m(n, n, BigReal(prec));
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          int a = static_cast<int>(c % 2) + 1;
          m.at(r, c) = t.scalar(a, r + c / 2 + bumps[c]);
        }
      acc += BigReal(coeff, prec) * det_pivoted(m);
      return;
    }
    if (col == n) return;
    long binom = 1;
    for (int take = 0; take <= left; ++take) {
      bumps[col] = static_cast<std::size_t>(take);
      rec(col + 1, left - take, coeff * binom);
      binom = binom * (left - take) / (take + 1);
    }
    bumps[col] = 0;
  };
  rec(0, order, 1);
  BigReal jet = lab.tau_jet(n).theta(order);
  BigReal scale = max(BigReal(1, prec), max(jet.abs(), acc.abs()));
  return (jet - acc).abs() / scale;
}

}  // namespace stepline
