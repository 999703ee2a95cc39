#include "doctest.h"
#include "stepline/tau.hpp"
#include "test_helpers.hpp"

using namespace stepline;
using namespace stepline::testing;

namespace {
constexpr long P = 256;
const BigReal kEps = tenpow(-60, P);

std::vector<WeightFamily> fixtures() {
  return {fx_charlier(P), fx_meixner2(P), fx_gen_charlier(P), fx_gen_meixner2(P)};
}

// Independent oracle for theta-derivatives of det: multilinearity column
// bumps, theta rho_k = rho_{k+1} columnwise, evaluated with pivoted
// elimination over plain reals.
BigReal bump_det(MomentTable& t, std::size_t n, const std::vector<std::size_t>& bumps) {
  Mat<BigReal> m(n, n, BigReal(t.precision()));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      int a = static_cast<int>(c % 2) + 1;
      m.at(r, c) = t.scalar(a, r + c / 2 + bumps[c]);
    }
  return det_pivoted(m);
}

BigReal theta_det_oracle(MomentTable& t, std::size_t n, int order) {
  // theta^k det = sum over bump multisets, with multinomial weights
  std::vector<std::size_t> bumps(n, 0);
  BigReal acc(t.precision());
  std::function<void(std::size_t, int, long)> rec = [&](std::size_t col, int left, long coeff) {
    if (left == 0) {
      acc += BigReal(coeff, t.precision()) * bump_det(t, n, bumps);
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
  return acc;
}
}  // namespace

TEST_CASE("moment matrix: entries and bi-Hankel structure") {
  auto f = fx_charlier(P);
  MomentTable t(f);
  auto m1 = moment_matrix(t, 1);
  check_close(m1.at(0, 0).value(), f.eta[0].exp(), kEps, "rho0 entry");

  auto m3 = moment_matrix(t, 3);
  check_close(m3.at(1, 0).value(), t.scalar(1, 1), kEps, "row1[0]");
  check_close(m3.at(1, 1).value(), t.scalar(2, 1), kEps, "row1[1]");
  check_close(m3.at(1, 2).value(), t.scalar(1, 2), kEps, "row1[2]");

  auto fgm = fx_gen_meixner2(P);
  MomentTable tg(fgm);
  auto m5 = moment_matrix(tg, 5);
  CHECK(m5.at(2, 0).value() == m5.at(1, 2).value());
  CHECK(m5.at(1, 2).value() == m5.at(0, 4).value());
  for (std::size_t r = 0; r + 1 < 5; ++r)
    for (std::size_t c = 0; c + 2 < 5; ++c)
      CHECK(m5.at(r + 1, c).value() == m5.at(r, c + 2).value());
}

TEST_CASE("tau: empty determinant and closed 2x2 form") {
  Lab lab(fx_charlier(P));
  CHECK(lab.tau(0) == BigReal(1, P));

  BigReal e1 = BigReal::ratio(1, 2, P), e2 = BigReal::ratio(1, 3, P);
  BigReal want = (e2 - e1) * (e1 + e2).exp();
  check_close(lab.tau(2), want, kEps, "tau2");

  // theta slot: tau2 * (eta1 + eta2 + 1)
  Jet3 t2 = lab.tau_jet(2);
  check_close(t2.theta(1), want * (e1 + e2 + BigReal(1, P)), kEps, "theta tau2");
}

TEST_CASE("tau equals the pivoted determinant route") {
  for (auto& f : fixtures()) {
    Lab lab(f);
    MomentTable t(f);
    for (std::size_t n = 1; n <= 6; ++n) {
      BigReal direct = det_pivoted(jet_value(moment_matrix(t, n)));
      check_close(lab.tau(n), direct, kEps, "tau vs pivoted det");
    }
  }
}

TEST_CASE("associated tau: lemma tau^1 = theta tau and explicit value") {
  Lab lab(fx_charlier(P));
  BigReal e1 = BigReal::ratio(1, 2, P);
  check_close(lab.tau_assoc(1, 1), e1 * e1.exp(), kEps, "tau^1_1");

  for (auto& f : fixtures()) {
    Lab l(f);
    for (std::size_t n = 1; n <= 6; ++n)
      check_close(l.tau_assoc(n, 1), l.tau_jet(n).theta(1), kEps, "tau^1 = theta tau");
  }
  CHECK_THROWS_AS(lab.tau_assoc(3, 4), std::out_of_range);
  CHECK_THROWS_AS(lab.tau_assoc(3, 0), std::out_of_range);
  CHECK(lab.tau_assoc_or_zero(0, 2).exactly_zero());
  CHECK(lab.tau_assoc_or_zero(0, 1).exactly_zero());
}

TEST_CASE("wronskian route agrees with the minor route") {
  Lab labc(fx_charlier(P));
  check_close(labc.wronskian_tau(1), BigReal::ratio(1, 2, P).exp(), kEps, "W1");
  BigReal e1 = BigReal::ratio(1, 2, P), e2 = BigReal::ratio(1, 3, P);
  check_close(labc.wronskian_tau(2), (e2 - e1) * (e1 + e2).exp(), kEps, "W2");

  BigReal tight = tenpow(-55, P);
  for (auto& f : fixtures()) {
    Lab lab(f);
    for (std::size_t n = 0; n <= 8; ++n) {
      BigReal w = lab.wronskian_tau(n), m = lab.tau(n);
      BigReal rel = (w - m).abs() / max(BigReal(1, P), max(w.abs(), m.abs()));
      INFO("n=" << n << " rel=" << rel.to_string(8));
      CHECK(rel <= tight);
    }
  }
}

TEST_CASE("H_n = tau_{n+1}/tau_n and p^1_n = -theta log tau_n") {
  for (auto& f : fixtures()) {
    Lab lab(f);
    for (std::size_t n = 0; n <= 7; ++n)
      check_close(lab.h(n), lab.tau(n + 1) / lab.tau(n), kEps, "H ratio");
    for (std::size_t n = 1; n <= 7; ++n) {
      BigReal p1 = -lab.tau_assoc(n, 1) / lab.tau(n);
      check_close(p1, -lab.tau_jet(n).dlog(1), kEps, "p1 vs jet dlog");
    }
  }
}

TEST_CASE("jet derivative of det equals column-bump sums") {
  for (auto& f : fixtures()) {
    Lab lab(f);
    MomentTable t(f);
    for (std::size_t n = 1; n <= 5; ++n) {
      BigReal oracle = theta_det_oracle(t, n, 1);
      check_close(lab.tau_jet(n).theta(1), oracle, kEps, "first derivative");
    }
  }
}
