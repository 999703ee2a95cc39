#include "doctest.h"
#include "stepline/mops.hpp"
#include "test_helpers.hpp"

using namespace stepline;
using namespace stepline::testing;

namespace {
constexpr long P = 256;
const BigReal kEps = tenpow(-55, P);

std::vector<WeightFamily> fixtures() {
  return {fx_charlier(P), fx_meixner2(P), fx_gen_charlier(P), fx_gen_meixner2(P)};
}

// Bordered-determinant oracle for type I polynomials: expand along the last
// row of the (n+1)x(n+1) bordered moment matrix and divide by tau_{n+1}.
PolynomialVector type_i_oracle(Lab& lab, int a, std::size_t n) {
  MomentTable& t = lab.table();
  long prec = lab.precision();
  BigReal tau_n1 = lab.tau(n + 1);
  PolynomialVector p;
  p.role = a == 1 ? PolynomialVector::Role::TypeI1 : PolynomialVector::Role::TypeI2;
  for (std::size_t m = (a == 1 ? 0u : 1u); m <= n; m += 2) {
    // cofactor of slot m in the last row: delete column m from the n x (n+1)
    // moment block
    Mat<BigReal> sub(n, n, BigReal(prec));
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c <= n; ++c) {
        if (c == m) continue;
        int aa = static_cast<int>(c % 2) + 1;
        sub.at(r, cc++) = t.scalar(aa, r + c / 2);
      }
    }
    BigReal minor = n == 0 ? BigReal(1, prec) : det_pivoted(sub);
    BigReal cof = ((n + m) % 2 == 0) ? minor : -minor;
    p.coeff.push_back(cof / tau_n1);
  }
  if (p.coeff.empty()) p.coeff.push_back(BigReal(0, prec));
  return p;
}
}  // namespace

TEST_CASE("type II basics") {
  Lab lab(fx_charlier(P));
  auto b0 = typeII(lab, 0);
  REQUIRE(b0.coeff.size() == 1);
  CHECK(b0.coeff[0] == BigReal(1, P));

  auto b1 = typeII(lab, 1);
  check_close(b1.coeff[0], BigReal::ratio(-1, 2, P), kEps, "B1 constant term");
  CHECK(b1.coeff[1] == BigReal(1, P));

  for (auto& f : fixtures()) {
    Lab l(f);
    auto b5 = typeII(l, 5);
    CHECK(b5.coeff[5] == BigReal(1, P));  // monic
  }
}

TEST_CASE("type II coefficients against associated taus") {
  for (auto& f : fixtures()) {
    Lab lab(f);
    for (std::size_t n = 1; n <= 6; ++n) {
      auto b = typeII(lab, n);
      for (std::size_t j = 1; j <= n; ++j) {
        BigReal want = lab.tau_assoc(n, j) / lab.tau(n);
        if (j % 2 == 1) want = -want;
        check_close(b.coeff[n - j], want, kEps, "p^j_n");
      }
    }
  }
}

TEST_CASE("type I values and degrees") {
  Lab lab(fx_charlier(P));
  auto a10 = typeI(lab, 1, 0);
  check_close(a10.coeff[0], BigReal(1, P) / BigReal::ratio(1, 2, P).exp(), kEps, "A1_0");
  auto a20 = typeI(lab, 2, 0);
  CHECK(a20.coeff[0].exactly_zero());

  Tolerance tol = default_tolerance(P, 12);
  for (auto& f : fixtures()) {
    Lab l(f);
    auto a14 = typeI(l, 1, 4);
    auto a24 = typeI(l, 2, 4);
    CHECK(a14.degree(tol) == 2);
    CHECK(a24.degree(tol) == 1);
    for (std::size_t n = 0; n <= 10; ++n) {
      long want1 = (static_cast<long>(n) + 2) / 2 - 1;  // ceil((n+1)/2) - 1
      long want2 = (static_cast<long>(n) + 1) / 2 - 1;  // ceil(n/2) - 1
      CHECK(typeI(l, 1, n).degree(tol) == want1);
      if (n == 0) {
        CHECK(typeI(l, 2, n).degree(tol) == -1);  // A^(2)_0 = 0
      } else {
        CHECK(typeI(l, 2, n).degree(tol) == want2);
      }
      CHECK(typeII(l, n).degree(tol) == static_cast<long>(n));
    }
  }
}

TEST_CASE("type I against the bordered-determinant oracle") {
  for (auto& f : fixtures()) {
    Lab lab(f);
    for (std::size_t n = 0; n <= 5; ++n)
      for (int a : {1, 2}) {
        auto fast = typeI(lab, a, n);
        auto slow = type_i_oracle(lab, a, n);
        REQUIRE(fast.coeff.size() == slow.coeff.size());
        for (std::size_t i = 0; i < fast.coeff.size(); ++i)
          check_close(fast.coeff[i], slow.coeff[i], kEps, "type I coefficient");
      }
  }
}

TEST_CASE("recursion coefficients on fixtures") {
  Lab labc(fx_charlier(P));
  auto rc = recursion_coeffs(labc, 4);
  check_close(rc.gamma[2], BigReal::ratio(1, 12, P), kEps, "charlier gamma2");
  check_close(rc.alpha[0], BigReal::ratio(1, 2, P), kEps, "charlier alpha0");
  check_close(rc.alpha[1], BigReal::ratio(4, 3, P), kEps, "charlier alpha1");
  CHECK(rc.beta[0].exactly_zero());
  CHECK(rc.gamma[0].exactly_zero());
  CHECK(rc.gamma[1].exactly_zero());

  Lab labm(fx_meixner2(P));
  auto rm = recursion_coeffs(labm, 4);
  check_close(rm.beta[2], BigReal(5, P), kEps, "meixner2 beta2");
  check_close(rm.gamma[2], BigReal(3, P), kEps, "meixner2 gamma2");
}

TEST_CASE("recursion coefficients: tau expressions and triple agreement") {
  for (auto& f : fixtures()) {
    Lab lab(f);
    const std::size_t n_max = 8;
    auto rc = recursion_coeffs(lab, n_max);
    Jet3 zero(P);
    auto sband = [&](std::size_t band, long k) {
      return k < 0 ? zero : lab.s_band(band, static_cast<std::size_t>(k));
    };
    auto stband = [&](std::size_t band, long k) {
      return k < 0 ? zero : lab.stilde_band(band, static_cast<std::size_t>(k));
    };
    for (std::size_t n = 0; n <= n_max; ++n) {
      long ln = static_cast<long>(n);
      // alpha: theta log(tau_{n+1}/tau_n)
      BigReal a_tau = lab.tau_jet(n + 1).dlog(1) - (n == 0 ? BigReal(0, P) : lab.tau_jet(n).dlog(1));
      check_close(rc.alpha[n], a_tau, kEps, "alpha vs tau");
      // alpha: S-band form
      BigReal a_s = sband(1, ln - 1).value() - sband(1, ln).value();
      check_close(rc.alpha[n], a_s, kEps, "alpha vs S bands");
      // alpha: S~-band form
      BigReal a_st = stband(2, ln - 2).value() - stband(2, ln).value() +
                     stband(1, ln).value() * (stband(1, ln + 1).value() - stband(1, ln - 1).value());
      check_close(rc.alpha[n], a_st, kEps, "alpha vs S~ bands");
      if (n >= 1) {
        // beta: theta^2 log tau_n
        check_close(rc.beta[n], lab.tau_jet(n).dlog(2), kEps, "beta vs tau");
        // beta: H and S~ bands
        BigReal b_st = lab.h(n) / lab.h(n - 1) *
                       (stband(1, ln - 2).value() - stband(1, ln).value());
        check_close(rc.beta[n], b_st, kEps, "beta vs S~ bands");
        // beta: S bands
        BigReal b_s = sband(2, ln - 2).value() - sband(2, ln - 1).value() -
                      sband(1, ln - 1).value() * rc.alpha[n];
        check_close(rc.beta[n], b_s, kEps, "beta vs S bands");
      }
      if (n >= 2) {
        check_close(rc.gamma[n], lab.h(n) / lab.h(n - 2), kEps, "gamma vs H");
        check_close(rc.gamma[n] * lab.tau(n) * lab.tau(n - 1), lab.tau(n + 1) * lab.tau(n - 2),
                    kEps, "gamma tau identity");
      }
    }
  }
}

TEST_CASE("recurrence residual") {
  std::vector<BigReal> zs;
  for (int z = 0; z <= 6; ++z) zs.push_back(BigReal(z, P));
  Lab labc(fx_charlier(P));
  CHECK(recurrence_residual(labc, 0, zs) <= kEps);
  CHECK(recurrence_residual(labc, 4, zs) <= kEps);
  Lab labgm(fx_gen_meixner2(P));
  CHECK(recurrence_residual(labgm, 6, zs) <= kEps);
}

TEST_CASE("orthogonality residuals") {
  BigReal bound = tenpow(-40, P);
  Lab labc(fx_charlier(P));
  auto rep0 = orthogonality_residuals(labc, 0);
  CHECK(rep0.type_ii.empty());
  CHECK(rep0.type_i.empty());

  auto rep2 = orthogonality_residuals(labc, 2);
  REQUIRE(!rep2.type_ii.empty());
  CHECK(rep2.type_ii[0].a == 1);
  CHECK(rep2.type_ii[0].m == 0);
  CHECK(rep2.type_ii[0].residual.abs() <= bound);

  for (auto& f : fixtures()) {
    Lab lab(f);
    for (std::size_t n = 1; n <= 5; ++n)
      CHECK(orthogonality_residuals(lab, n).max_abs <= bound);
  }
  Lab labgm(fx_gen_meixner2(P));
  auto rep3 = orthogonality_residuals(labgm, 3);
  for (const auto& r : rep3.type_i) CHECK(r.residual.abs() <= bound);
}

TEST_CASE("pascal matrices") {
  auto l = pascal(6, P);
  long want[5] = {1, 4, 6, 4, 1};
  for (int j = 0; j < 5; ++j) CHECK(l.at(4, static_cast<std::size_t>(j)) == BigReal(want[j], P));

  // L^(1) L^(-1) = I^(1) exactly on a 10x10 window
  for (int a : {1, 2}) {
    auto prod = pascal_partial(10, a, +1, P) * pascal_partial(10, a, -1, P);
    auto id_a = parity_projector(10, a, P);
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) CHECK(prod.at(i, j) == id_a.at(i, j));
  }
}

TEST_CASE("pascal shift identities for B and A") {
  for (auto& f : fixtures()) {
    Lab lab(f);
    auto rep = pascal_shift_residuals(lab, 7, BigReal(2, P));
    CHECK(rep.type_ii_shift <= kEps);
    CHECK(rep.type_ii_unshift <= kEps);
    for (int a : {0, 1}) {
      CHECK(rep.type_i_shift[a] <= kEps);
      CHECK(rep.type_i_unshift[a] <= kEps);
    }
    CHECK(rep.partial_inverse.exactly_zero());
  }
}
