#include "doctest.h"
#include "stepline/lfmatrix.hpp"
#include "test_helpers.hpp"

using namespace stepline;
using namespace stepline::testing;

namespace {
constexpr long P = 256;
const BigReal kEps = tenpow(-55, P);

std::vector<WeightFamily> fixtures() {
  return {fx_charlier(P), fx_meixner2(P), fx_gen_charlier(P), fx_gen_meixner2(P)};
}
}  // namespace

TEST_CASE("structure matrix of the charlier pair: eta1 I1 + eta2 I2 + shift") {
  Lab lab(fx_charlier(P));
  const std::size_t n = 8;
  Win psi = lf_matrix(lab, n);
  BigReal e1 = BigReal::ratio(1, 2, P), e2 = BigReal::ratio(1, 3, P);
  Win want = win_parity(n, 1, P).scaled(e1) + win_parity(n, 2, P).scaled(e2) +
             win_shift_up(n, P);
  CHECK(Win::max_abs_diff(psi, want) <= kEps);
}

TEST_CASE("gen-charlier diagonals: psi2 = 1, psi1_n = alpha_{n+1}+alpha_n+c-n") {
  Lab lab(fx_gen_charlier(P));
  const std::size_t n = 10;
  Win psi = lf_matrix(lab, n);
  auto rc = recursion_coeffs(lab, n);
  BigReal c_root = lab.family().c[0] - BigReal(1, P);  // theta(z) = z(z+c), c = 1/2
  for (long k = 0; k + 2 < psi.valid_rows(); ++k) {
    check_small((psi.mat().at(k, k + 2) - BigReal(1, P)).abs(), kEps, "psi2");
    BigReal want = rc.alpha[k + 1] + rc.alpha[k] + c_root - BigReal(k, P);
    check_small((psi.mat().at(k, k + 1) - want).abs(), kEps, "psi1");
    const BigReal& eta = lab.family().eta[k % 2 == 0 ? 0 : 1];
    check_small((psi.mat().at(k, k) - eta).abs(), kEps, "psi0");
  }
}

TEST_CASE("bandedness on the valid window") {
  struct Case {
    WeightFamily f;
    long lower, upper;
  };
  std::vector<Case> cases = {{fx_charlier(P), 0, 1},
                             {fx_meixner2(P), 2, 1},
                             {fx_gen_charlier(P), 0, 2},
                             {fx_gen_meixner2(P), 2, 2}};
  for (auto& c : cases) {
    Lab lab(c.f);
    Win psi = lf_matrix(lab, 10);
    CHECK(bandedness_residual(psi, c.lower, c.upper) <= kEps);
    CHECK(c.lower == 2 * lab.family().sigma_degree());
    CHECK(c.upper == lab.family().theta_degree());
  }
}

TEST_CASE("dual construction agrees on the valid window") {
  for (auto& f : fixtures()) {
    Lab lab(f);
    for (std::size_t n : {8, 10}) {
      Win a = lf_matrix(lab, n);
      Win b = lf_matrix_dual(lab, n);
      CHECK(Win::max_abs_diff(a, b) <= kEps);
    }
  }
}

TEST_CASE("structure matrix swaps with the weights") {
  // identical equal-eta weights make the pair non-perfect (tau_2 = 0), so
  // the swap symmetry is checked by exchanging the spectral parameters
  WeightFamily f = fx_charlier(P);
  std::swap(f.eta[0], f.eta[1]);
  Lab lab(f);
  const std::size_t n = 8;
  Win psi = lf_matrix_dual(lab, n);
  Win want = win_parity(n, 1, P).scaled(f.eta[0]) + win_parity(n, 2, P).scaled(f.eta[1]) +
             win_shift_up(n, P);
  CHECK(Win::max_abs_diff(psi, want) <= kEps);

  WeightFamily g = fx_charlier(P);
  g.eta[0] = g.eta[1];
  Lab equal_lab(g);
  CHECK_THROWS_AS(equal_lab.fact(4), FactorizationBreakdown);
}

TEST_CASE("compatibility I") {
  Lab labc(fx_charlier(P));
  CHECK(compat_I_residual(labc, 8) <= kEps);
  Lab labgm(fx_gen_meixner2(P));
  CHECK(compat_I_residual(labgm, 8) <= kEps);
  Lab labgc(fx_gen_charlier(P));
  CHECK(compat_I_residual(labgc, 8) <= kEps);
  CHECK_THROWS_AS(compat_I_residual(labgc, 2), GuardError);  // no valid window
}

TEST_CASE("connection matrices: b-shift on gen-meixner2") {
  WeightFamily base = fx_gen_meixner2(P);
  Lab lab(base);
  Lab shifted(shift_params(base, ShiftKind::B1, 1));
  auto cd = connection_matrices(lab, shifted, ShiftKind::B1, 1, 10);
  CHECK(cd.d == BigReal(1, P));  // diagonal of omega equals b1
  CHECK(cd.diagonal_residual <= kEps);
  CHECK(cd.structure_residual <= kEps);
  CHECK(cd.band_rule_residual <= kEps);
  CHECK(cd.transpose_residual <= kEps);
}

TEST_CASE("connection matrices: lowering c-shift") {
  for (auto& base : {fx_gen_charlier(P), fx_gen_meixner2(P)}) {
    Lab lab(base);
    Lab shifted(shift_params(base, ShiftKind::CDown, 1));
    auto cd = connection_matrices(lab, shifted, ShiftKind::CDown, 1, 10);
    CHECK(cd.d == base.c[0] - BigReal(1, P));
    CHECK(cd.diagonal_residual <= kEps);
    CHECK(cd.structure_residual <= kEps);
    CHECK(cd.band_rule_residual <= kEps);
    CHECK(cd.transpose_residual <= kEps);
  }
}

TEST_CASE("connection formulas at sample points") {
  WeightFamily base = fx_gen_meixner2(P);
  Lab lab(base);
  Lab shifted(shift_params(base, ShiftKind::B1, 1));
  auto cd = connection_matrices(lab, shifted, ShiftKind::B1, 1, 10);
  for (long z : {0L, 1L, 2L}) {
    auto rep = connection_formula_residuals(lab, shifted, cd, 10, BigReal(z, P));
    CHECK(rep.omega_type_i <= kEps);
    CHECK(rep.omega_cap_type_ii <= kEps);
    CHECK(rep.psi_type_ii <= kEps);
    CHECK(rep.psi_type_i[0] <= kEps);
    CHECK(rep.psi_type_i[1] <= kEps);
  }

  Lab labc(fx_charlier(P));
  Lab labc2(fx_charlier(P));  // no parameter shifts exist; psi formulas only
  Win psi = lf_matrix(labc, 10);
  // theta(z) B(z-1) = Psi B(z) at z = 2 and at the theta root z = 0
  for (long z : {2L, 0L}) {
    std::vector<BigReal> b_at, b_dn;
    for (std::size_t k = 0; k < 10; ++k) {
      b_at.push_back(typeII(labc, k).eval(BigReal(z, P)));
      b_dn.push_back(labc.family().theta_at(BigReal(z, P)) *
                     typeII(labc2, k).eval(BigReal(z - 1, P)));
    }
    for (long i = 0; i < psi.valid_rows(); ++i) {
      BigReal acc(0, P);
      for (std::size_t j = 0; j < 10; ++j) acc += psi.mat().at(i, j) * b_at[j];
      check_small((acc - b_dn[static_cast<std::size_t>(i)]).abs(), kEps, "theta shift");
    }
  }
}

TEST_CASE("moment matrix contiguity under parameter steps") {
  WeightFamily base = fx_gen_meixner2(P);
  Lab lab(base);
  Lab b_up(shift_params(base, ShiftKind::B1, 1));
  CHECK(moment_contiguity_residual_b(lab, b_up, 1, base.b[0][0], 8) <= kEps);
  Lab b2_up(shift_params(base, ShiftKind::B2, 1));
  CHECK(moment_contiguity_residual_b(lab, b2_up, 2, base.b[1][0], 8) <= kEps);
  Lab c_dn(shift_params(base, ShiftKind::CDown, 1));
  CHECK(moment_contiguity_residual_c(lab, c_dn, base.c[0], 8) <= kEps);
}
