#pragma once

#include "stepline/mops.hpp"

namespace stepline {

/// Banded structure matrix Psi = Pi^-1 theta(T), lower bandwidth 2M and
/// upper bandwidth deg theta.
Win lf_matrix(Lab& lab, std::size_t n);

/// The sigma-side construction sigma^(1)(T^(1)T) Pi^(1)T + sigma^(2)(...)
/// of the same matrix, built through its transpose.
Win lf_matrix_dual(Lab& lab, std::size_t n);

/// max |entry| of Psi outside the (2M, deg theta) band on the valid window.
BigReal bandedness_residual(const Win& psi, long lower_bw, long upper_bw);

/// max |[Psi, T] - Psi| over the valid window.
BigReal compat_I_residual(Lab& lab, std::size_t n);

/// Connection matrices for one contiguity step. For b-shifts d is the
/// unshifted parameter; for the lowering c-shift d = c_j - 1. omega is the
/// upper-banded matrix with three diagonals (d on the main one), omega_cap
/// the lower-banded companion with omega^T = d * omega_cap.
struct ConnectionData {
  ShiftKind kind;
  std::size_t index;
  BigReal d;
  WeightFamily shifted;
  Win omega;
  Win omega_cap;
  BigReal structure_residual;   // three-diagonal structure of both matrices
  BigReal diagonal_residual;    // max |omega_kk - d|
  BigReal band_rule_residual;   // the H-ratio expressions for omega^[1], omega^[2]
  BigReal transpose_residual;   // omega^T - d omega_cap
};
ConnectionData connection_matrices(Lab& base, Lab& shifted_lab, ShiftKind kind,
                                   std::size_t index, std::size_t n);

/// Residuals of the four connection formulas at a sample z.
struct ConnectionFormulaReport {
  BigReal omega_type_i;    // omega A^(a)(z) = (z+d) A^(a)_shifted(z)
  BigReal omega_cap_type_ii;  // omega_cap B_shifted(z) = B(z)
  BigReal psi_type_ii;     // theta(z) B(z-1) = Psi B(z)
  BigReal psi_type_i[2];   // sigma^(a)(z) A^(a)(z+1) = Psi^T A^(a)(z)
};
ConnectionFormulaReport connection_formula_residuals(Lab& base, Lab& shifted_lab,
                                                     const ConnectionData& cd, std::size_t n,
                                                     const BigReal& z);

/// Entrywise contiguity of the moment matrix under a b-shift:
/// M Lambda^(a)T + b M = b M_shifted on the comparison window.
BigReal moment_contiguity_residual_b(Lab& base, Lab& shifted_lab, int a, const BigReal& b,
                                     std::size_t n);
/// Same for the lowering c-shift: M (Lambda^T)^2 + (c-1) M = (c-1) M_shifted.
BigReal moment_contiguity_residual_c(Lab& base, Lab& shifted_lab, const BigReal& c,
                                     std::size_t n);

}  // namespace stepline
