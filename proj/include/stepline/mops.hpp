#pragma once

#include "stepline/tau.hpp"

namespace stepline {

/// Polynomial in the monomial basis, ascending powers.
struct PolynomialVector {
  enum class Role { TypeII, TypeI1, TypeI2 };
  std::vector<BigReal> coeff;
  Role role = Role::TypeII;

  long degree(const Tolerance& tol) const;
  BigReal eval(const BigReal& x) const;
};

/// Monic type II polynomial B_n, read off row n of S.
PolynomialVector typeII(Lab& lab, std::size_t n);

/// Type I polynomial A^(a)_n from row n of H^-1 S~ against the split
/// monomial vector.
PolynomialVector typeI(Lab& lab, int a, std::size_t n);

/// Recursion coefficients in the labels of
/// z B_n = B_{n+1} + alpha_n B_n + beta_n B_{n-1} + gamma_n B_{n-2},
/// extracted from the tetradiagonal matrix T = S Lambda S^-1.
struct RecursionData {
  std::vector<BigReal> alpha, beta, gamma;
};
RecursionData recursion_coeffs(Lab& lab, std::size_t n_max);

/// Orthogonality residuals: sums over the lattice with the same tail
/// discipline as the moments.
struct OrthoResidual {
  int a;          // weight index (0 for the combined type I sum)
  std::size_t m;  // power of k
  BigReal residual;
};
struct OrthoReport {
  std::vector<OrthoResidual> type_ii;  // sum_k B_n(k) w^(a)(k) k^m
  std::vector<OrthoResidual> type_i;   // sum_a sum_k A^(a)_n(k) w^(a)(k) k^m
  BigReal max_abs;
};
OrthoReport orthogonality_residuals(Lab& lab, std::size_t n);

/// max_z |z B_n(z) - B_{n+1}(z) - alpha_n B_n(z) - beta_n B_{n-1}(z)
///        - gamma_n B_{n-2}(z)| over the samples.
BigReal recurrence_residual(Lab& lab, std::size_t n, const std::vector<BigReal>& z_samples);

/// Dressed Pascal matrices and the shift identities they encode.
struct PascalData {
  Win pi;        // S L S^-1
  Win pi_inv;    // S L^-1 S^-1
  Win pi_a[2];   // H^-1 S~ L^(a) S~^-1 H
  Win pi_a_inv[2];
};
PascalData dressed_pascal(Lab& lab, std::size_t n);

struct PascalShiftReport {
  BigReal type_ii_shift;   // B(z+1) = Pi B(z)
  BigReal type_ii_unshift; // B(z-1) = Pi^-1 B(z)
  BigReal type_i_shift[2]; // A^(a)(z+1) = Pi^(+a) A^(a)(z)
  BigReal type_i_unshift[2];
  BigReal partial_inverse; // L^(a) L^(-a) = I^(a) on the window
};
PascalShiftReport pascal_shift_residuals(Lab& lab, std::size_t n, const BigReal& z);

}  // namespace stepline
