#pragma once

#include "stepline/lfmatrix.hpp"

namespace stepline {

/// Wave-matrix data of the continuous flows: phi^(a) = (theta^(a) S) S^-1,
/// phitilde^(a) = (theta^(a) S~) S~^-1, and mu = (theta H^-1)H + H^-1
/// phitilde H, assembled from the derivative slots of the jet
/// factorization.
struct ThetaFlow {
  Win phi[2];        // strictly lower
  Win phi_sum;       // phi^(1) + phi^(2)
  Win phitilde[2];
  Win phitilde_sum;
  Win mu;            // lower

  // structural residuals, all identities of the flow equations
  BigReal dprin;       // (theta H) H^-1 = alpha
  BigReal sub;         // -phi = (L^T)^2 gamma + L^T beta, plus deeper zeros
  BigReal super;       // -phitilde = L^T a_-(H) H^-1
  BigReal satow[2];    // theta^(a) H - phi^(a) H - H phitilde^(a)T = T^(a)T H
  BigReal s_bands;     // theta S^[n] = -(S^[n-2] a_-^{n-2} gamma + S^[n-1] a_-^{n-1} beta)
  BigReal stilde_bands;// theta S~^[n] = -(a_-^n H)(a_-^{n-1} H)^-1 S~^[n-1]
};
ThetaFlow theta_flow(Lab& lab, std::size_t n);

/// Residuals of the two-equation Toda system for q_n = log H_n and
/// f_n = S^[1]_n, checked in the log-free form
/// theta(H_n)/H_n = f_{n-1} - f_n and
/// theta^2 f_n - (2f_n - f_{n+1} - f_{n-1}) theta f_n
///   = H_{n+1}/H_{n-1} - H_{n+2}/H_n  (second equation from n = 1).
struct TodaPair {
  BigReal first, second;
};
std::vector<TodaPair> toda2_residual(Lab& lab, std::size_t n_max);

/// Relative residual of the third-order differential-difference equation
/// for tau at site n >= 1 (tau_{n-1} enters).
BigReal tau_pde_residual(Lab& lab, std::size_t n);

/// Same equation for a one-weight Hankel tau, which degenerates to the
/// second-order form theta^2 tau_{n+1} - (theta tau_{n+1})^2 / tau_{n+1}
/// = tau_{n+2} tau_n / tau_{n+1}.
BigReal single_weight_toda_residual(MomentTable& table, int a, std::size_t n);

/// Residuals of theta alpha = beta - a_+(beta), theta beta = gamma -
/// a_+(gamma) + beta (a_-(alpha) - alpha), theta gamma = gamma (a_-^2 alpha
/// - alpha), in recurrence labels.
struct AbcTriple {
  BigReal alpha, beta, gamma;
};
std::vector<AbcTriple> abc_toda_residual(Lab& lab, std::size_t n_max);

/// max |theta T - [T_+, T]| over the window, T_+ = alpha + Lambda; also
/// checks [T_+, T] = [-T_-, T].
struct LaxReport {
  BigReal lax;
  BigReal splitting;
};
LaxReport lax_residual(Lab& lab, std::size_t n);

/// Compatibility II: theta Psi = [phi, Psi] (= [Psi, T_-]) and
/// theta Psi^T = Psi^T + [mu, Psi^T].
struct CompatIIReport {
  BigReal direct;      // theta Psi - [phi, Psi]
  BigReal via_t_minus; // theta Psi - [Psi, T_-]
  BigReal transposed;  // theta Psi^T - Psi^T - [mu, Psi^T]
};
CompatIIReport compat_II_residual(Lab& lab, std::size_t n);

/// Jet vs column-bump cross-check for theta^k tau_n, k <= 3: relative
/// deviation between the jet sweep and the multilinearity expansion.
BigReal tau_derivative_crosscheck(Lab& lab, std::size_t n, int order);

}  // namespace stepline
