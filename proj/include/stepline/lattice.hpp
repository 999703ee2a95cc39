#pragma once

#include "stepline/lfmatrix.hpp"

namespace stepline {

/// Which parameters the lattice directions move: hat raises b^(1)_r, check
/// raises b^(2)_q, tilde lowers c_s, bar advances the half-site index.
struct ShiftSpec {
  std::size_t r = 1;
  std::size_t q = 1;
  std::size_t s = 1;
};

/// Memoized grid of shifted families over (hat, check, tilde) multi-indices.
class ShiftGrid {
 public:
  ShiftGrid(WeightFamily base, ShiftSpec spec, LabCache& cache);

  Lab& at(int hat, int check, int tilde);
  const BigReal& d_hat() const { return d_hat_; }
  const BigReal& d_check() const { return d_check_; }
  const BigReal& d_tilde() const { return d_tilde_; }
  const ShiftSpec& spec() const { return spec_; }

 private:
  WeightFamily base_;
  ShiftSpec spec_;
  LabCache& cache_;
  BigReal d_hat_, d_check_, d_tilde_;
};

/// Lattice fields sampled from one family's factorization:
/// u = H_{2n}, v = H_{2n+1}, f = S^[1]_{2n}, g = S^[1]_{2n+1},
/// F = S^[2]_{2n}, G = S^[2]_{2n+1}; the bar shift is an index bump.
struct LatticeFields {
  std::vector<BigReal> u, v, f, g, F, G;
};
LatticeFields lattice_fields(Lab& lab, std::size_t n_max);

enum class NC3System { HatTilde, CheckTilde, HatCheck };
/// Residuals of the four equations of one 3D system at half-site n.
std::array<BigReal, 4> nc3d_residuals(ShiftGrid& grid, std::size_t n, NC3System sys);

/// The tau-function form of the discrete system in the b^(2)/c directions.
/// Two parametrizations are tried and the consistent one reported: the
/// plain tau-ratio map (u = tau_{2n+1}/tau_{2n}, f = tau^1_{2n}/tau_{2n},
/// ...) and the factorization-consistent map with
/// f = -tau^1_{2n+1}/tau_{2n+1}, g = -tau^1_{2n+2}/tau_{2n+2} (the
/// coefficient identity p^1 = -tau^1/tau carries a sign and a half-index
/// offset against the plain map). The winner is applied uniformly to all
/// four equations.
struct NCTauReport {
  std::array<BigReal, 4> residuals;
  bool reconciled_map = false;     // true if the factorization-consistent map won
  bool plus_sign_used = false;     // literal map only: the "+" sign variant won
};
NCTauReport nc_tau_residuals(ShiftGrid& grid, std::size_t n);

enum class NC2System { TildeBar, CheckBar, HatBar };
/// Residuals of the six equations of one 2D system at half-site n.
std::array<BigReal, 6> nc2d_residuals(ShiftGrid& grid, std::size_t n, NC2System sys);

/// Matrix-level compatibilities of the connection matrices and the
/// recursion intertwining relations.
struct ShiftCompatReport {
  BigReal omega_cap_sr;  // Omega^(s) Omega~^(r) = Omega^(r) Omega^^(s)
  BigReal omega_cap_sq;  // same with the b^(2) direction
  BigReal omega_cap_rq;  // hat against check
  BigReal intertwine_r;  // T^T(hat) omega^(r) = omega^(r) T^T
  BigReal intertwine_q;
  BigReal intertwine_s;
};
ShiftCompatReport shift_compat_residuals(ShiftGrid& grid, std::size_t n);

/// T^T(shifted) omega = omega T^T for a single contiguity direction.
BigReal intertwine_residual(Lab& base, Lab& shifted, ShiftKind kind, std::size_t index,
                            std::size_t n);

/// Single-weight degeneration: the scalar fully discrete equation
/// ubar/u~ - u^bar/u^~ = ubar/u^ - u~bar/u~^ for the Hankel H_n of one
/// weight, with hat = b-shift and tilde = lowering c-shift.
BigReal scalar_nc_residual(const WeightFamily& base, int a, std::size_t r, std::size_t s,
                           std::size_t n);

}  // namespace stepline
