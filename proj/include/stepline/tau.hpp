#pragma once

#include <map>
#include <memory>

#include "stepline/matrix.hpp"
#include "stepline/structural.hpp"
#include "stepline/weights.hpp"

namespace stepline {

/// Step-line moment matrix truncation: entry (r, 2m+a-1) = rho^(a)_{r+m},
/// materialized over jets. The parity rule makes it bi-Hankel:
/// M_{r+1,m} = M_{r,m+2}.
Mat<Jet3> moment_matrix(MomentTable& table, std::size_t n);

/// Plain Hankel moment matrix of one weight, used by the single-weight
/// degeneration checks.
Mat<Jet3> moment_matrix_single(MomentTable& table, int a, std::size_t n);

Mat<BigReal> jet_value(const Mat<Jet3>& m);
Mat<BigReal> jet_theta(const Mat<Jet3>& m, int k);

/// Per-family pipeline: moment table, Gauss-Borel factorization over jets
/// (grown on demand, nested reads), tau functions and recursion data.
class Lab {
 public:
  explicit Lab(WeightFamily family);

  const WeightFamily& family() const { return table_.family(); }
  long precision() const { return table_.precision(); }
  MomentTable& table() { return table_; }

  /// Factorization of the n-th truncation (cached at the largest size
  /// requested so far; leading blocks of a larger sweep are the smaller
  /// sweeps by LDU nesting).
  const GaussBorel<Jet3>& fact(std::size_t n);

  Jet3 tau_jet(std::size_t n);
  BigReal tau(std::size_t n);

  /// Associated tau by explicit row surgery: drop row n-j of the size-n
  /// truncation, append row n. Defined for 1 <= j <= n; j > n is an error.
  Jet3 tau_assoc_jet(std::size_t n, std::size_t j);
  BigReal tau_assoc(std::size_t n, std::size_t j);
  /// Same with the boundary convention tau^j_n = 0 when the dropped-row
  /// index would be negative (j > n); used by the lattice fields.
  BigReal tau_assoc_or_zero(std::size_t n, long j);

  /// tau_n as the double delta-Wronskian of the two hypergeometric series:
  /// interleaved theta-derivative columns, evaluated by an elimination
  /// independent of the jet/LDU path.
  BigReal wronskian_tau(std::size_t n);

  BigReal h(std::size_t k);
  Jet3 h_jet(std::size_t k);
  /// S^[band]_k, the k-th entry of the band-th subdiagonal of S (row k+band).
  Jet3 s_band(std::size_t band, std::size_t k);
  Jet3 stilde_band(std::size_t band, std::size_t k);

  struct Coeffs {
    std::vector<Jet3> alpha, beta, gamma;  // recurrence labels
  };
  /// alpha_n, beta_n, gamma_n for n <= n_max read off T = S Lambda S^-1.
  Coeffs coeffs(std::size_t n_max);

  // Value and theta-slot windows of the factorization at truncation size n.
  Win win_s(std::size_t n);
  Win win_s_inv(std::size_t n);
  Win win_stilde(std::size_t n);
  Win win_stilde_inv(std::size_t n);
  Win win_h(std::size_t n);
  Win win_h_inv(std::size_t n);
  Win win_t(std::size_t n);  // recursion matrix, upper bandwidth 1

 private:
  MomentTable table_;
  std::unique_ptr<GaussBorel<Jet3>> fact_;
  std::size_t fact_size_ = 0;
};

/// Shared, memoized labs keyed by family parameters; shift grids hit the
/// same shifted family repeatedly.
class LabCache {
 public:
  Lab& get(const WeightFamily& f);

 private:
  std::map<std::string, std::unique_ptr<Lab>> labs_;
};

}  // namespace stepline
