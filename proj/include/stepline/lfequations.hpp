#pragma once

#include <array>

#include "stepline/mops.hpp"

namespace stepline {

/// Coefficient triples in recurrence labels, index 0..n_max.
struct CoeffTriples {
  std::vector<BigReal> alpha, beta, gamma;
};

/// Closed forms for the plain two-weight Charlier pair; alpha_0 is the one
/// free constant and comes from the factorization.
CoeffTriples charlier_closed(const BigReal& eta1, const BigReal& eta2, const BigReal& alpha0,
                             std::size_t n_max);

/// Closed forms for the two-weight Meixner II pair.
CoeffTriples meixner2_closed(const BigReal& eta, const BigReal& b1, const BigReal& b2,
                             std::size_t n_max);

/// One step of the generalized-Charlier recursion: consumes alpha, beta,
/// gamma through index n+1 (alpha_{-1} = 0 convention) and produces
/// (alpha_{n+2}, beta_{n+2}, gamma_{n+2}). gamma comes first since it feeds
/// the alpha update; a vanishing gamma_{n+2} is an error.
std::array<BigReal, 3> gen_charlier_step(const CoeffTriples& state, const BigReal& eta1,
                                         const BigReal& eta2, const BigReal& c, long n,
                                         const Tolerance& tol);

/// Same for generalized Meixner II. c follows the theta-root convention
/// theta(z) = z(z+c).
std::array<BigReal, 3> gen_meixner2_step(const CoeffTriples& state, const BigReal& eta,
                                         const BigReal& b1, const BigReal& b2, const BigReal& c,
                                         long n, const Tolerance& tol);

/// Elementwise structure-compatibility identities behind the recursions,
/// evaluated on given coefficient values; all three vanish on exact data.
std::array<BigReal, 3> gen_charlier_identity_residuals(const CoeffTriples& coeffs,
                                                       const BigReal& eta1, const BigReal& eta2,
                                                       const BigReal& c, long n);
std::array<BigReal, 3> gen_meixner2_identity_residuals(const CoeffTriples& coeffs,
                                                       const BigReal& eta, const BigReal& b1,
                                                       const BigReal& b2, const BigReal& c,
                                                       long n);

enum class LFKind { Charlier, Meixner2, GenCharlier, GenMeixner2 };
LFKind lf_kind_for(const WeightFamily& f);

/// Side-by-side report: factorization-extracted triples vs closed-form or
/// recursion-predicted ones with elementwise relative deviations.
struct LFReport {
  std::string family;
  long precision = 0;
  LFKind kind = LFKind::Charlier;
  CoeffTriples from_factorization;
  CoeffTriples predicted;
  std::size_t first_predicted = 0;  // closed forms predict everything,
                                    // recursions start at index 2 (3 after
                                    // a seed fallback)
  bool seed_fallback = false;
  BigReal max_rel_deviation;

  BigReal rel_deviation(std::size_t n, int which) const;  // 0=alpha,1=beta,2=gamma
};
LFReport lf_consistency(Lab& lab, std::size_t n_max);

}  // namespace stepline
