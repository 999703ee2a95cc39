#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "stepline/jet.hpp"

namespace stepline {

/// Which parameter a contiguity step moves. B1/B2 raise one numerator
/// parameter of the first/second weight by one; CUp/CDown move one shared
/// denominator parameter by one.
enum class ShiftKind { B1, B2, CUp, CDown };

/// AT-system classification per the two known-safe parameter patterns:
/// shared (b, c) lists with distinct positive spectral parameters, or a
/// shared spectral parameter with the b lists differing in one positive
/// entry. Anything else is recorded as Unverified, never rejected.
enum class ATFlag { SharedParamsDistinctEta, SharedEtaDistinctB, Unverified };

/// A pair of discrete weights w^(a)(k) = prod_i (b^(a)_i)_k / prod_j (c_j)_k
/// * eta_a^k / k! pinned by the Pearson equations
///   theta(k+1) w(k+1) = sigma^(a)(k) w(k),
/// theta(z) = z prod_j (z + c_j - 1), sigma^(a)(z) = eta_a prod_i (z + b^(a)_i).
/// The two spectral parameters are always carried independently; single-eta
/// families live on the diagonal eta_1 = eta_2.
struct WeightFamily {
  long precision = BigReal::kDefaultPrecision;
  std::vector<BigReal> c;                      // shared denominator parameters
  std::array<std::vector<BigReal>, 2> b;       // numerator parameters per weight
  std::array<BigReal, 2> eta;
  std::string name;

  std::size_t n_params() const { return c.size(); }
  std::size_t m_params(int a) const { return b[a - 1].size(); }
  long theta_degree() const { return static_cast<long>(c.size()) + 1; }
  long sigma_degree() const {
    return static_cast<long>(std::max(b[0].size(), b[1].size()));
  }

  /// Term-ratio limit of the moment series must be < 1; throws GuardError.
  void check_convergence() const;
  ATFlag at_flag() const;

  /// Stable key for memoizing pipelines over shift grids.
  std::string cache_key() const;

  BigReal theta_at(const BigReal& z) const;
  BigReal sigma_at(int a, const BigReal& z) const;
};

BigReal pochhammer(const BigReal& b, unsigned long k);

struct PfqResult {
  BigReal value;
  BigReal tail_bound;
};

/// Generalized hypergeometric series sum_k prod(b)_k/prod(c)_k eta^k/k!,
/// truncated once a geometric tail bound falls below 2^-(precision+32).
PfqResult pfq_eval(const std::vector<BigReal>& bs, const std::vector<BigReal>& cs,
                   const BigReal& eta, long precision);

/// w^(a)(k); throws GuardError on a denominator Pochhammer hitting zero.
BigReal weight_eval(const WeightFamily& f, int a, unsigned long k);

/// theta(k+1) w(k+1) - sigma^(a)(k) w(k); vanishes identically.
BigReal pearson_residual(const WeightFamily& f, int a, unsigned long k);

/// One-parameter contiguity step; the index is 1-based into the b or c list.
WeightFamily shift_params(const WeightFamily& f, ShiftKind kind, std::size_t index);

/// Cached moments rho^(a)_n = sum_k k^n w^(a)(k) together with their
/// derivative jets in the two logarithmic directions; the weight-a moment
/// depends on eta_a only, so one scalar table up to n+3 fills every slot.
class MomentTable {
 public:
  explicit MomentTable(WeightFamily family);

  const WeightFamily& family() const { return family_; }
  long precision() const { return family_.precision; }

  const BigReal& scalar(int a, std::size_t n);
  Jet3 jet(int a, std::size_t n);
  const BigReal& tail_bound(int a) const { return tail_[a - 1]; }

 private:
  void extend(int a, std::size_t n);
  WeightFamily family_;
  std::array<std::vector<BigReal>, 2> rho_;
  std::array<BigReal, 2> tail_;
};

/// rho^(a)_n as a jet, summed termwise through jet_eval.
Jet3 moment(const WeightFamily& f, int a, std::size_t n, long precision);

// Canonical fixtures used across the test and acceptance suites. The c
// arguments of the generalized families follow the theta-root convention
// theta(z) = z(z+c); the stored denominator parameter is c+1.
WeightFamily fx_charlier(long precision);       // eta 1/2, 1/3
WeightFamily fx_meixner2(long precision);       // eta 1/2, b1=1, b2=1/2
WeightFamily fx_gen_charlier(long precision);   // eta 1/2, 1/3, c=1/2
WeightFamily fx_gen_meixner2(long precision);   // eta 1/2, b1=1, b2=1/2, c=3/2

/// Family construction by name with optional parameter overrides (values as
/// exact-rational strings); used by the CLI and the bindings.
WeightFamily make_family(const std::string& name, long precision,
                         const std::optional<std::string>& eta1,
                         const std::optional<std::string>& eta2,
                         const std::optional<std::string>& eta,
                         const std::optional<std::string>& b1,
                         const std::optional<std::string>& b2,
                         const std::optional<std::string>& c);

}  // namespace stepline
