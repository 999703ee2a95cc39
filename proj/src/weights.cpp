#include "stepline/weights.hpp"

#include <sstream>

namespace stepline {

void WeightFamily::check_convergence() const {
  for (int a = 1; a <= 2; ++a) {
    std::size_t m = m_params(a), n = n_params();
    if (m <= n) continue;
    if (m == n + 1) {
      BigReal one(1, precision);
      if (eta[a - 1] < one) continue;
      throw GuardError("moment series divergent: weight " + std::to_string(a) +
                       " needs eta < 1 when it carries one more b than c parameters");
    }
    throw GuardError("moment series divergent: weight " + std::to_string(a) +
                     " has more than one extra b parameter");
  }
}

ATFlag WeightFamily::at_flag() const {
  BigReal zero(0, precision);
  auto positive = [&](const std::vector<BigReal>& v) {
    for (const auto& x : v)
      if (!(x > zero)) return false;
    return true;
  };
  if (!positive(c) || !(eta[0] > zero) || !(eta[1] > zero)) return ATFlag::Unverified;
  if (b[0] == b[1]) {
    if (positive(b[0]) && eta[0] != eta[1]) return ATFlag::SharedParamsDistinctEta;
    return ATFlag::Unverified;
  }
  if (eta[0] == eta[1] && b[0].size() == b[1].size() && !b[0].empty()) {
    std::size_t m = b[0].size();
    bool shared_head = true;
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (b[0][i] != b[1][i]) shared_head = false;
    if (shared_head && positive(b[0]) && positive(b[1]) && b[0][m - 1] != b[1][m - 1])
      return ATFlag::SharedEtaDistinctB;
  }
  return ATFlag::Unverified;
}

std::string WeightFamily::cache_key() const {
  std::ostringstream os;
  os << precision;
  auto put = [&](const BigReal& x) { os << '|' << x.to_string(40); };
  for (const auto& x : c) put(x);
  os << "#b1";
  for (const auto& x : b[0]) put(x);
  os << "#b2";
  for (const auto& x : b[1]) put(x);
  os << "#e";
  put(eta[0]);
  put(eta[1]);
  return os.str();
}

BigReal WeightFamily::theta_at(const BigReal& z) const {
  BigReal acc = z;
  BigReal one(1, precision);
  for (const auto& cj : c) acc *= z + cj - one;
  return acc;
}

BigReal WeightFamily::sigma_at(int a, const BigReal& z) const {
  BigReal acc = eta[a - 1];
  for (const auto& bi : b[a - 1]) acc *= z + bi;
  return acc;
}

BigReal pochhammer(const BigReal& b, unsigned long k) {
  BigReal acc(1, b.precision());
  for (unsigned long i = 0; i < k; ++i) acc *= b + BigReal(static_cast<long>(i), b.precision());
  return acc;
}

PfqResult pfq_eval(const std::vector<BigReal>& bs, const std::vector<BigReal>& cs,
                   const BigReal& eta, long precision) {
  if (bs.size() > cs.size() + 1 ||
      (bs.size() == cs.size() + 1 && !(eta.abs() < BigReal(1, precision))))
    throw GuardError("pfq_eval: series divergent for these parameters");
  const BigReal budget = BigReal::pow2(-(precision + 32), precision);
  const BigReal limit =
      bs.size() == cs.size() + 1 ? eta.abs() : BigReal(0, precision);
  const BigReal r = series_ratio_threshold(limit, precision);
  const BigReal tail_factor = r / (BigReal(1, precision) - r);
  BigReal term(1, precision), sum(0, precision), prev(0, precision);
  std::size_t quiet = 0;
  for (unsigned long k = 0; k < 100000; ++k) {
    sum += term;
    BigReal mag = term.abs();
    bool small = mag <= budget * max(sum.abs(), BigReal(1, precision));
    bool shrinking = k == 0 || prev.exactly_zero() || mag <= r * prev;
    quiet = (small && shrinking) ? quiet + 1 : 0;
    prev = mag;
    if (quiet >= 20) return PfqResult{sum, mag * tail_factor};
    BigReal next = term * eta / BigReal(static_cast<long>(k + 1), precision);
    for (const auto& b : bs) next *= b + BigReal(static_cast<long>(k), precision);
    for (const auto& c : cs) next /= c + BigReal(static_cast<long>(k), precision);
    term = next;
  }
  throw GuardError("pfq_eval: no convergence within term budget");
}

BigReal weight_eval(const WeightFamily& f, int a, unsigned long k) {
  long prec = f.precision;
  BigReal num(1, prec);
  for (const auto& bi : f.b[a - 1]) num *= pochhammer(bi, k);
  BigReal den(1, prec);
  for (const auto& cj : f.c) {
    BigReal p = pochhammer(cj, k);
    if (p.exactly_zero())
      throw GuardError("weight_eval: pole, (c)_k vanishes at k=" + std::to_string(k));
    den *= p;
  }
  BigReal eta_pow(1, prec);
  for (unsigned long i = 0; i < k; ++i) eta_pow *= f.eta[a - 1];
  BigReal kfac(1, prec);
  for (unsigned long i = 2; i <= k; ++i) kfac *= BigReal(static_cast<long>(i), prec);
  return num / den * eta_pow / kfac;
}

BigReal pearson_residual(const WeightFamily& f, int a, unsigned long k) {
  long prec = f.precision;
  BigReal kk(static_cast<long>(k), prec);
  BigReal one(1, prec);
  return f.theta_at(kk + one) * weight_eval(f, a, k + 1) -
         f.sigma_at(a, kk) * weight_eval(f, a, k);
}

WeightFamily shift_params(const WeightFamily& f, ShiftKind kind, std::size_t index) {
  WeightFamily out = f;
  BigReal one(1, f.precision);
  switch (kind) {
    case ShiftKind::B1:
    case ShiftKind::B2: {
      int a = kind == ShiftKind::B1 ? 1 : 2;
      auto& list = out.b[a - 1];
      if (index < 1 || index > list.size())
        throw GuardError("shift_params: weight " + std::to_string(a) +
                         " has no b parameter with index " + std::to_string(index));
      list[index - 1] += one;
      break;
    }
    case ShiftKind::CUp:
    case ShiftKind::CDown: {
      if (index < 1 || index > out.c.size())
        throw GuardError("shift_params: no c parameter with index " + std::to_string(index));
      BigReal& cj = out.c[index - 1];
      cj = kind == ShiftKind::CUp ? cj + one : cj - one;
      if (cj.is_integer() && !(cj > BigReal(0, f.precision)))
        throw GuardError("shift_params: shifted c is a non-positive integer (weight pole)");
      break;
    }
  }
  out.check_convergence();
  if (!out.name.empty()) out.name += "*";
  return out;
}

MomentTable::MomentTable(WeightFamily family)
    : family_(std::move(family)), tail_{BigReal(family_.precision), BigReal(family_.precision)} {
  family_.check_convergence();
}

void MomentTable::extend(int a, std::size_t n) {
  auto& table = rho_[a - 1];
  long prec = family_.precision;
  const BigReal limit = family_.m_params(a) == family_.n_params() + 1
                            ? family_.eta[a - 1].abs()
                            : BigReal(0, prec);
  const BigReal r = series_ratio_threshold(limit, prec);
  const BigReal tail_factor = r / (BigReal(1, prec) - r);
  while (table.size() <= n) {
    std::size_t order = table.size();
    // sum_k k^order w(k): weight ratio times k^order prefactor, summed with
    // the same quiet-run rule as jet_eval.
    const BigReal budget = BigReal::pow2(-(prec + 32), prec);
    BigReal w(1, prec);  // w(0) = 1
    BigReal sum(0, prec), prev(0, prec);
    std::size_t quiet = 0;
    bool done = false;
    for (unsigned long k = 0; k < 200000 && !done; ++k) {
      BigReal kpow(1, prec);
      for (std::size_t i = 0; i < order; ++i) kpow *= BigReal(static_cast<long>(k), prec);
      BigReal term = kpow * w;
      sum += term;
      BigReal mag = term.abs();
      bool small = mag <= budget * max(sum.abs(), BigReal(1, prec));
      bool shrinking = k == 0 || prev.exactly_zero() || mag <= r * prev;
      quiet = (small && shrinking) ? quiet + 1 : 0;
      prev = mag;
      if (quiet >= 20) {
        tail_[a - 1] = max(tail_[a - 1], mag * tail_factor);
        done = true;
        break;
      }
      // w(k+1)/w(k) = sigma(k)/theta(k+1)
      BigReal kk(static_cast<long>(k), prec);
      w *= family_.sigma_at(a, kk) / family_.theta_at(kk + BigReal(1, prec));
    }
    if (!done) throw GuardError("moment series did not converge within term budget");
    table.push_back(sum);
  }
}

const BigReal& MomentTable::scalar(int a, std::size_t n) {
  extend(a, n);
  return rho_[a - 1][n];
}

Jet3 MomentTable::jet(int a, std::size_t n) {
  extend(a, n + Jet3::kOrder);
  Jet3 out(family_.precision);
  for (int k = 0; k <= Jet3::kOrder; ++k) {
    const BigReal& v = rho_[a - 1][n + static_cast<std::size_t>(k)];
    if (a == 1)
      out.d(k, 0) = v;
    else
      out.d(0, k) = v;
  }
  return out;
}

Jet3 moment(const WeightFamily& f, int a, std::size_t n, long precision) {
  WeightFamily fam = f;
  fam.precision = precision;
  fam.check_convergence();
  const BigReal limit = fam.m_params(a) == fam.n_params() + 1 ? fam.eta[a - 1].abs()
                                                              : BigReal(0, precision);
  const BigReal threshold = series_ratio_threshold(limit, precision);
  auto term = [&](std::size_t k) {
    BigReal w = weight_eval(fam, a, k);
    BigReal kpow(1, precision);
    for (std::size_t i = 0; i < n; ++i) kpow *= BigReal(static_cast<long>(k), precision);
    Jet3 t(precision);
    for (int d = 0; d <= Jet3::kOrder; ++d) {
      BigReal extra(1, precision);
      for (int i = 0; i < d; ++i) extra *= BigReal(static_cast<long>(k), precision);
      if (a == 1)
        t.d(d, 0) = w * kpow * extra;
      else
        t.d(0, d) = w * kpow * extra;
    }
    return t;
  };
  return jet_eval(term, precision, 100000, &threshold).sum;
}

namespace {
WeightFamily base_family(long prec) {
  WeightFamily f;
  f.precision = prec;
  f.eta = {BigReal(prec), BigReal(prec)};
  return f;
}
}  // namespace

WeightFamily fx_charlier(long prec) {
  WeightFamily f = base_family(prec);
  f.eta[0] = BigReal::ratio(1, 2, prec);
  f.eta[1] = BigReal::ratio(1, 3, prec);
  f.name = "charlier";
  return f;
}

WeightFamily fx_meixner2(long prec) {
  WeightFamily f = base_family(prec);
  f.eta[0] = f.eta[1] = BigReal::ratio(1, 2, prec);
  f.b[0] = {BigReal(1, prec)};
  f.b[1] = {BigReal::ratio(1, 2, prec)};
  f.name = "meixner2";
  return f;
}

WeightFamily fx_gen_charlier(long prec) {
  WeightFamily f = base_family(prec);
  f.eta[0] = BigReal::ratio(1, 2, prec);
  f.eta[1] = BigReal::ratio(1, 3, prec);
  f.c = {BigReal::ratio(3, 2, prec)};  // theta(z) = z(z + 1/2)
  f.name = "gen-charlier";
  return f;
}

WeightFamily fx_gen_meixner2(long prec) {
  WeightFamily f = base_family(prec);
  f.eta[0] = f.eta[1] = BigReal::ratio(1, 2, prec);
  f.b[0] = {BigReal(1, prec)};
  f.b[1] = {BigReal::ratio(1, 2, prec)};
  f.c = {BigReal::ratio(5, 2, prec)};  // theta(z) = z(z + 3/2)
  f.name = "gen-meixner2";
  return f;
}

WeightFamily make_family(const std::string& name, long precision,
                         const std::optional<std::string>& eta1,
                         const std::optional<std::string>& eta2,
                         const std::optional<std::string>& eta,
                         const std::optional<std::string>& b1,
                         const std::optional<std::string>& b2,
                         const std::optional<std::string>& c) {
  WeightFamily f;
  if (name == "charlier")
    f = fx_charlier(precision);
  else if (name == "meixner2")
    f = fx_meixner2(precision);
  else if (name == "gen-charlier")
    f = fx_gen_charlier(precision);
  else if (name == "gen-meixner2")
    f = fx_gen_meixner2(precision);
  else
    throw GuardError("unknown family: " + name +
                     " (expected charlier, meixner2, gen-charlier or gen-meixner2)");
  auto parse = [&](const std::string& s) { return BigReal::parse(s, precision); };
  if (eta) f.eta[0] = f.eta[1] = parse(*eta);
  if (eta1) f.eta[0] = parse(*eta1);
  if (eta2) f.eta[1] = parse(*eta2);
  if (b1) {
    if (f.b[0].empty()) throw GuardError("family " + name + " has no b1 parameter");
    f.b[0][0] = parse(*b1);
  }
  if (b2) {
    if (f.b[1].empty()) throw GuardError("family " + name + " has no b2 parameter");
    f.b[1][0] = parse(*b2);
  }
  if (c) {
    if (f.c.empty()) throw GuardError("family " + name + " has no c parameter");
    f.c[0] = parse(*c) + BigReal(1, precision);  // CLI takes the theta-root c
  }
  f.check_convergence();
  return f;
}

}  // namespace stepline
