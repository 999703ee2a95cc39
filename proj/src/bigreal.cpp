#include "stepline/bigreal.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace stepline {

namespace {
long join_prec(const BigReal& a, const BigReal& b) {
  return std::max(a.precision(), b.precision());
}
}  // namespace

BigReal BigReal::ratio(long num, long den, long prec) {
  if (den == 0) throw std::invalid_argument("BigReal::ratio: zero denominator");
  BigReal n(num, prec), d(den, prec);
  return n / d;
}

BigReal BigReal::parse(const std::string& text, long prec) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    if (text.find('/', slash + 1) != std::string::npos)
      throw std::invalid_argument("bad rational literal: " + text);
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (num.empty() || den.empty())
      throw std::invalid_argument("bad rational literal: " + text);
    BigReal n = parse(num, prec), d = parse(den, prec);
    if (d.exactly_zero()) throw std::invalid_argument("zero denominator: " + text);
    return n / d;
  }
  BigReal out(prec);
  if (text.empty() || mpfr_set_str(out.v_, text.c_str(), 10, MPFR_RNDN) != 0)
    throw std::invalid_argument("bad numeric literal: " + text);
  return out;
}

BigReal BigReal::pow2(long k, long prec) {
  BigReal out(prec);
  mpfr_set_si_2exp(out.v_, 1, k, MPFR_RNDN);
  return out;
}

std::string BigReal::to_string(long digits) const {
  if (digits < 2) digits = 2;
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", static_cast<int>(digits - 1), v_);
  return std::string(buf.data());
}

BigReal BigReal::operator-() const {
  BigReal out(precision());
  mpfr_neg(out.v_, v_, MPFR_RNDN);
  return out;
}

BigReal BigReal::abs() const {
  BigReal out(precision());
  mpfr_abs(out.v_, v_, MPFR_RNDN);
  return out;
}

BigReal BigReal::exp() const {
  BigReal out(precision());
  mpfr_exp(out.v_, v_, MPFR_RNDN);
  return out;
}

BigReal BigReal::sqrt() const {
  BigReal out(precision());
  mpfr_sqrt(out.v_, v_, MPFR_RNDN);
  return out;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal out(join_prec(a, b));
  mpfr_add(out.v_, a.v_, b.v_, MPFR_RNDN);
  return out;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal out(join_prec(a, b));
  mpfr_sub(out.v_, a.v_, b.v_, MPFR_RNDN);
  return out;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal out(join_prec(a, b));
  mpfr_mul(out.v_, a.v_, b.v_, MPFR_RNDN);
  return out;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal out(join_prec(a, b));
  mpfr_div(out.v_, a.v_, b.v_, MPFR_RNDN);
  return out;
}

Tolerance default_tolerance(long precision, long n) {
  long drop = precision - 8 * n;
  if (drop < 16) drop = 16;
  BigReal eps = BigReal::pow2(-drop, precision);
  return Tolerance{eps, eps};
}

}  // namespace stepline
