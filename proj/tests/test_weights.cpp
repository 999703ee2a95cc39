#include "doctest.h"
#include "stepline/weights.hpp"
#include "test_helpers.hpp"

using namespace stepline;
using namespace stepline::testing;

namespace {
constexpr long P = 256;
const BigReal kEps = tenpow(-70, P);
}  // namespace

TEST_CASE("pochhammer") {
  CHECK(pochhammer(BigReal(7, P), 0) == BigReal(1, P));
  CHECK(pochhammer(BigReal(1, P), 4) == BigReal(24, P));
  CHECK(pochhammer(BigReal::ratio(1, 2, P), 3) == BigReal::ratio(15, 8, P));
}

TEST_CASE("pfq_eval: exponential, binomial, 1F1") {
  auto r = pfq_eval({}, {}, BigReal::ratio(1, 2, P), P);
  check_close(r.value, BigReal::ratio(1, 2, P).exp(), kEps, "0F0");
  CHECK(r.tail_bound <= BigReal::pow2(-(P + 10), P));

  auto bin = pfq_eval({BigReal(2, P)}, {}, BigReal::ratio(1, 3, P), P);
  check_close(bin.value, BigReal::ratio(9, 4, P), kEps, "1F0");

  auto f11 = pfq_eval({BigReal(1, P)}, {BigReal(2, P)}, BigReal::ratio(1, 2, P), P);
  BigReal want = BigReal(2, P) * (BigReal::ratio(1, 2, P).exp() - BigReal(1, P));
  check_close(f11.value, want, kEps, "1F1");

  CHECK_THROWS_AS(pfq_eval({BigReal(2, P)}, {}, BigReal(2, P), P), GuardError);
}

TEST_CASE("weight_eval on fixtures") {
  auto fc = fx_charlier(P);
  check_close(weight_eval(fc, 1, 3), BigReal::ratio(1, 48, P), kEps, "charlier k=3");
  CHECK(weight_eval(fc, 2, 0) == BigReal(1, P));
  auto fgm = fx_gen_meixner2(P);
  CHECK(weight_eval(fgm, 1, 0) == BigReal(1, P));
  check_close(weight_eval(fgm, 2, 2), BigReal::ratio(3, 280, P), kEps, "gen-meixner2 a=2 k=2");
}

TEST_CASE("weight_eval pole") {
  WeightFamily f = fx_gen_charlier(P);
  f.c[0] = BigReal(-1, P);  // (c)_k vanishes from k = 2 on
  CHECK_THROWS_AS(weight_eval(f, 1, 3), GuardError);
}

TEST_CASE("moments: values, pfq agreement, theta ladder") {
  auto fc = fx_charlier(P);
  Jet3 m0 = moment(fc, 1, 0, P);
  BigReal e_half = BigReal::ratio(1, 2, P).exp();
  check_close(m0.value(), e_half, kEps, "rho0");
  check_close(m0.d(1, 0), BigReal::ratio(1, 2, P) * e_half, kEps, "theta slot");

  Jet3 m1 = moment(fc, 1, 1, P);
  check_close(m1.value(), BigReal::ratio(1, 2, P) * e_half, kEps, "rho1");

  for (const WeightFamily& f : {fx_charlier(P), fx_meixner2(P), fx_gen_charlier(P),
                                fx_gen_meixner2(P)}) {
    for (int a : {1, 2}) {
      auto pf = pfq_eval(f.b[a - 1], f.c, f.eta[a - 1], P);
      Jet3 m = moment(f, a, 0, P);
      check_close(m.value(), pf.value, kEps, "n=0 equals pfq");
      // rho_{n+1} value = theta^(a) slot of rho_n
      for (std::size_t n = 0; n < 3; ++n) {
        Jet3 lo = moment(f, a, n, P), hi = moment(f, a, n + 1, P);
        BigReal slot = a == 1 ? lo.d(1, 0) : lo.d(0, 1);
        check_close(hi.value(), slot, kEps, "ladder");
      }
    }
  }
}

TEST_CASE("moment table matches the standalone op") {
  auto f = fx_gen_meixner2(P);
  MomentTable t(f);
  for (int a : {1, 2})
    for (std::size_t n = 0; n < 5; ++n) {
      Jet3 direct = moment(f, a, n, P);
      Jet3 cached = t.jet(a, n);
      check_close(cached.value(), direct.value(), kEps, "table value");
      check_close(cached.d(a == 1 ? 1 : 0, a == 1 ? 0 : 1),
                  direct.d(a == 1 ? 1 : 0, a == 1 ? 0 : 1), kEps, "table slot");
    }
}

TEST_CASE("pearson residual vanishes") {
  auto fc = fx_charlier(P);
  CHECK(pearson_residual(fc, 1, 0).exactly_zero());
  auto fgm = fx_gen_meixner2(P);
  check_small(pearson_residual(fgm, 2, 3).abs(), kEps, "gen-meixner2 k=3");
  for (const WeightFamily& f : {fx_charlier(P), fx_meixner2(P), fx_gen_charlier(P),
                                fx_gen_meixner2(P)}) {
    for (int a : {1, 2})
      for (unsigned long k = 0; k <= 40; ++k)
        check_small(pearson_residual(f, a, k).abs(), kEps, "pearson sweep");
    check_small(pearson_residual(f, 1, 50).abs(), kEps, "k=50");
  }
}

TEST_CASE("single-eta families on the diagonal reproduce single-eta weights") {
  auto f = fx_meixner2(P);
  CHECK(f.eta[0] == f.eta[1]);
  for (int a : {1, 2})
    for (unsigned long k = 0; k < 12; ++k) {
      BigReal direct = pochhammer(f.b[a - 1][0], k);
      BigReal etak(1, P), kfac(1, P);
      for (unsigned long i = 0; i < k; ++i) etak *= f.eta[0];
      for (unsigned long i = 2; i <= k; ++i) kfac *= BigReal(static_cast<long>(i), P);
      CHECK(weight_eval(f, a, k) == direct * etak / kfac);
    }
}

TEST_CASE("shift_params") {
  auto fgm = fx_gen_meixner2(P);
  auto up = shift_params(fgm, ShiftKind::B1, 1);
  CHECK(up.b[0][0] == BigReal(2, P));
  auto down = shift_params(fgm, ShiftKind::CDown, 1);
  CHECK(down.c[0] == BigReal::ratio(3, 2, P));  // theta root moves to 1/2
  auto up_c = shift_params(fgm, ShiftKind::CUp, 1);
  CHECK(up_c.c[0] == BigReal::ratio(7, 2, P));
  CHECK_THROWS_AS(shift_params(fx_charlier(P), ShiftKind::B1, 1), GuardError);
  // pole guard: c = 1 shifted down hits zero
  WeightFamily f = fx_gen_charlier(P);
  f.c[0] = BigReal(1, P);
  CHECK_THROWS_AS(shift_params(f, ShiftKind::CDown, 1), GuardError);
}

TEST_CASE("AT flags") {
  CHECK(fx_charlier(P).at_flag() == ATFlag::SharedParamsDistinctEta);
  CHECK(fx_gen_charlier(P).at_flag() == ATFlag::SharedParamsDistinctEta);
  CHECK(fx_meixner2(P).at_flag() == ATFlag::SharedEtaDistinctB);
  CHECK(fx_gen_meixner2(P).at_flag() == ATFlag::SharedEtaDistinctB);
  WeightFamily odd = fx_meixner2(P);
  odd.eta[1] = BigReal::ratio(1, 3, P);  // outside both patterns: flagged, not rejected
  CHECK(odd.at_flag() == ATFlag::Unverified);
  odd.check_convergence();
}

TEST_CASE("convergence guard") {
  WeightFamily f = fx_meixner2(P);
  f.eta[0] = f.eta[1] = BigReal(2, P);  // one extra b parameter needs eta < 1
  CHECK_THROWS_AS(f.check_convergence(), GuardError);
  CHECK_THROWS_AS(MomentTable{f}, GuardError);
}

TEST_CASE("make_family parses overrides") {
  auto f = make_family("charlier", P, std::string("0.5"), std::string("1/3"), std::nullopt,
                       std::nullopt, std::nullopt, std::nullopt);
  CHECK(f.eta[0] == BigReal::ratio(1, 2, P));
  CHECK(f.eta[1] == BigReal::ratio(1, 3, P));
  CHECK_THROWS(make_family("charlier", P, std::string("1//2"), std::nullopt, std::nullopt,
                           std::nullopt, std::nullopt, std::nullopt));
  CHECK_THROWS_AS(make_family("nope", P, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                              std::nullopt, std::nullopt),
                  GuardError);
  auto g = make_family("gen-meixner2", P, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                       std::nullopt, std::string("3/2"));
  CHECK(g.c[0] == BigReal::ratio(5, 2, P));  // stored denominator parameter is c+1
}
