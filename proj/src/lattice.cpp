#include "stepline/lattice.hpp"

namespace stepline {

ShiftGrid::ShiftGrid(WeightFamily base, ShiftSpec spec, LabCache& cache)
    : base_(std::move(base)), spec_(spec), cache_(cache),
      d_hat_(base_.precision), d_check_(base_.precision), d_tilde_(base_.precision) {
  BigReal one(1, base_.precision);
  if (!base_.b[0].empty()) d_hat_ = base_.b[0].at(spec_.r - 1);
  if (!base_.b[1].empty()) d_check_ = base_.b[1].at(spec_.q - 1);
  if (!base_.c.empty()) d_tilde_ = base_.c.at(spec_.s - 1) - one;
}

Lab& ShiftGrid::at(int hat, int check, int tilde) {
  WeightFamily f = base_;
  for (int i = 0; i < hat; ++i) f = shift_params(f, ShiftKind::B1, spec_.r);
  for (int i = 0; i < check; ++i) f = shift_params(f, ShiftKind::B2, spec_.q);
  for (int i = 0; i < tilde; ++i) f = shift_params(f, ShiftKind::CDown, spec_.s);
  return cache_.get(f);
}

LatticeFields lattice_fields(Lab& lab, std::size_t n_max) {
  lab.fact(2 * n_max + 4);
  LatticeFields out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.u.push_back(lab.h(2 * n));
    out.v.push_back(lab.h(2 * n + 1));
    out.f.push_back(lab.s_band(1, 2 * n).value());
    out.g.push_back(lab.s_band(1, 2 * n + 1).value());
    out.F.push_back(lab.s_band(2, 2 * n).value());
    out.G.push_back(lab.s_band(2, 2 * n + 1).value());
  }
  return out;
}

namespace {
struct FieldPack {
  LatticeFields base, one, two, both;  // plain, first-shift, second-shift, both
};

FieldPack pack_fields(ShiftGrid& grid, std::size_t depth, NC3System sys) {
  FieldPack p;
  switch (sys) {
    case NC3System::HatTilde:
      p.base = lattice_fields(grid.at(0, 0, 0), depth);
      p.one = lattice_fields(grid.at(1, 0, 0), depth);   // hat
      p.two = lattice_fields(grid.at(0, 0, 1), depth);   // tilde
      p.both = lattice_fields(grid.at(1, 0, 1), depth);
      break;
    case NC3System::CheckTilde:
      p.base = lattice_fields(grid.at(0, 0, 0), depth);
      p.one = lattice_fields(grid.at(0, 1, 0), depth);   // check
      p.two = lattice_fields(grid.at(0, 0, 1), depth);   // tilde
      p.both = lattice_fields(grid.at(0, 1, 1), depth);
      break;
    case NC3System::HatCheck:
      p.base = lattice_fields(grid.at(0, 0, 0), depth);
      p.one = lattice_fields(grid.at(1, 0, 0), depth);   // hat
      p.two = lattice_fields(grid.at(0, 1, 0), depth);   // check
      p.both = lattice_fields(grid.at(1, 1, 0), depth);
      break;
  }
  return p;
}
}  // namespace

std::array<BigReal, 4> nc3d_residuals(ShiftGrid& grid, std::size_t n, NC3System sys) {
  long prec = grid.at(0, 0, 0).precision();
  FieldPack p = pack_fields(grid, n + 2, sys);
  BigReal one(1, prec);

  // Name the pieces by their roles in the systems. For HatTilde,
  // "h" is the hat family and "t" the tilde one; CheckTilde reads check for
  // hat; HatCheck reads hat, check.
  const LatticeFields &A = p.base, &H = p.one, &T = p.two, &HT = p.both;

  auto at = [&](const std::vector<BigReal>& x, std::size_t i) { return x[n + i]; };

  std::array<BigReal, 4> out{BigReal(0, prec), BigReal(0, prec), BigReal(0, prec),
                             BigReal(0, prec)};
  switch (sys) {
    case NC3System::HatTilde: {
      BigReal dh = grid.d_hat(), dt = grid.d_tilde();
      BigReal e1 = at(A.g, 0) * (at(T.f, 0) - at(H.f, 0)) +
                   at(T.g, 0) * (at(HT.f, 0) - at(T.f, 0)) +
                   at(H.g, 0) * (at(H.f, 0) - at(HT.f, 0)) -
                   (one / dt) * (at(H.u, 1) / at(HT.u, 0) - at(A.u, 1) / at(T.u, 0)) -
                   (one / dh) * (at(A.u, 1) / at(H.u, 0) - at(T.u, 1) / at(HT.u, 0));
      BigReal e2 = at(A.f, 1) * (at(H.g, 0) - at(T.g, 0)) +
                   at(T.f, 1) * (at(T.g, 0) - at(HT.g, 0)) +
                   at(H.f, 1) * (at(HT.g, 0) - at(H.g, 0)) -
                   (one / dt) * (at(A.v, 1) / at(T.v, 0) - at(H.v, 1) / at(HT.v, 0));
      BigReal e3 = (one / dt) * (at(H.u, 1) / at(HT.u, 0)) * (at(H.f, 1) - at(A.f, 1)) +
                   (one / dh) * (at(T.u, 1) / at(HT.u, 0)) * (at(A.f, 1) - at(T.f, 1)) +
                   (one / dt) * (at(A.v, 1) / at(T.v, 0)) * (at(T.f, 0) - at(HT.f, 0));
      BigReal e4 = (one / dh) * (at(A.u, 2) / at(H.u, 1)) * (at(H.g, 0) - at(HT.g, 0)) +
                   (one / dt) * (at(A.u, 2) / at(T.u, 1)) * (at(HT.g, 0) - at(T.g, 0)) +
                   (one / dt) * (at(H.v, 1) / at(HT.v, 0)) * (at(A.g, 1) - at(H.g, 1));
      out = {e1.abs(), e2.abs(), e3.abs(), e4.abs()};
      break;
    }
    case NC3System::CheckTilde: {
      BigReal dc = grid.d_check(), dt = grid.d_tilde();
      const LatticeFields &C = H;  // check family plays the marked role
      const LatticeFields &CT = HT;
      BigReal e1 = at(A.g, 0) * (at(T.f, 0) - at(C.f, 0)) +
                   at(T.g, 0) * (at(CT.f, 0) - at(T.f, 0)) +
                   at(C.g, 0) * (at(C.f, 0) - at(CT.f, 0)) -
                   (one / dt) * (at(C.u, 1) / at(CT.u, 0) - at(A.u, 1) / at(T.u, 0));
      BigReal e2 = at(A.f, 1) * (at(T.g, 0) - at(C.g, 0)) +
                   at(T.f, 1) * (at(CT.g, 0) - at(T.g, 0)) +
                   at(C.f, 1) * (at(C.g, 0) - at(CT.g, 0)) -
                   (one / dt) * (at(C.v, 1) / at(CT.v, 0) - at(A.v, 1) / at(T.v, 0)) -
                   (one / dc) * (at(A.v, 1) / at(C.v, 0) - at(T.v, 1) / at(CT.v, 0));
      BigReal e3 = (one / dt) * (at(C.u, 1) / at(CT.u, 0)) * (at(A.f, 1) - at(C.f, 1)) +
                   (one / dc) * (at(A.v, 1) / at(C.v, 0)) * (at(C.f, 0) - at(CT.f, 0)) +
                   (one / dt) * (at(A.v, 1) / at(T.v, 0)) * (at(CT.f, 0) - at(T.f, 0));
      BigReal e4 = (one / dt) * (at(A.u, 2) / at(T.u, 1)) * (at(T.g, 0) - at(CT.g, 0)) +
                   (one / dc) * (at(T.v, 1) / at(CT.v, 0)) * (at(A.g, 1) - at(T.g, 1)) +
                   (one / dt) * (at(C.v, 1) / at(CT.v, 0)) * (at(C.g, 1) - at(A.g, 1));
      out = {e1.abs(), e2.abs(), e3.abs(), e4.abs()};
      break;
    }
    case NC3System::HatCheck: {
      BigReal dh = grid.d_hat(), dc = grid.d_check();
      const LatticeFields &C = T;  // second direction is the check family
      const LatticeFields &HC = HT;
      BigReal e1 = (one / dh) * (at(C.u, 1) / at(HC.u, 0)) * (at(A.f, 1) - at(C.f, 1)) +
                   (one / dc) * (at(A.v, 1) / at(C.v, 0)) * (at(C.f, 0) - at(HC.f, 0));
      BigReal e2 = (one / dh) * (at(A.u, 2) / at(H.u, 1)) * (at(HC.g, 0) - at(H.g, 0)) +
                   (one / dc) * (at(H.v, 1) / at(HC.v, 0)) * (at(H.g, 1) - at(A.g, 1));
      BigReal e3 = at(A.g, 0) * (at(C.f, 0) - at(H.f, 0)) +
                   at(C.g, 0) * (at(HC.f, 0) - at(C.f, 0)) +
                   at(H.g, 0) * (at(H.f, 0) - at(HC.f, 0)) -
                   (one / dh) * (at(A.u, 1) / at(H.u, 0) - at(C.u, 1) / at(HC.u, 0));
      BigReal e4 = at(A.f, 1) * (at(C.g, 0) - at(H.g, 0)) +
                   at(C.f, 1) * (at(HC.g, 0) - at(C.g, 0)) +
                   at(H.f, 1) * (at(H.g, 0) - at(HC.g, 0)) -
                   (one / dc) * (at(H.v, 1) / at(HC.v, 0) - at(A.v, 1) / at(C.v, 0));
      out = {e1.abs(), e2.abs(), e3.abs(), e4.abs()};
      break;
    }
  }
  return out;
}

namespace {
struct TauFields {
  std::vector<BigReal> u, v, f, g;
};

TauFields tau_fields_literal(Lab& lab, std::size_t n_max) {
  lab.fact(2 * n_max + 3);
  long prec = lab.precision();
  TauFields out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.u.push_back(lab.tau(2 * n + 1) / lab.tau(2 * n));
    out.v.push_back(lab.tau(2 * n + 2) / lab.tau(2 * n + 1));
    out.f.push_back(2 * n == 0 ? BigReal(0, prec)
                               : lab.tau_assoc(2 * n, 1) / lab.tau(2 * n));
    out.g.push_back(lab.tau_assoc(2 * n + 1, 1) / lab.tau(2 * n + 1));
  }
  return out;
}

TauFields tau_fields_reconciled(Lab& lab, std::size_t n_max) {
  lab.fact(2 * n_max + 4);
  TauFields out;
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.u.push_back(lab.tau(2 * n + 1) / lab.tau(2 * n));
    out.v.push_back(lab.tau(2 * n + 2) / lab.tau(2 * n + 1));
    out.f.push_back(-(lab.tau_assoc(2 * n + 1, 1) / lab.tau(2 * n + 1)));
    out.g.push_back(-(lab.tau_assoc(2 * n + 2, 1) / lab.tau(2 * n + 2)));
  }
  return out;
}

// The four equations of the b^(2)/c system on a field quadruple
// (base, checked, tilded, both).
std::array<BigReal, 4> check_tilde_equations(const TauFields& A, const TauFields& C,
                                             const TauFields& T, const TauFields& CT,
                                             const BigReal& dc, const BigReal& dt,
                                             std::size_t n, long prec) {
  BigReal one(1, prec);
  auto at = [&](const std::vector<BigReal>& x, std::size_t i) { return x[n + i]; };
  BigReal e1 = at(A.g, 0) * (at(T.f, 0) - at(C.f, 0)) +
               at(T.g, 0) * (at(CT.f, 0) - at(T.f, 0)) +
               at(C.g, 0) * (at(C.f, 0) - at(CT.f, 0)) -
               (one / dt) * (at(C.u, 1) / at(CT.u, 0) - at(A.u, 1) / at(T.u, 0));
  BigReal e2 = at(A.f, 1) * (at(T.g, 0) - at(C.g, 0)) +
               at(T.f, 1) * (at(CT.g, 0) - at(T.g, 0)) +
               at(C.f, 1) * (at(C.g, 0) - at(CT.g, 0)) -
               (one / dt) * (at(C.v, 1) / at(CT.v, 0) - at(A.v, 1) / at(T.v, 0)) -
               (one / dc) * (at(A.v, 1) / at(C.v, 0) - at(T.v, 1) / at(CT.v, 0));
  BigReal e3 = (one / dt) * (at(C.u, 1) / at(CT.u, 0)) * (at(A.f, 1) - at(C.f, 1)) +
               (one / dc) * (at(A.v, 1) / at(C.v, 0)) * (at(C.f, 0) - at(CT.f, 0)) +
               (one / dt) * (at(A.v, 1) / at(T.v, 0)) * (at(CT.f, 0) - at(T.f, 0));
  BigReal e4 = (one / dt) * (at(A.u, 2) / at(T.u, 1)) * (at(T.g, 0) - at(CT.g, 0)) +
               (one / dc) * (at(T.v, 1) / at(CT.v, 0)) * (at(A.g, 1) - at(T.g, 1)) +
               (one / dt) * (at(C.v, 1) / at(CT.v, 0)) * (at(C.g, 1) - at(A.g, 1));
  return {e1.abs(), e2.abs(), e3.abs(), e4.abs()};
}

// The commonly quoted equations for this system (hat-tilde structural
// pattern with the b^(2) family in the hatted role); the second one also
// in the sign variant completing the difference pattern of its siblings.
std::array<BigReal, 5> literal_equations(const TauFields& A, const TauFields& H,
                                         const TauFields& T, const TauFields& HT,
                                         const BigReal& dh, const BigReal& dt, std::size_t n,
                                         long prec) {
  BigReal one(1, prec);
  auto at = [&](const std::vector<BigReal>& x, std::size_t i) { return x[n + i]; };
  BigReal e1 = at(A.g, 0) * (at(T.f, 0) - at(H.f, 0)) +
               at(T.g, 0) * (at(HT.f, 0) - at(T.f, 0)) +
               at(H.g, 0) * (at(H.f, 0) - at(HT.f, 0)) -
               (one / dt) * (at(H.u, 1) / at(HT.u, 0) - at(A.u, 1) / at(T.u, 0)) -
               (one / dh) * (at(A.u, 1) / at(H.u, 0) - at(T.u, 1) / at(HT.u, 0));
  BigReal e2_plus = at(A.f, 1) * (at(T.g, 0) + at(H.g, 0)) +
                       at(T.f, 1) * (at(HT.g, 0) - at(T.g, 0)) +
                       at(H.f, 1) * (at(H.g, 0) - at(HT.g, 0)) -
                       (one / dt) * (at(H.v, 1) / at(HT.v, 0) - at(A.v, 1) / at(T.v, 0));
  BigReal e2_minus = e2_plus - BigReal(2, prec) * at(A.f, 1) * at(H.g, 0);
  BigReal e3 = (one / dt) * (at(H.u, 1) / at(HT.u, 0)) * (at(H.f, 1) - at(A.f, 1)) +
               (one / dh) * (at(T.u, 1) / at(HT.u, 0)) * (at(A.f, 1) - at(T.f, 1)) +
               (one / dt) * (at(A.v, 1) / at(T.v, 0)) * (at(T.f, 0) - at(HT.f, 0));
  BigReal e4 = (one / dh) * (at(A.u, 2) / at(H.u, 1)) * (at(H.g, 0) - at(HT.g, 0)) +
               (one / dt) * (at(A.u, 2) / at(T.u, 1)) * (at(HT.g, 0) - at(T.g, 0)) +
               (one / dt) * (at(T.u, 1) / at(HT.u, 0)) * (at(A.g, 1) - at(H.g, 1));
  return {e1.abs(), e2_plus.abs(), e2_minus.abs(), e3.abs(), e4.abs()};
}
}  // namespace

NCTauReport nc_tau_residuals(ShiftGrid& grid, std::size_t n) {
  long prec = grid.at(0, 0, 0).precision();
  std::size_t depth = n + 2;
  BigReal dc = grid.d_check(), dt = grid.d_tilde();

  TauFields la = tau_fields_literal(grid.at(0, 0, 0), depth);
  TauFields lc = tau_fields_literal(grid.at(0, 1, 0), depth);
  TauFields lt = tau_fields_literal(grid.at(0, 0, 1), depth);
  TauFields lct = tau_fields_literal(grid.at(0, 1, 1), depth);
  auto lit = literal_equations(la, lc, lt, lct, dc, dt, n, prec);
  BigReal lit_worst = max(max(lit[0], max(lit[1], lit[2])), max(lit[3], lit[4]));

  TauFields ra = tau_fields_reconciled(grid.at(0, 0, 0), depth);
  TauFields rc = tau_fields_reconciled(grid.at(0, 1, 0), depth);
  TauFields rt = tau_fields_reconciled(grid.at(0, 0, 1), depth);
  TauFields rct = tau_fields_reconciled(grid.at(0, 1, 1), depth);
  auto rec = check_tilde_equations(ra, rc, rt, rct, dc, dt, n, prec);
  BigReal rec_worst = max(max(rec[0], rec[1]), max(rec[2], rec[3]));

  NCTauReport rep{{BigReal(0, prec), BigReal(0, prec), BigReal(0, prec), BigReal(0, prec)},
                  false, false};
  if (rec_worst < lit_worst) {
    rep.residuals = rec;
    rep.reconciled_map = true;
  } else {
    bool plus = lit[1] < lit[2];
    rep.residuals = {lit[0], plus ? lit[1] : lit[2], lit[3], lit[4]};
    rep.plus_sign_used = plus;
  }
  return rep;
}

std::array<BigReal, 6> nc2d_residuals(ShiftGrid& grid, std::size_t n, NC2System sys) {
  long prec = grid.at(0, 0, 0).precision();
  BigReal one(1, prec);
  std::size_t depth = n + 2;
  LatticeFields A = lattice_fields(grid.at(0, 0, 0), depth);
  LatticeFields S = sys == NC2System::TildeBar
                        ? lattice_fields(grid.at(0, 0, 1), depth)
                        : sys == NC2System::CheckBar ? lattice_fields(grid.at(0, 1, 0), depth)
                                                     : lattice_fields(grid.at(1, 0, 0), depth);
  BigReal d = sys == NC2System::TildeBar
                  ? grid.d_tilde()
                  : sys == NC2System::CheckBar ? grid.d_check() : grid.d_hat();

  auto at = [&](const std::vector<BigReal>& x, std::size_t i) { return x[n + i]; };
  std::array<BigReal, 6> out{BigReal(0, prec), BigReal(0, prec), BigReal(0, prec),
                             BigReal(0, prec), BigReal(0, prec), BigReal(0, prec)};

  switch (sys) {
    case NC2System::TildeBar: {
      const LatticeFields& T = S;
      BigReal s1 = d * (at(A.G, 0) - at(A.F, 1) + at(T.F, 1) - at(T.G, 0) +
                        at(T.f, 1) * (at(A.g, 1) - at(T.g, 1)) +
                        at(T.g, 0) * (at(T.f, 1) - at(A.f, 1))) -
                   (at(A.v, 1) / at(T.v, 0) - at(A.u, 2) / at(T.u, 1));
      BigReal s2 = d * (at(A.F, 0) - at(A.G, 0) + at(T.G, 0) - at(T.F, 0) +
                        at(T.g, 0) * (at(A.f, 1) - at(T.f, 1)) +
                        at(T.f, 0) * (at(T.g, 0) - at(A.g, 0))) -
                   (at(A.u, 1) / at(T.u, 0) - at(A.v, 1) / at(T.v, 0));
      BigReal s3 = at(A.u, 2) / at(T.u, 1) * (at(T.g, 0) - at(T.f, 1)) +
                   d * (at(A.g, 1) - at(T.g, 1)) *
                       (at(T.G, 0) - at(T.F, 1) - at(T.f, 1) * (at(T.f, 1) - at(T.g, 1))) +
                   d * at(T.u, 2) / at(T.u, 1) -
                   (d * at(A.u, 2) / at(A.u, 1) +
                    at(A.u, 2) / at(T.u, 1) * (at(A.g, 1) - at(A.f, 2)) +
                    d * (at(A.f, 1) - at(T.f, 1)) *
                        (at(A.F, 1) - at(A.G, 1) - at(A.g, 1) * (at(A.g, 1) - at(A.f, 2))));
      BigReal s4 = at(A.v, 1) / at(T.v, 0) * (at(T.f, 0) - at(T.g, 0)) +
                   d * (at(A.f, 1) - at(T.f, 1)) *
                       (at(T.F, 0) - at(T.G, 0) - at(T.g, 0) * (at(T.g, 0) - at(T.f, 1))) +
                   d * at(T.v, 1) / at(T.v, 0) -
                   (d * at(A.v, 1) / at(A.v, 0) +
                    at(A.v, 1) / at(T.v, 0) * (at(A.f, 1) - at(A.g, 1)) +
                    d * (at(A.g, 0) - at(T.g, 0)) *
                        (at(A.G, 0) - at(A.F, 1) - at(A.f, 1) * (at(A.f, 1) - at(A.g, 1))));
      // the middle difference is doubly barred (as in the sibling system);
      // middle difference sits two half-steps up, like its sibling system
      BigReal s5 = at(A.v, 2) / at(T.v, 1) *
                       (at(T.G, 0) - at(T.F, 1) - at(T.f, 1) * (at(T.f, 1) - at(T.g, 1))) +
                   d * at(T.u, 2) / at(T.u, 1) * (at(A.f, 2) - at(T.f, 2)) -
                   (d * at(A.v, 2) / at(A.v, 1) * (at(A.f, 1) - at(T.f, 1)) +
                    at(A.u, 2) / at(T.u, 1) *
                        (at(A.G, 1) - at(A.F, 2) - at(A.f, 2) * (at(A.f, 2) - at(A.g, 2))));
      BigReal s6 = at(A.u, 2) / at(T.u, 1) *
                       (at(T.F, 0) - at(T.G, 0) - at(T.g, 0) * (at(T.g, 0) - at(T.f, 1))) +
                   d * at(T.v, 1) / at(T.v, 0) * (at(A.g, 1) - at(T.g, 1)) -
                   (d * at(A.u, 2) / at(A.u, 1) * (at(A.g, 0) - at(T.g, 0)) +
                    at(A.v, 1) / at(T.v, 0) *
                        (at(A.F, 1) - at(A.G, 1) - at(A.g, 1) * (at(A.g, 1) - at(A.f, 2))));
      out = {s1.abs(), s2.abs(), s3.abs(), s4.abs(), s5.abs(), s6.abs()};
      break;
    }
    case NC2System::CheckBar: {
      const LatticeFields& C = S;
      BigReal q1 = at(A.v, 1) / at(C.v, 0) -
                   d * (at(A.G, 0) - at(A.F, 1) - at(C.G, 0) + at(C.F, 1) +
                        at(C.f, 1) * (at(A.g, 1) - at(C.g, 1)) +
                        at(C.g, 0) * (at(C.f, 1) - at(A.f, 1)));
      BigReal q2 = d * (at(A.F, 0) - at(A.G, 0) - at(C.F, 0) + at(C.G, 0) +
                        at(C.g, 0) * (at(A.f, 1) - at(C.f, 1)) +
                        at(C.f, 0) * (at(C.g, 0) - at(A.g, 0))) +
                   at(A.v, 1) / at(C.v, 0);
      BigReal q3 = at(C.u, 2) / at(C.u, 1) +
                   (at(A.g, 1) - at(C.g, 1)) *
                       (at(C.G, 0) - at(C.F, 1) - at(C.f, 1) * (at(C.f, 1) - at(C.g, 1))) -
                   (at(A.u, 2) / at(A.u, 1) +
                    (at(A.f, 1) - at(C.f, 1)) *
                        (at(A.F, 1) - at(A.G, 1) - at(A.g, 1) * (at(A.g, 1) - at(A.f, 2))));
      BigReal q4 = at(A.v, 1) / at(C.v, 0) * (at(C.f, 0) - at(C.g, 0)) +
                   d * (at(A.f, 1) - at(C.f, 1)) *
                       (at(C.F, 0) - at(C.G, 0) - at(C.g, 0) * (at(C.g, 0) - at(C.f, 1))) +
                   d * at(C.v, 1) / at(C.v, 0) -
                   (d * at(A.v, 1) / at(A.v, 0) +
                    d * (at(A.g, 0) - at(C.g, 0)) *
                        (at(A.G, 0) - at(A.F, 1) - at(A.f, 1) * (at(A.f, 1) - at(A.g, 1))) +
                    at(A.v, 1) / at(C.v, 0) * (at(A.f, 1) - at(A.g, 1)));
      BigReal q5 = at(A.v, 2) / at(C.v, 1) *
                       (at(C.G, 0) - at(C.F, 1) - at(C.f, 1) * (at(C.f, 1) - at(C.g, 1))) +
                   d * at(C.u, 2) / at(C.u, 1) * (at(A.f, 2) - at(C.f, 2)) -
                   d * at(A.v, 2) / at(A.v, 1) * (at(A.f, 1) - at(C.f, 1));
      BigReal q6 = d * at(C.v, 1) / at(C.v, 0) * (at(A.g, 1) - at(C.g, 1)) -
                   (d * at(A.u, 2) / at(A.u, 1) * (at(A.g, 0) - at(C.g, 0)) +
                    at(A.v, 1) / at(C.v, 0) *
                        (at(A.F, 1) - at(A.G, 1) - at(A.g, 1) * (at(A.g, 1) - at(A.f, 2))));
      out = {q1.abs(), q2.abs(), q3.abs(), q4.abs(), q5.abs(), q6.abs()};
      break;
    }
    case NC2System::HatBar: {
      const LatticeFields& H = S;
      BigReal r1 = d * (at(A.G, 0) - at(A.F, 1) - at(H.G, 0) + at(H.F, 1) +
                        at(H.g, 0) * (at(H.f, 1) - at(A.f, 1)) +
                        at(H.f, 1) * (at(A.g, 1) - at(H.g, 1))) +
                   at(A.u, 2) / at(H.u, 1);
      // the intertwining identity carries the unbarred hatted F here
      BigReal r2 = d * (at(A.F, 0) - at(A.G, 0) - at(H.F, 0) + at(H.G, 0) +
                        at(H.f, 0) * (at(H.g, 0) - at(A.g, 0)) +
                        at(H.g, 0) * (at(A.f, 1) - at(H.f, 1))) -
                   at(A.u, 1) / at(H.u, 0);
      BigReal r3 = d * (at(H.u, 2) / at(H.u, 1) +
                        (at(A.g, 1) - at(H.g, 1)) *
                            (at(H.G, 0) - at(H.F, 1) - at(H.f, 1) * (at(H.f, 1) - at(H.g, 1)))) +
                   at(A.u, 2) / at(H.u, 1) * (at(H.g, 0) - at(H.f, 1)) -
                   (at(A.u, 2) / at(H.u, 1) * (at(A.g, 1) - at(A.f, 2)) +
                    d * (at(A.u, 2) / at(A.u, 1) +
                         (at(A.f, 1) - at(H.f, 1)) *
                             (at(A.F, 1) - at(A.G, 1) - at(A.g, 1) * (at(A.g, 1) - at(A.f, 2)))));
      BigReal r4 = at(H.v, 1) / at(H.v, 0) +
                   (at(A.f, 1) - at(H.f, 1)) *
                       (at(H.F, 0) - at(H.G, 0) - at(H.g, 0) * (at(H.g, 0) - at(H.f, 1))) -
                   (at(A.v, 1) / at(A.v, 0) +
                    (at(A.g, 0) - at(H.g, 0)) *
                        (at(A.G, 0) - at(A.F, 1) - at(A.f, 1) * (at(A.f, 1) - at(A.g, 1))));
      BigReal r5 = d * at(H.u, 1) / at(H.u, 0) * (at(A.f, 1) - at(H.f, 1)) -
                   (d * at(A.v, 1) / at(A.v, 0) * (at(A.f, 0) - at(H.f, 0)) +
                    at(A.u, 1) / at(H.u, 0) *
                        (at(A.G, 0) - at(A.F, 1) - at(A.f, 1) * (at(A.f, 1) - at(A.g, 1))));
      // the intertwining identity carries ubarbar/uhatbar as the first factor
      BigReal r6 = at(A.u, 2) / at(H.u, 1) *
                       (at(H.F, 0) - at(H.G, 0) - at(H.g, 0) * (at(H.g, 0) - at(H.f, 1))) +
                   d * at(H.v, 1) / at(H.v, 0) * (at(A.g, 1) - at(H.g, 1)) -
                   d * at(A.u, 2) / at(A.u, 1) * (at(A.g, 0) - at(H.g, 0));
      out = {r1.abs(), r2.abs(), r3.abs(), r4.abs(), r5.abs(), r6.abs()};
      break;
    }
  }
  return out;
}

ShiftCompatReport shift_compat_residuals(ShiftGrid& grid, std::size_t n) {
  Lab& base = grid.at(0, 0, 0);
  long prec = base.precision();
  const ShiftSpec& spec = grid.spec();

  auto omega_cap_of = [&](Lab& from, Lab& to) {
    // Omega = S(from) S(to)^-1, the banded change of basis with
    // Omega B(to) = B(from)
    return from.win_s(n) * to.win_s_inv(n);
  };

  Lab& hat = grid.at(1, 0, 0);
  Lab& chk = grid.at(0, 1, 0);
  Lab& til = grid.at(0, 0, 1);
  Lab& hat_til = grid.at(1, 0, 1);
  Lab& chk_til = grid.at(0, 1, 1);
  Lab& hat_chk = grid.at(1, 1, 0);

  ShiftCompatReport rep{BigReal(0, prec), BigReal(0, prec), BigReal(0, prec),
                        BigReal(0, prec), BigReal(0, prec), BigReal(0, prec)};

  // Omega^(s) Omega~^(r) = Omega^(r) Omega^^(s): both sides map B of the
  // doubly shifted family to B.
  rep.omega_cap_sr = Win::max_abs_diff(omega_cap_of(base, til) * omega_cap_of(til, hat_til),
                                       omega_cap_of(base, hat) * omega_cap_of(hat, hat_til));
  rep.omega_cap_sq = Win::max_abs_diff(omega_cap_of(base, til) * omega_cap_of(til, chk_til),
                                       omega_cap_of(base, chk) * omega_cap_of(chk, chk_til));
  rep.omega_cap_rq = Win::max_abs_diff(omega_cap_of(base, hat) * omega_cap_of(hat, hat_chk),
                                       omega_cap_of(base, chk) * omega_cap_of(chk, hat_chk));

  rep.intertwine_r = intertwine_residual(base, hat, ShiftKind::B1, spec.r, n);
  rep.intertwine_q = intertwine_residual(base, chk, ShiftKind::B2, spec.q, n);
  rep.intertwine_s = intertwine_residual(base, til, ShiftKind::CDown, spec.s, n);
  return rep;
}

BigReal intertwine_residual(Lab& base, Lab& shifted, ShiftKind kind, std::size_t index,
                            std::size_t n) {
  long prec = base.precision();
  auto t_transposed = [&](Lab& lab) {
    return lab.win_h_inv(n) * lab.win_stilde(n) *
               (win_shift_up_parity(n, 1, prec) + win_shift_up_parity(n, 2, prec)) *
               lab.win_stilde_inv(n) * lab.win_h(n);
  };
  auto cd = connection_matrices(base, shifted, kind, index, n);
  Win lhs = t_transposed(shifted) * cd.omega;
  Win rhs = cd.omega * t_transposed(base);
  return Win::max_abs_diff(lhs, rhs);
}

BigReal scalar_nc_residual(const WeightFamily& base, int a, std::size_t r, std::size_t s,
                           std::size_t n) {
  long prec = base.precision;
  auto hankel_h = [&](const WeightFamily& fam, std::size_t k) {
    MomentTable t(fam);
    std::size_t size = k + 2;
    Mat<BigReal> m(size, size, BigReal(prec));
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) m.at(i, j) = t.scalar(a, i + j);
    auto gb = gauss_borel(m, default_tolerance(prec, static_cast<long>(size)));
    return std::vector<BigReal>(gb.h.begin(), gb.h.end());
  };
  WeightFamily hat = shift_params(base, a == 1 ? ShiftKind::B1 : ShiftKind::B2, r);
  WeightFamily til = shift_params(base, ShiftKind::CDown, s);
  WeightFamily both = shift_params(hat, ShiftKind::CDown, s);

  auto u0 = hankel_h(base, n + 1);
  auto uh = hankel_h(hat, n + 1);
  auto ut = hankel_h(til, n + 1);
  auto uht = hankel_h(both, n + 1);

  // the two-weight system at v = g = 0 leaves the shift-weighted form; the
  // unweighted variant sometimes quoted does not balance
  BigReal one(1, prec);
  BigReal d_hat = base.b[a - 1].at(r - 1);
  BigReal d_til = base.c.at(s - 1) - one;
  BigReal res = (one / d_til) * (uh[n + 1] / uht[n] - u0[n + 1] / ut[n]) +
                (one / d_hat) * (u0[n + 1] / uh[n] - ut[n + 1] / uht[n]);
  return res.abs();
}

}  // namespace stepline
