#include "stepline/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"

namespace stepline {

namespace {
using nlohmann::json;

BigReal tenpow_neg(long e, long prec) {
  BigReal acc(1, prec), ten(10, prec);
  for (long i = 0; i < e; ++i) acc *= ten;
  return BigReal(1, prec) / acc;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};
}  // namespace

WeightFamily RunConfig::build_family() const {
  return make_family(family, precision, eta1, eta2, eta, b1, b2, c);
}

std::vector<std::string> RunConfig::suite_list() const {
  static const std::vector<std::string> all = {"moments", "tau",  "coeffs",
                                               "lf",      "toda", "lattice"};
  std::vector<std::string> out;
  for (const auto& s : suites) {
    if (s == "all") {
      for (const auto& a : all)
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
      continue;
    }
    if (std::find(all.begin(), all.end(), s) == all.end())
      throw GuardError("unknown suite: " + s);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

RunConfig config_from_json_text(const std::string& text) {
  json doc = json::parse(text);
  if (!doc.is_object()) throw GuardError("config must be a JSON object");
  RunConfig cfg;
  for (auto& [key, value] : doc.items()) {
    if (key == "family") cfg.family = value.get<std::string>();
    else if (key == "eta1") cfg.eta1 = value.get<std::string>();
    else if (key == "eta2") cfg.eta2 = value.get<std::string>();
    else if (key == "eta") cfg.eta = value.get<std::string>();
    else if (key == "b1") cfg.b1 = value.get<std::string>();
    else if (key == "b2") cfg.b2 = value.get<std::string>();
    else if (key == "c") cfg.c = value.get<std::string>();
    else if (key == "precision") cfg.precision = value.get<long>();
    else if (key == "nmax") cfg.n_max = value.get<std::size_t>();
    else if (key == "tol") cfg.tol = value.get<std::string>();
    else if (key == "suite") {
      if (value.is_array()) cfg.suites = value.get<std::vector<std::string>>();
      else cfg.suites = {value.get<std::string>()};
    } else if (key == "out") cfg.out_dir = value.get<std::string>();
    else if (key == "jobs") cfg.jobs = value.get<int>();
    else throw GuardError("unknown config key: " + key);
  }
  return cfg;
}

namespace {
struct SuiteContext {
  const RunConfig& cfg;
  WeightFamily family;
  std::optional<BigReal> tol_override;

  BigReal tol(long e) const {
    if (tol_override) return *tol_override;
    return tenpow_neg(e, family.precision);
  }
};

void add(std::vector<CheckRecord>& out, const SuiteContext&, const std::string& suite,
         const std::string& id, const std::string& anchor, const std::string& site,
         const BigReal& residual, const BigReal& tolerance, double secs) {
  CheckRecord r{suite, id, anchor, site, residual, tolerance, residual <= tolerance, secs};
  out.push_back(std::move(r));
}

std::vector<CheckRecord> run_moments(const SuiteContext& ctx) {
  std::vector<CheckRecord> out;
  Timer t;
  BigReal tol = ctx.tol(40);
  long prec = ctx.family.precision;
  BigReal worst(0, prec);
  for (int a : {1, 2})
    for (unsigned long k = 0; k <= 40; ++k)
      worst = max(worst, pearson_residual(ctx.family, a, k).abs());
  add(out, ctx, "moments", "pearson", "theta(k+1)w(k+1) = sigma(k)w(k)", "a=1,2 k<=40", worst,
      tol, t.seconds());

  Timer t2;
  MomentTable table(ctx.family);
  BigReal ladder(0, prec);
  for (int a : {1, 2})
    for (std::size_t n = 0; n + 1 <= ctx.cfg.n_max; ++n) {
      Jet3 lo = table.jet(a, n);
      BigReal slot = a == 1 ? lo.d(1, 0) : lo.d(0, 1);
      BigReal hi = table.scalar(a, n + 1);
      BigReal scale = max(BigReal(1, prec), hi.abs());
      ladder = max(ladder, (hi - slot).abs() / scale);
    }
  add(out, ctx, "moments", "theta-ladder", "rho_(n+1) equals the theta slot of rho_n",
      "n<=nmax", ladder, tol, t2.seconds());
  return out;
}

std::vector<CheckRecord> run_tau(const SuiteContext& ctx) {
  std::vector<CheckRecord> out;
  long prec = ctx.family.precision;
  Lab lab(ctx.family);
  std::size_t n_max = ctx.cfg.n_max;
  lab.fact(n_max + 1);

  Timer t0;
  BigReal wr(0, prec);
  for (std::size_t n = 0; n <= n_max; ++n) {
    BigReal w = lab.wronskian_tau(n), m = lab.tau(n);
    wr = max(wr, (w - m).abs() / max(BigReal(1, prec), max(w.abs(), m.abs())));
  }
  add(out, ctx, "tau", "wronskian", "tau from the interleaved derivative determinant equals "
      "the principal-minor tau", "n<=nmax", wr, ctx.tol(50), t0.seconds());

  Timer t1;
  BigReal hr(0, prec);
  for (std::size_t n = 0; n + 1 <= n_max; ++n) {
    BigReal lhs = lab.h(n), rhs = lab.tau(n + 1) / lab.tau(n);
    hr = max(hr, (lhs - rhs).abs() / max(BigReal(1, prec), lhs.abs()));
  }
  add(out, ctx, "tau", "h-ratio", "H_n = tau_(n+1)/tau_n", "n<nmax", hr, ctx.tol(40),
      t1.seconds());

  Timer t2;
  BigReal pr(0, prec);
  for (std::size_t n = 1; n <= n_max; ++n) {
    BigReal p1 = -(lab.tau_assoc(n, 1) / lab.tau(n));
    BigReal jet = -lab.tau_jet(n).dlog(1);
    pr = max(pr, (p1 - jet).abs() / max(BigReal(1, prec), jet.abs()));
  }
  add(out, ctx, "tau", "p1-dlog", "p^1_n = -theta log tau_n", "1<=n<=nmax", pr, ctx.tol(40),
      t2.seconds());
  return out;
}

std::vector<CheckRecord> run_coeffs(const SuiteContext& ctx) {
  std::vector<CheckRecord> out;
  long prec = ctx.family.precision;
  Lab lab(ctx.family);
  std::size_t n_max = std::min<std::size_t>(ctx.cfg.n_max, 8);

  Timer t0;
  BigReal ortho(0, prec);
  for (std::size_t n = 1; n <= n_max; ++n)
    ortho = max(ortho, orthogonality_residuals(lab, n).max_abs);
  add(out, ctx, "coeffs", "orthogonality", "type II and type I orthogonality sums vanish",
      "n<=min(nmax,8)", ortho, ctx.tol(40), t0.seconds());

  Timer t1;
  std::vector<BigReal> zs;
  for (int z = 0; z <= 6; ++z) zs.push_back(BigReal(z, prec));
  BigReal rec(0, prec);
  for (std::size_t n = 0; n + 1 <= n_max; ++n) rec = max(rec, recurrence_residual(lab, n, zs));
  add(out, ctx, "coeffs", "recurrence", "z B_n = B_(n+1) + alpha_n B_n + beta_n B_(n-1) + "
      "gamma_n B_(n-2)", "n<nmax z in 0..6", rec, ctx.tol(40), t1.seconds());

  Timer t2;
  auto rep = pascal_shift_residuals(lab, n_max + 2, BigReal(2, prec));
  BigReal pas = max(max(rep.type_ii_shift, rep.type_ii_unshift),
                    max(max(rep.type_i_shift[0], rep.type_i_shift[1]),
                        max(rep.type_i_unshift[0], rep.type_i_unshift[1])));
  add(out, ctx, "coeffs", "pascal-shift", "B(z+-1) and A(z+-1) through the dressed Pascal "
      "matrices", "z=2", pas, ctx.tol(40), t2.seconds());
  return out;
}

std::vector<CheckRecord> run_lf(const SuiteContext& ctx) {
  std::vector<CheckRecord> out;
  long prec = ctx.family.precision;
  Lab lab(ctx.family);
  std::size_t n_max = ctx.cfg.n_max;

  Timer t0;
  auto rep = lf_consistency(lab, n_max);
  bool closed = rep.kind == LFKind::Charlier || rep.kind == LFKind::Meixner2;
  const char* names[3] = {"alpha", "beta", "gamma"};
  for (int w = 0; w < 3; ++w) {
    BigReal dev(0, prec);
    for (std::size_t k = rep.first_predicted; k <= n_max; ++k)
      dev = max(dev, rep.rel_deviation(k, w));
    add(out, ctx, "lf", std::string(closed ? "closed-forms." : "recursions.") + names[w],
        std::string(names[w]) + (closed ? " closed form matches the factorization"
                                        : " recursion matches the factorization"),
        "n<=nmax", dev, ctx.tol(closed ? 40 : 35), w == 0 ? t0.seconds() : 0.0);
  }
  if (rep.seed_fallback)
    add(out, ctx, "lf", "seed-fallback", "recursion reseeded from factorization at n=1", "",
        BigReal(1, prec), BigReal(0, prec), 0.0);

  Timer t1;
  std::size_t wn = std::max<std::size_t>(n_max, 8);
  Win a = lf_matrix(lab, wn);
  Win b = lf_matrix_dual(lab, wn);
  add(out, ctx, "lf", "structure-dual", "Pi^-1 theta(T) equals the sigma-side construction",
      "window", Win::max_abs_diff(a, b), ctx.tol(40), t1.seconds());

  Timer t2;
  long lower = 2 * lab.family().sigma_degree();
  long upper = lab.family().theta_degree();
  add(out, ctx, "lf", "bandedness", "structure matrix is banded (2M, deg theta)", "window",
      bandedness_residual(a, lower, upper), ctx.tol(40), t2.seconds());

  Timer t3;
  add(out, ctx, "lf", "compat-i", "[Psi, T] = Psi", "window", compat_I_residual(lab, wn),
      ctx.tol(35), t3.seconds());
  return out;
}

std::vector<CheckRecord> run_toda(const SuiteContext& ctx) {
  std::vector<CheckRecord> out;
  long prec = ctx.family.precision;
  Lab lab(ctx.family);
  std::size_t n_max = ctx.cfg.n_max;

  Timer t0;
  auto flow = theta_flow(lab, n_max + 2);
  BigReal fl = max(max(flow.dprin, max(flow.sub, flow.super)),
                   max(max(flow.satow[0], flow.satow[1]), max(flow.s_bands, flow.stilde_bands)));
  add(out, ctx, "toda", "wave-structure", "flow matrices carry the recursion bands", "window",
      fl, ctx.tol(35), t0.seconds());

  Timer t1;
  auto rows = toda2_residual(lab, std::min<std::size_t>(n_max, 6));
  BigReal tr(0, prec);
  for (auto& r : rows) tr = max(tr, max(r.first, r.second));
  add(out, ctx, "toda", "two-equation", "theta q_n = f_(n-1) - f_n and the second-order flow "
      "equation", "n<=min(nmax,6)", tr, ctx.tol(30), t1.seconds());

  Timer t2;
  BigReal pde(0, prec);
  for (std::size_t n = 1; n <= std::min<std::size_t>(n_max, 6); ++n)
    pde = max(pde, tau_pde_residual(lab, n));
  add(out, ctx, "toda", "third-order", "third-order differential-difference equation for tau",
      "1<=n<=min(nmax,6)", pde, ctx.tol(30), t2.seconds());

  Timer t3;
  MomentTable table(ctx.family);
  BigReal sw(0, prec);
  for (std::size_t n = 1; n <= 4; ++n)
    sw = max(sw, single_weight_toda_residual(table, 1, n));
  add(out, ctx, "toda", "single-weight", "one-weight degeneration gives the second-order "
      "flow equation", "n<=4", sw, ctx.tol(30), t3.seconds());

  Timer t4;
  auto abc = abc_toda_residual(lab, n_max);
  BigReal ar(0, prec);
  for (auto& r : abc) ar = max(ar, max(r.alpha, max(r.beta, r.gamma)));
  add(out, ctx, "toda", "coefficient-system", "theta flow of alpha, beta, gamma", "n<=nmax",
      ar, ctx.tol(35), t4.seconds());

  Timer t5;
  auto lax = lax_residual(lab, n_max + 2);
  add(out, ctx, "toda", "lax", "theta T = [T_+, T]", "window", max(lax.lax, lax.splitting),
      ctx.tol(35), t5.seconds());

  Timer t6;
  auto cii = compat_II_residual(lab, n_max + 4);
  add(out, ctx, "toda", "compat-ii", "theta Psi = [phi, Psi] and the transposed companion",
      "window", max(cii.direct, max(cii.via_t_minus, cii.transposed)), ctx.tol(35),
      t6.seconds());
  return out;
}

std::vector<CheckRecord> run_lattice(const SuiteContext& ctx) {
  std::vector<CheckRecord> out;
  long prec = ctx.family.precision;
  if (ctx.family.b[0].empty() || ctx.family.b[1].empty() || ctx.family.c.empty())
    throw GuardError("lattice suite needs b and c parameters (a generalized two-b family)");
  LabCache cache;
  ShiftGrid grid(ctx.family, ShiftSpec{1, 1, 1}, cache);
  std::size_t n_top = std::min<std::size_t>(ctx.cfg.n_max, 3);

  Timer t0;
  BigReal d3(0, prec);
  for (std::size_t n = 0; n <= n_top; ++n)
    for (auto sys : {NC3System::HatTilde, NC3System::CheckTilde, NC3System::HatCheck})
      for (auto& r : nc3d_residuals(grid, n, sys)) d3 = max(d3, r);
  add(out, ctx, "lattice", "three-direction", "the twelve fully discrete equations in three "
      "shift directions", "n<=min(nmax,3)", d3, ctx.tol(30), t0.seconds());

  Timer t1;
  BigReal dt(0, prec);
  bool reconciled = false;
  for (std::size_t n = 0; n <= n_top; ++n) {
    auto rep = nc_tau_residuals(grid, n);
    for (auto& r : rep.residuals) dt = max(dt, r);
    reconciled = reconciled || rep.reconciled_map;
  }
  add(out, ctx, "lattice", "tau-form", "the four equations in tau-ratio variables", "n<=min(nmax,3)",
      dt, ctx.tol(30), t1.seconds());
  if (reconciled)
    add(out, ctx, "lattice", "tau-form-map", "factorization-consistent sign/index map applied",
        "", BigReal(0, prec), BigReal(1, prec), 0.0);

  Timer t2;
  BigReal d2(0, prec);
  for (std::size_t n = 0; n <= n_top; ++n)
    for (auto sys : {NC2System::TildeBar, NC2System::CheckBar, NC2System::HatBar})
      for (auto& r : nc2d_residuals(grid, n, sys)) d2 = max(d2, r);
  add(out, ctx, "lattice", "two-direction", "the eighteen equations in one shift direction "
      "plus the half-site shift", "n<=min(nmax,3)", d2, ctx.tol(30), t2.seconds());

  Timer t3;
  auto sc = shift_compat_residuals(grid, std::max<std::size_t>(ctx.cfg.n_max, 8));
  BigReal mc = max(max(sc.omega_cap_sr, max(sc.omega_cap_sq, sc.omega_cap_rq)),
                   max(sc.intertwine_r, max(sc.intertwine_q, sc.intertwine_s)));
  add(out, ctx, "lattice", "matrix-compat", "connection-matrix compatibilities and recursion "
      "intertwining", "window", mc, ctx.tol(35), t3.seconds());

  Timer t4;
  BigReal sn(0, prec);
  for (std::size_t n = 1; n <= 3; ++n)
    sn = max(sn, scalar_nc_residual(ctx.family, 1, 1, 1, n));
  add(out, ctx, "lattice", "scalar-reduction", "single-weight fully discrete equation",
      "n<=3", sn, ctx.tol(35), t4.seconds());
  return out;
}
}  // namespace

Report run(const RunConfig& config) {
  SuiteContext ctx{config, config.build_family(), std::nullopt};
  if (config.tol) ctx.tol_override = BigReal::parse(*config.tol, config.precision);
  auto suites = config.suite_list();

  using SuiteFn = std::vector<CheckRecord> (*)(const SuiteContext&);
  auto dispatch = [](const std::string& name) -> SuiteFn {
    if (name == "moments") return run_moments;
    if (name == "tau") return run_tau;
    if (name == "coeffs") return run_coeffs;
    if (name == "lf") return run_lf;
    if (name == "toda") return run_toda;
    return run_lattice;
  };

  Report rep;
  if (config.jobs > 1) {
    std::vector<std::future<std::vector<CheckRecord>>> futs;
    futs.reserve(suites.size());
    for (const auto& s : suites)
      futs.push_back(std::async(std::launch::async, dispatch(s), std::cref(ctx)));
    for (auto& f : futs)
      for (auto& r : f.get()) rep.records.push_back(std::move(r));
  } else {
    for (const auto& s : suites)
      for (auto& r : dispatch(s)(ctx)) rep.records.push_back(std::move(r));
  }
  for (const auto& r : rep.records) rep.all_pass = rep.all_pass && r.pass;
  return rep;
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "suite,id,anchor,site,residual,tolerance,pass\n";
  for (const auto& r : records) {
    os << r.suite << ',' << r.id << ',' << '"' << r.anchor << '"' << ',' << '"' << r.site
       << '"' << ',' << r.residual.to_string(20) << ',' << r.tolerance.to_string(8) << ','
       << (r.pass ? "1" : "0") << '\n';
  }
  return os.str();
}

std::string Report::to_json() const {
  json doc = json::array();
  for (const auto& r : records) {
    doc.push_back({{"suite", r.suite},
                   {"id", r.id},
                   {"anchor", r.anchor},
                   {"site", r.site},
                   {"residual", r.residual.to_string(20)},
                   {"tolerance", r.tolerance.to_string(8)},
                   {"pass", r.pass},
                   {"wall_seconds", r.wall_seconds}});
  }
  return doc.dump(2) + "\n";
}

int run_and_write(const RunConfig& config) {
  Report rep = run(config);
  std::ofstream csv(config.out_dir + "/report.csv");
  csv << rep.to_csv();
  std::ofstream js(config.out_dir + "/report.json");
  js << rep.to_json();
  return rep.all_pass ? 0 : 1;
}

std::string emit_table(const WeightFamily& family, const std::string& quantity,
                       std::size_t n_max) {
  long prec = family.precision;
  long digits = (prec * 3) / 10;
  Lab lab(family);
  std::ostringstream os;
  if (quantity == "tau") {
    lab.fact(n_max + 1);
    os << "n,tau,theta_tau,theta2_tau,theta3_tau\n";
    for (std::size_t n = 0; n <= n_max; ++n) {
      Jet3 t = lab.tau_jet(n);
      os << n << ',' << t.value().to_string(digits) << ',' << t.theta(1).to_string(digits)
         << ',' << t.theta(2).to_string(digits) << ',' << t.theta(3).to_string(digits) << '\n';
    }
  } else if (quantity == "coeffs") {
    auto rc = recursion_coeffs(lab, n_max);
    os << "n,alpha,beta,gamma\n";
    for (std::size_t n = 0; n <= n_max; ++n)
      os << n << ',' << rc.alpha[n].to_string(digits) << ',' << rc.beta[n].to_string(digits)
         << ',' << rc.gamma[n].to_string(digits) << '\n';
  } else if (quantity == "fields") {
    auto lf = lattice_fields(lab, n_max);
    os << "n,u,v,f,g,F,G\n";
    for (std::size_t n = 0; n <= n_max; ++n)
      os << n << ',' << lf.u[n].to_string(digits) << ',' << lf.v[n].to_string(digits) << ','
         << lf.f[n].to_string(digits) << ',' << lf.g[n].to_string(digits) << ','
         << lf.F[n].to_string(digits) << ',' << lf.G[n].to_string(digits) << '\n';
  } else {
    throw GuardError("unknown table quantity: " + quantity +
                     " (expected tau, coeffs or fields)");
  }
  return os.str();
}

std::string emit_shift_table(const WeightFamily& family, std::size_t extent,
                             std::size_t n_max) {
  long prec = family.precision;
  long digits = (prec * 3) / 10;
  LabCache cache;
  ShiftGrid grid(family, ShiftSpec{1, 1, 1}, cache);
  std::ostringstream os;
  os << "b1_steps,b2_steps,c_steps,n,u,v,f,g\n";
  std::size_t hat_max = family.b[0].empty() ? 0 : extent;
  std::size_t chk_max = family.b[1].empty() ? 0 : extent;
  std::size_t til_max = family.c.empty() ? 0 : extent;
  for (std::size_t h = 0; h <= hat_max; ++h)
    for (std::size_t q = 0; q <= chk_max; ++q)
      for (std::size_t s = 0; s <= til_max; ++s) {
        Lab& lab = grid.at(static_cast<int>(h), static_cast<int>(q), static_cast<int>(s));
        auto lf = lattice_fields(lab, n_max);
        for (std::size_t n = 0; n <= n_max; ++n)
          os << h << ',' << q << ',' << s << ',' << n << ',' << lf.u[n].to_string(digits)
             << ',' << lf.v[n].to_string(digits) << ',' << lf.f[n].to_string(digits) << ','
             << lf.g[n].to_string(digits) << '\n';
      }
  return os.str();
}

}  // namespace stepline
