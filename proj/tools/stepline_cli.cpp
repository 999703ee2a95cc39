// Command-line front end: verification suites and table emission for the
// step-line multiple-orthogonality laboratory.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stepline/runner.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string family;
  std::string eta1, eta2, eta, b1, b2, c;
  long precision = 0;
  long nmax = -1;
  std::string tol;
  std::string out;
  int jobs = 0;
};

void attach_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file mirroring the flags");
  cmd->add_option("--family", f.family,
                  "charlier, meixner2, gen-charlier or gen-meixner2");
  cmd->add_option("--eta1", f.eta1, "first spectral parameter (rational p/q or decimal)");
  cmd->add_option("--eta2", f.eta2, "second spectral parameter");
  cmd->add_option("--eta", f.eta, "shared spectral parameter (sets both)");
  cmd->add_option("--b1", f.b1, "numerator parameter of the first weight");
  cmd->add_option("--b2", f.b2, "numerator parameter of the second weight");
  cmd->add_option("--c", f.c,
                  "shared parameter in the theta-root convention theta(z) = z(z+c); the "
                  "stored denominator parameter is c+1");
  cmd->add_option("--precision", f.precision, "working precision in bits (default 256)");
  cmd->add_option("--nmax", f.nmax, "largest index checked (default 8)");
  cmd->add_option("--tol", f.tol, "override every per-check tolerance");
  cmd->add_option("--out", f.out, "output directory (default .)");
  cmd->add_option("--jobs", f.jobs, "run independent suites concurrently");
}

stepline::RunConfig merge(const CommonFlags& f) {
  stepline::RunConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw stepline::GuardError("cannot open config file: " + f.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    cfg = stepline::config_from_json_text(buf.str());
  }
  if (!f.family.empty()) cfg.family = f.family;
  if (!f.eta1.empty()) cfg.eta1 = f.eta1;
  if (!f.eta2.empty()) cfg.eta2 = f.eta2;
  if (!f.eta.empty()) cfg.eta = f.eta;
  if (!f.b1.empty()) cfg.b1 = f.b1;
  if (!f.b2.empty()) cfg.b2 = f.b2;
  if (!f.c.empty()) cfg.c = f.c;
  if (f.precision > 0) cfg.precision = f.precision;
  if (f.nmax >= 0) cfg.n_max = static_cast<std::size_t>(f.nmax);
  if (!f.tol.empty()) cfg.tol = f.tol;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.jobs > 0) cfg.jobs = f.jobs;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"step-line multiple orthogonal polynomial laboratory"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<std::string> suites;
  std::string quantity = "coeffs";
  long extent = 1;

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  attach_common(verify, flags);
  verify->add_option("--suite", suites,
                     "moments, tau, coeffs, lf, toda, lattice or all (repeatable)");

  CLI::App* table = app.add_subcommand("table", "emit a deterministic CSV table");
  attach_common(table, flags);
  table->add_option("--quantity", quantity, "tau, coeffs or fields");

  CLI::App* shifts = app.add_subcommand("shifts", "emit fields over the shift grid");
  attach_common(shifts, flags);
  shifts->add_option("--extent", extent, "steps taken in each parameter direction");

  CLI11_PARSE(app, argc, argv);

  try {
    stepline::RunConfig cfg = merge(flags);
    if (!suites.empty()) cfg.suites = suites;

    if (verify->parsed()) {
      int status = stepline::run_and_write(cfg);
      std::cout << (status == 0 ? "all checks passed" : "some checks FAILED") << " ("
                << cfg.out_dir << "/report.csv)" << std::endl;
      return status;
    }
    stepline::WeightFamily fam = cfg.build_family();
    if (table->parsed()) {
      std::string csv = stepline::emit_table(fam, quantity, cfg.n_max);
      std::ofstream out(cfg.out_dir + "/" + quantity + ".csv");
      out << csv;
      std::cout << csv;
      return 0;
    }
    std::string csv = stepline::emit_shift_table(fam, static_cast<std::size_t>(extent),
                                                 cfg.n_max);
    std::ofstream out(cfg.out_dir + "/shifts.csv");
    out << csv;
    std::cout << csv;
    return 0;
  } catch (const stepline::FactorizationBreakdown& e) {
    std::cerr << "factorization breakdown at index " << e.index() << ": " << e.what()
              << std::endl;
    return 3;
  } catch (const stepline::GuardError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
