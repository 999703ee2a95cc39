#pragma once

#include <optional>

#include "stepline/lattice.hpp"
#include "stepline/lfequations.hpp"
#include "stepline/toda.hpp"

namespace stepline {

/// One verification run: family, precision, depth, suite selection.
struct RunConfig {
  std::string family = "charlier";
  std::optional<std::string> eta1, eta2, eta, b1, b2, c;
  long precision = 256;
  std::size_t n_max = 8;
  std::optional<std::string> tol;  // overrides every per-check tolerance
  std::vector<std::string> suites = {"all"};
  std::string out_dir = ".";
  int jobs = 1;

  WeightFamily build_family() const;
  /// The concrete suite list with "all" expanded, order fixed.
  std::vector<std::string> suite_list() const;
};

/// Parses a JSON config document mirroring the flags; unknown keys are
/// rejected. Flag values already set by the caller win over file values
/// when `overlay` is true.
RunConfig config_from_json_text(const std::string& text);

struct CheckRecord {
  std::string suite;
  std::string id;       // stable identifier of the identity checked
  std::string anchor;   // human-readable statement of the identity
  std::string site;     // indices the residual was taken at
  BigReal residual;
  BigReal tolerance;
  bool pass = false;
  double wall_seconds = 0.0;
};

struct Report {
  std::vector<CheckRecord> records;
  bool all_pass = true;
  /// Flat CSV of the records. Wall times are excluded so identical
  /// configurations produce byte-identical files.
  std::string to_csv() const;
  std::string to_json() const;
};

/// Runs the selected suites; throws GuardError for unusable configurations
/// and FactorizationBreakdown if a moment matrix degenerates.
Report run(const RunConfig& config);

/// Writes report.csv and report.json under config.out_dir; returns the exit
/// status per the contract (0 pass, 1 check failure).
int run_and_write(const RunConfig& config);

/// Deterministic CSV tables: quantity is "tau", "coeffs" or "fields";
/// values carry floor(precision * 0.3) significant digits.
std::string emit_table(const WeightFamily& family, const std::string& quantity,
                       std::size_t n_max);

/// Shift-grid view: families and lattice fields at each multi-index within
/// the extents (b1-steps, b2-steps, c-steps).
std::string emit_shift_table(const WeightFamily& family, std::size_t extent,
                             std::size_t n_max);

}  // namespace stepline
