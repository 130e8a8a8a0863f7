#pragma once

#include "eigenforce/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace eigenforce {

// One comparison of an analytic value against an independent oracle.
struct OracleRow {
  std::string quantity;  // "velocity", "acceleration", "dft_spectrum", "s_pm"
  double t = 0.0;
  Index j = 0;
  Complex analytic{};
  Complex oracle{};
  double error = 0.0;  // relative, or scaled absolute for spectra
};

struct OracleSummary {
  std::string quantity;
  std::size_t compared = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  std::vector<OracleSummary> summaries;
  std::vector<std::string> skipped;  // reasons for points left out

  bool pass() const;
};

struct OracleTolerances {
  double velocity = 1e-6;
  double acceleration = 1e-4;
  double spectrum = 1e-10;
  double velocity_step = 1e-4;
  double acceleration_step = 1e-3;
};

// Checks the scenario's deterministic trajectory at the quarter points of
// its interval:
//   velocity / acceleration against central differences of matched eigenvalue
//   paths (relative error, floored at 1e-3 of the largest analytic value);
//   ring models with U = 0: decompose() spectrum against the closed-form
//   Fourier spectrum (absolute error over max(1, |Omega|_F));
//   transfer models: closed-form s+- against the eigenvalues of S.
// `override_tolerance` replaces every tolerance when set.
OracleReport run_oracles(const ScenarioConfig& cfg, const OracleTolerances& tol = {},
                         std::optional<double> override_tolerance = {});

void print_report(const OracleReport& report, std::ostream& out);

}  // namespace eigenforce
