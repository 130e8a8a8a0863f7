#include "eigenforce/oracle.hpp"

#include "eigenforce/assignment.hpp"
#include "eigenforce/dynamics.hpp"
#include "eigenforce/error.hpp"
#include "eigenforce/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace eigenforce {

namespace {

CVector matched_eigenvalues(const SpectralDecomposition& center, const MatrixTrajectory& traj, double t,
                            double tol) {
  const SpectralDecomposition side = decompose(traj.value(t), tol);
  return permuted(side, match_paths(center, side, tol).permutation).eigenvalues;
}

// Pairs two spectra by minimum total distance.
std::vector<Index> match_spectra(const CVector& a, const CVector& b) {
  Eigen::MatrixXd cost(a.size(), b.size());
  for (Index i = 0; i < a.size(); ++i)
    for (Index k = 0; k < b.size(); ++k) cost(i, k) = std::abs(a(i) - b(k));
  return min_cost_assignment(cost);
}

void add_relative(OracleReport& report, const std::string& quantity, double t, const CVector& analytic,
                  const CVector& oracle) {
  const double floor = 1e-3 * analytic.cwiseAbs().maxCoeff();
  for (Index j = 0; j < analytic.size(); ++j) {
    const double scale = std::max(std::abs(oracle(j)), floor);
    const double diff = std::abs(analytic(j) - oracle(j));
    report.rows.push_back({quantity, t, j, analytic(j), oracle(j), scale > 0.0 ? diff / scale : diff});
  }
}

void derivative_checks(const ScenarioConfig& cfg, const MatrixTrajectory& traj, const OracleTolerances& tol,
                       OracleReport& report) {
  for (double frac : {0.25, 0.5, 0.75}) {
    const double t = cfg.time.t0 + frac * (cfg.time.t1 - cfg.time.t0);
    const ComplexSquareMatrix m = traj.value(t);
    const SpectralDecomposition d = decompose(m, cfg.tolerance);
    const double scale = std::max(1.0, d.eigenvalues.cwiseAbs().maxCoeff());
    if (d.min_gap < 1e-6 * scale) {
      report.skipped.push_back("t=" + std::to_string(t) + ": spectrum near-degenerate, derivatives not compared");
      continue;
    }
    const ComplexSquareMatrix mdot = traj.first_derivative(t);
    const ComplexSquareMatrix mddot = traj.second_derivative(t);
    const Index n = d.dim();

    CVector vel(n), acc(n);
    for (Index j = 0; j < n; ++j) {
      vel(j) = eigen_velocity(d, mdot, j);
      acc(j) = eigen_acceleration(d, mdot, mddot, j).total;
    }
    const double h1 = tol.velocity_step, h2 = tol.acceleration_step;
    const CVector vp = matched_eigenvalues(d, traj, t + h1, cfg.tolerance);
    const CVector vm = matched_eigenvalues(d, traj, t - h1, cfg.tolerance);
    add_relative(report, "velocity", t, vel, (vp - vm) / (2.0 * h1));
    const CVector ap = matched_eigenvalues(d, traj, t + h2, cfg.tolerance);
    const CVector am = matched_eigenvalues(d, traj, t - h2, cfg.tolerance);
    add_relative(report, "acceleration", t, acc, (ap - 2.0 * d.eigenvalues + am) / (h2 * h2));
  }
}

void dft_check(const ScenarioConfig& cfg, OracleReport& report) {
  BiophysicalRing ring = cfg.model.ring;
  const double t = cfg.time.t0;
  const Index n = ring.N;
  Eigen::VectorXd U = ring.U.size() ? ring.U : Eigen::VectorXd::Zero(n);
  if (cfg.model.U_rate.size()) U += t * cfg.model.U_rate;
  if (!U.isZero(0.0)) {
    report.skipped.push_back("ring has site disorder at t0; Fourier spectrum check needs U = 0");
    return;
  }
  ring.U.resize(0);
  ring.h += t * cfg.model.h_rate;
  const ComplexSquareMatrix omega = build_omega_le(ring);
  const CVector numeric = decompose(omega, cfg.tolerance).eigenvalues;
  const CVector closed = ring_spectrum(ring);
  const auto match = match_spectra(numeric, closed);
  const double scale = std::max(1.0, omega.frobenius_norm());
  for (Index j = 0; j < n; ++j) {
    const Complex o = closed(match[j]);
    report.rows.push_back({"dft_spectrum", t, j, numeric(j), o, std::abs(numeric(j) - o) / scale});
  }
}

void s_matrix_check(const ScenarioConfig& cfg, OracleReport& report) {
  for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double k = cfg.time.t0 + frac * (cfg.time.t1 - cfg.time.t0);
    const ScatteringData s = scattering_data(*cfg.model.transfer, k);
    const Eigen::Matrix2cd S = s.s_matrix();
    const CVector numeric = decompose(ComplexSquareMatrix(CMatrix(S)), cfg.tolerance).eigenvalues;
    CVector closed(2);
    closed << s.s_plus, s.s_minus;
    const auto match = match_spectra(closed, numeric);
    const double scale = std::max(1.0, S.norm());
    for (Index j = 0; j < 2; ++j) {
      const Complex o = numeric(match[j]);
      report.rows.push_back({"s_pm", k, j, closed(j), o, std::abs(closed(j) - o) / scale});
    }
  }
}

}  // namespace

bool OracleReport::pass() const {
  return std::all_of(summaries.begin(), summaries.end(), [](const OracleSummary& s) { return s.pass; });
}

OracleReport run_oracles(const ScenarioConfig& cfg, const OracleTolerances& tol,
                         std::optional<double> override_tolerance) {
  OracleReport report;
  const MatrixTrajectory traj = cfg.trajectory();
  derivative_checks(cfg, traj, tol, report);
  if (cfg.model.kind == ModelKind::Ring) dft_check(cfg, report);
  if (cfg.model.kind == ModelKind::Transfer) s_matrix_check(cfg, report);
  if (cfg.perturbation) report.skipped.push_back("perturbation ignored: oracles check the deterministic trajectory");

  const std::map<std::string, double> limits{{"velocity", tol.velocity},
                                             {"acceleration", tol.acceleration},
                                             {"dft_spectrum", tol.spectrum},
                                             {"s_pm", tol.spectrum}};
  for (const char* quantity : {"velocity", "acceleration", "dft_spectrum", "s_pm"}) {
    OracleSummary s;
    s.quantity = quantity;
    s.tolerance = override_tolerance.value_or(limits.at(quantity));
    for (const OracleRow& row : report.rows) {
      if (row.quantity != quantity) continue;
      ++s.compared;
      s.max_error = std::isnan(row.error) ? row.error : std::max(s.max_error, row.error);
      if (std::isnan(row.error)) break;
    }
    if (s.compared == 0) continue;
    s.pass = s.max_error <= s.tolerance;
    report.summaries.push_back(s);
  }
  return report;
}

void print_report(const OracleReport& report, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%-13s %12s %4s %25s %25s %25s %25s %11s\n", "quantity", "t", "j", "re_analytic",
                "im_analytic", "re_oracle", "im_oracle", "error");
  out << line;
  for (const OracleRow& r : report.rows) {
    std::snprintf(line, sizeof line, "%-13s %12.6g %4ld %25.17g %25.17g %25.17g %25.17g %11.3e\n",
                  r.quantity.c_str(), r.t, static_cast<long>(r.j), r.analytic.real(), r.analytic.imag(),
                  r.oracle.real(), r.oracle.imag(), r.error);
    out << line;
  }
  for (const std::string& s : report.skipped) out << "skipped: " << s << '\n';
  for (const OracleSummary& s : report.summaries) {
    std::snprintf(line, sizeof line, "%s: max error %.3e over %zu values (tolerance %.1e) %s\n", s.quantity.c_str(),
                  s.max_error, s.compared, s.tolerance, s.pass ? "PASS" : "FAIL");
    out << line;
  }
}

}  // namespace eigenforce
