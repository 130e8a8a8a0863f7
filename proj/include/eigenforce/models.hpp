#pragma once

#include "eigenforce/dynamics.hpp"
#include "eigenforce/matrix.hpp"
#include "eigenforce/trajectory.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace eigenforce {

// ---- biophysical ring ---------------------------------------------------

// Linearized reaction-diffusion on a periodic ring of N sites. b is the
// saturation coefficient of the nonlinear model; the linearization ignores it.
struct BiophysicalRing {
  Index N = 3;
  double D = 1.0;
  double a = 0.0;
  double b = 0.0;
  double h = 0.0;
  Eigen::VectorXd U;  // empty means U = 0

  void validate() const;
  double disorder(Index i) const { return U.size() ? U(i) : 0.0; }
};

// Circulant: diagonal a - 2D, nearest neighbours D, periodic wiring.
ComplexSquareMatrix build_omega(const BiophysicalRing& ring);

// Convective ring: diagonal a - 2D + U_i, forward hop D e^h, backward D e^-h.
ComplexSquareMatrix build_omega_le(const BiophysicalRing& ring);

// Closed-form spectrum of build_omega_le at U = 0, indexed by Fourier mode m:
//   a - 2D + D e^h w^m + D e^-h w^-m,  w = exp(2 pi i / N).
// With h = 0 this is a - 2D + 2D cos(2 pi m / N), the spectrum of build_omega.
CVector ring_spectrum(const BiophysicalRing& ring);

// Omega_le - a I: the discretized D laplacian + U, whose eigenvalues are
// the growth rates of the localized modes.
ComplexSquareMatrix growth_operator(const BiophysicalRing& ring);

// Omega_le(t) with U(t) = U + t U_rate and h(t) = h + t h_rate; exact derivatives.
MatrixTrajectory ring_trajectory(const BiophysicalRing& ring, const Eigen::VectorXd& U_rate,
                                 double h_rate = 0.0);

// ---- localization -------------------------------------------------------

struct LocalizationAnsatz {
  Eigen::VectorXd grid;
  Eigen::VectorXd centers;
  Eigen::VectorXd lengths;

  void validate() const;
};

// exp(-|r_i - r_n| / xi_n) over the grid. Throws Error{NonpositiveLength}.
Eigen::VectorXd localized_vector(const LocalizationAnsatz& ansatz, Index n);

struct LocalizationFit {
  double center = 0.0;  // grid position of the largest |v_i|
  double length = 0.0;  // sup over components of -|r_i - r_c| / log(|v_i| / |v_c|)
};

// Infinite length means some component is as large as the peak.
LocalizationFit fit_localization(const CVector& v, const Eigen::VectorXd& grid);

// ---- transfer and scattering matrices ------------------------------------

// E+ = M(k) E-. Entries are supplied as functions of the wavenumber.
struct TransferMatrixModel {
  std::function<Eigen::Matrix2cd(double)> entries;
  int branch = 1;  // +1 reports s_plus as primary, -1 s_minus
  double unimodular_tol = 1e-9;

  Eigen::Matrix2cd at(double k) const { return entries(k); }

  static TransferMatrixModel from_entries(std::function<Complex(double)> m11,
                                          std::function<Complex(double)> m12,
                                          std::function<Complex(double)> m21,
                                          std::function<Complex(double)> m22);

  // Point scatterers z_s delta(x - x_s) in a free 1D medium, composed left to right.
  static TransferMatrixModel delta_array(std::vector<double> positions, std::vector<Complex> strengths);

  // Entries tabulated on increasing k, interpolated entrywise and rescaled to
  // unit determinant. Needs at least 4 knots.
  static TransferMatrixModel table(std::vector<double> k, std::vector<Eigen::Matrix2cd> values);
};

// Transfer matrix of a single scatterer z delta(x - x0) at wavenumber k.
Eigen::Matrix2cd delta_transfer(double k, double x0, Complex z);

struct ScatteringData {
  Complex T_l, R_r, R_l, T_r;
  Complex s_plus, s_minus;

  // [[T_l, R_r], [R_l, T_r]]
  Eigen::Matrix2cd s_matrix() const;
  Complex primary(int branch) const { return branch >= 0 ? s_plus : s_minus; }
};

// Throws Error{NotUnimodular} and Error{SpectralSingularity} (M22 = 0).
ScatteringData scattering_data(const Eigen::Matrix2cd& m, double unimodular_tol = 1e-9);
ScatteringData scattering_data(const TransferMatrixModel& model, double k);

enum class ScatteringSide { Left, Right };

struct ScatteringState {
  ScatteringSide side = ScatteringSide::Left;
  Complex amplitude{1.0, 0.0};
  Complex reflection{}, transmission{};
  Eigen::VectorXd x;
  CVector psi;  // NaN inside the scattering region
};

// Left state: N (e^{ikx} + R_l e^{-ikx}) for x < lo and N T_l e^{ikx} for x >= hi.
// Right state: N T_r e^{-ikx} for x < lo and N (e^{-ikx} + R_r e^{ikx}) for x >= hi.
// The medium is free outside [lo, hi); the default region is the single point 0.
ScatteringState scattering_state(const TransferMatrixModel& model, double k, ScatteringSide side,
                                 const Eigen::VectorXd& x, Complex amplitude = {1.0, 0.0},
                                 double lo = 0.0, double hi = 0.0);

// S(k) as a trajectory in k, derivatives by central differences.
MatrixTrajectory s_matrix_trajectory(const TransferMatrixModel& model, std::optional<double> step = {});

// ---- effective Hamiltonian ------------------------------------------------

struct EffectiveHamiltonianSpec {
  CMatrix H;
  std::vector<CMatrix> L;
  std::vector<Complex> l;
};

// H + (i/2) sum_k (conj(l_k) L_k - l_k L_k^*). Throws DimensionMismatch.
// A non-Hermitian H is accepted with a message appended to warnings.
ComplexSquareMatrix effective_hamiltonian(const EffectiveHamiltonianSpec& spec, double hermitian_tol = 1e-10,
                                          std::vector<std::string>* warnings = nullptr);

// H(t) = H + t H_rate and L_k(t) = L_k + t L_rate_k with fixed l_k.
MatrixTrajectory effective_hamiltonian_trajectory(const EffectiveHamiltonianSpec& spec,
                                                  const CMatrix& H_rate,
                                                  const std::vector<CMatrix>& L_rates);

// ---- main result presets --------------------------------------------------

enum class MainResultCase { OpenQuantum, Biophysical, ParityTime };

struct MainResultOptions {
  bool diagnostic = false;
  double tol = 1e-9;
  DynamicsOptions dynamics;
  // Biophysical: positions of the sites (defaults to 0..N-1).
  std::optional<Eigen::VectorXd> grid;
  // ParityTime: the transfer model behind the S-matrix trajectory, whose
  // closed-form s_plus / s_minus supply the ansatz denominators.
  std::optional<TransferMatrixModel> transfer;
};

struct MainResultAcceleration {
  ForceBreakdown exact;
  std::optional<ForceBreakdown> ansatz;
  double discrepancy = 0.0;  // |ansatz.total - exact.total| when diagnostic
};

// Exact lambda_ddot_j of the state matrix along the trajectory. In
// diagnostic mode the same sum is also evaluated with the model's ansatz
// eigen-data:
//   OpenQuantum: u_i = v_i, denominators h_i - h_j from the exact spectrum
//   Biophysical: fitted exponentials exp(-|r - r_i| / xi) with a common
//                xi = sup_i xi_i, unit norm; Lambda differences equal the
//                exact ones since growth_operator is a shift of Omega_le
//   ParityTime:  exact eigenvectors, denominators from the closed-form s+-
MainResultAcceleration main_result_acceleration(MainResultCase kind, const MatrixTrajectory& trajectory,
                                                double t, Index j, const MainResultOptions& options = {});

}  // namespace eigenforce
