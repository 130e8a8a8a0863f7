#include "eigenforce/models.hpp"

#include "eigenforce/assignment.hpp"
#include "eigenforce/error.hpp"
#include "eigenforce/spectral.hpp"

#include <boost/math/interpolators/barycentric_rational.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace eigenforce {

namespace {

constexpr Complex kI{0.0, 1.0};

CMatrix ring_matrix(Index n, double D, double h, double diagonal_offset, const Eigen::VectorXd& U) {
  CMatrix m = CMatrix::Zero(n, n);
  const double forward = D * std::exp(h);
  const double backward = D * std::exp(-h);
  for (Index i = 0; i < n; ++i) {
    m(i, i) = diagonal_offset + (U.size() ? U(i) : 0.0);
    m(i, (i + 1) % n) += forward;
    m(i, (i + n - 1) % n) += backward;
  }
  return m;
}

void require_square(const CMatrix& m, Index n, const std::string& name) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, name + " is " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()) + ", expected " +
                                                  std::to_string(n) + "x" + std::to_string(n));
  }
}

// Breakdown of the lambda_ddot sum from explicit eigen-data (left vectors
// given as u with the bilinear form u^* X v).
ForceBreakdown breakdown_from(const CMatrix& left, const CMatrix& right, const CVector& lambda,
                              const CMatrix& mdot, const CMatrix& mddot, Index j, Index partner) {
  const Index n = lambda.size();
  ForceBreakdown f;
  f.inertial = left.col(j).dot(mddot * right.col(j));
  const CVector col = left.adjoint() * (mdot * right.col(j));
  const CVector row = (left.col(j).adjoint() * mdot * right).transpose();
  for (Index i = 0; i < n; ++i) {
    if (i == j) continue;
    const Complex gap = lambda(j) - lambda(i);
    if (gap == Complex{}) {
      throw SingularGapError(static_cast<std::size_t>(i), static_cast<std::size_t>(j), 0.0);
    }
    const Complex s = 2.0 * col(i) * row(i) / gap;
    (i == partner ? f.conjugate_term : f.others) += s;
  }
  f.total = f.inertial + f.conjugate_term + f.others;
  return f;
}

}  // namespace

// ---- biophysical ring ---------------------------------------------------

void BiophysicalRing::validate() const {
  if (N < 3) throw Error(ErrorCode::InvalidArgument, "ring needs N >= 3 sites, got " + std::to_string(N));
  if (!(D > 0.0) || !std::isfinite(D)) {
    throw Error(ErrorCode::InvalidArgument, "diffusion constant D must be positive and finite");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(h)) {
    throw Error(ErrorCode::NonFinite, "ring parameters a, b, h must be finite");
  }
  if (U.size() != 0 && U.size() != N) {
    throw Error(ErrorCode::DimensionMismatch,
                "U has " + std::to_string(U.size()) + " entries for " + std::to_string(N) + " sites");
  }
  if (U.size() && !U.allFinite()) throw Error(ErrorCode::NonFinite, "U must be finite");
}

ComplexSquareMatrix build_omega(const BiophysicalRing& ring) {
  ring.validate();
  return ComplexSquareMatrix(ring_matrix(ring.N, ring.D, 0.0, ring.a - 2.0 * ring.D, Eigen::VectorXd()));
}

ComplexSquareMatrix build_omega_le(const BiophysicalRing& ring) {
  ring.validate();
  return ComplexSquareMatrix(ring_matrix(ring.N, ring.D, ring.h, ring.a - 2.0 * ring.D, ring.U));
}

CVector ring_spectrum(const BiophysicalRing& ring) {
  ring.validate();
  CVector out(ring.N);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(ring.N);
  for (Index m = 0; m < ring.N; ++m) {
    const double theta = w * static_cast<double>(m);
    out(m) = ring.a - 2.0 * ring.D + ring.D * std::exp(ring.h) * std::polar(1.0, theta) +
             ring.D * std::exp(-ring.h) * std::polar(1.0, -theta);
  }
  return out;
}

ComplexSquareMatrix growth_operator(const BiophysicalRing& ring) {
  ring.validate();
  return ComplexSquareMatrix(ring_matrix(ring.N, ring.D, ring.h, -2.0 * ring.D, ring.U));
}

MatrixTrajectory ring_trajectory(const BiophysicalRing& ring, const Eigen::VectorXd& U_rate, double h_rate) {
  ring.validate();
  const Index n = ring.N;
  if (U_rate.size() != 0 && U_rate.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "U_rate length differs from the site count");
  }
  if (!std::isfinite(h_rate) || (U_rate.size() && !U_rate.allFinite())) {
    throw Error(ErrorCode::NonFinite, "ring rates must be finite");
  }
  const Eigen::VectorXd U0 = ring.U.size() ? ring.U : Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd rate = U_rate.size() ? U_rate : Eigen::VectorXd::Zero(n);
  const double D = ring.D, h = ring.h, offset = ring.a - 2.0 * ring.D;

  auto value = [=](double t) -> CMatrix {
    return ring_matrix(n, D, h + t * h_rate, offset, U0 + t * rate);
  };
  // d/dt D e^{+-h(t)} = +-h_rate D e^{+-h(t)}; the diagonal is linear in t.
  auto first = [=](double t) -> CMatrix {
    const double ht = h + t * h_rate;
    CMatrix m = CMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      m(i, i) = rate(i);
      m(i, (i + 1) % n) += h_rate * D * std::exp(ht);
      m(i, (i + n - 1) % n) += -h_rate * D * std::exp(-ht);
    }
    return m;
  };
  auto second = [=](double t) -> CMatrix {
    const double ht = h + t * h_rate;
    CMatrix m = CMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      m(i, (i + 1) % n) += h_rate * h_rate * D * std::exp(ht);
      m(i, (i + n - 1) % n) += h_rate * h_rate * D * std::exp(-ht);
    }
    return m;
  };
  return MatrixTrajectory::analytic(n, value, first, second);
}

// ---- localization -------------------------------------------------------

void LocalizationAnsatz::validate() const {
  if (centers.size() != lengths.size()) {
    throw Error(ErrorCode::DimensionMismatch, "localization centers and lengths differ in count");
  }
  for (Index n = 0; n < lengths.size(); ++n) {
    if (!(lengths(n) > 0.0)) {
      throw Error(ErrorCode::NonpositiveLength,
                  "localization length " + std::to_string(n) + " is not positive");
    }
  }
}

Eigen::VectorXd localized_vector(const LocalizationAnsatz& ansatz, Index n) {
  if (n < 0 || n >= ansatz.centers.size()) {
    throw Error(ErrorCode::InvalidArgument, "localized mode index out of range");
  }
  const double xi = ansatz.lengths(n);
  if (!(xi > 0.0)) {
    throw Error(ErrorCode::NonpositiveLength, "localization length " + std::to_string(n) + " is not positive");
  }
  return (-(ansatz.grid.array() - ansatz.centers(n)).abs() / xi).exp().matrix();
}

LocalizationFit fit_localization(const CVector& v, const Eigen::VectorXd& grid) {
  if (v.size() != grid.size() || v.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "vector and grid lengths differ");
  }
  Index peak = 0;
  v.cwiseAbs().maxCoeff(&peak);
  const double top = std::abs(v(peak));
  if (!(top > 0.0)) throw Error(ErrorCode::InvalidArgument, "cannot fit localization of a zero vector");

  LocalizationFit fit;
  fit.center = grid(peak);
  for (Index i = 0; i < v.size(); ++i) {
    if (i == peak) continue;
    const double dist = std::abs(grid(i) - fit.center);
    const double ratio = std::abs(v(i)) / top;
    if (dist == 0.0) continue;
    if (ratio == 0.0) continue;  // infinitely fast decay at this component
    const double log_ratio = std::log(ratio);
    const double len = log_ratio < 0.0 ? -dist / log_ratio : std::numeric_limits<double>::infinity();
    fit.length = std::max(fit.length, len);
  }
  if (!(fit.length > 0.0)) fit.length = std::numeric_limits<double>::min();
  return fit;
}

// ---- transfer and scattering matrices ------------------------------------

TransferMatrixModel TransferMatrixModel::from_entries(std::function<Complex(double)> m11,
                                                      std::function<Complex(double)> m12,
                                                      std::function<Complex(double)> m21,
                                                      std::function<Complex(double)> m22) {
  TransferMatrixModel model;
  model.entries = [=](double k) {
    Eigen::Matrix2cd m;
    m << m11(k), m12(k), m21(k), m22(k);
    return m;
  };
  return model;
}

Eigen::Matrix2cd delta_transfer(double k, double x0, Complex z) {
  if (k == 0.0) throw Error(ErrorCode::InvalidArgument, "delta scatterer transfer matrix needs k != 0");
  const Complex g = kI * z / (2.0 * k);
  const Complex phase = std::polar(1.0, 2.0 * k * x0);
  Eigen::Matrix2cd m;
  m << 1.0 - g, -g / phase, g * phase, 1.0 + g;
  return m;
}

TransferMatrixModel TransferMatrixModel::delta_array(std::vector<double> positions,
                                                     std::vector<Complex> strengths) {
  if (positions.size() != strengths.size() || positions.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "delta array needs matching, non-empty positions and strengths");
  }
  TransferMatrixModel model;
  model.entries = [positions = std::move(positions), strengths = std::move(strengths)](double k) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    for (std::size_t s = 0; s < positions.size(); ++s) m = delta_transfer(k, positions[s], strengths[s]) * m;
    return m;
  };
  return model;
}

TransferMatrixModel TransferMatrixModel::table(std::vector<double> k, std::vector<Eigen::Matrix2cd> values) {
  if (k.size() != values.size() || k.size() < 4) {
    throw Error(ErrorCode::DimensionMismatch, "transfer table needs at least 4 knots with one matrix each");
  }
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (!(k[i] > k[i - 1])) throw Error(ErrorCode::InvalidArgument, "transfer table k must increase strictly");
  }
  using Interp = boost::math::barycentric_rational<double>;
  auto parts = std::make_shared<std::array<std::unique_ptr<Interp>, 8>>();
  for (int e = 0; e < 4; ++e) {
    std::vector<double> re(k.size()), im(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
      const Complex z = values[i](e / 2, e % 2);
      re[i] = z.real();
      im[i] = z.imag();
    }
    (*parts)[2 * e] = std::make_unique<Interp>(k.begin(), k.end(), re.begin(), 3);
    (*parts)[2 * e + 1] = std::make_unique<Interp>(k.begin(), k.end(), im.begin(), 3);
  }
  const double lo = k.front(), hi = k.back();
  TransferMatrixModel model;
  model.entries = [parts, lo, hi](double q) {
    if (q < lo || q > hi) {
      throw Error(ErrorCode::InvalidArgument, "k = " + std::to_string(q) + " outside the transfer table");
    }
    Eigen::Matrix2cd m;
    for (int e = 0; e < 4; ++e) m(e / 2, e % 2) = Complex((*(*parts)[2 * e])(q), (*(*parts)[2 * e + 1])(q));
    return Eigen::Matrix2cd(m / std::sqrt(m.determinant()));
  };
  return model;
}

Eigen::Matrix2cd ScatteringData::s_matrix() const {
  Eigen::Matrix2cd s;
  s << T_l, R_r, R_l, T_r;
  return s;
}

ScatteringData scattering_data(const Eigen::Matrix2cd& m, double unimodular_tol) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "transfer matrix has non-finite entries");
  const Complex det = m.determinant();
  if (std::abs(det - 1.0) > unimodular_tol) {
    throw Error(ErrorCode::NotUnimodular, "transfer matrix determinant " + format_complex(det) + " is not 1");
  }
  const Complex m22 = m(1, 1);
  if (m22 == Complex{}) {
    throw Error(ErrorCode::SpectralSingularity, "M22 = 0: spectral singularity, coefficients diverge");
  }
  ScatteringData s;
  s.T_l = s.T_r = 1.0 / m22;
  s.R_r = m(0, 1) / m22;
  s.R_l = -m(1, 0) / m22;
  Complex disc = 1.0 - m(0, 0) * m22;
  if (disc.imag() == 0.0) disc.imag(0.0);  // -0 would put sqrt on the lower branch
  const Complex root = std::sqrt(disc);
  s.s_plus = (1.0 + root) / m22;
  s.s_minus = (1.0 - root) / m22;
  return s;
}

ScatteringData scattering_data(const TransferMatrixModel& model, double k) {
  try {
    return scattering_data(model.at(k), model.unimodular_tol);
  } catch (const Error& e) {
    throw Error(e.code(), "at k = " + std::to_string(k) + ": " + e.what());
  }
}

ScatteringState scattering_state(const TransferMatrixModel& model, double k, ScatteringSide side,
                                 const Eigen::VectorXd& x, Complex amplitude, double lo, double hi) {
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "scattering region has hi < lo");
  const ScatteringData s = scattering_data(model, k);
  ScatteringState state;
  state.side = side;
  state.amplitude = amplitude;
  state.x = x;
  state.psi.resize(x.size());
  const bool left = side == ScatteringSide::Left;
  state.reflection = left ? s.R_l : s.R_r;
  state.transmission = left ? s.T_l : s.T_r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Index i = 0; i < x.size(); ++i) {
    const Complex in = std::polar(1.0, k * x(i));    // e^{ikx}
    const Complex out = std::polar(1.0, -k * x(i));  // e^{-ikx}
    Complex psi{nan, nan};
    if (x(i) < lo) {
      psi = left ? amplitude * (in + s.R_l * out) : amplitude * s.T_r * out;
    } else if (x(i) >= hi) {
      psi = left ? amplitude * s.T_l * in : amplitude * (out + s.R_r * in);
    }
    state.psi(i) = psi;
  }
  return state;
}

MatrixTrajectory s_matrix_trajectory(const TransferMatrixModel& model, std::optional<double> step) {
  return MatrixTrajectory::finite_difference(
      2, [model](double k) -> CMatrix { return scattering_data(model, k).s_matrix(); }, step);
}

// ---- effective Hamiltonian ------------------------------------------------

namespace {

CMatrix assemble(const CMatrix& H, const std::vector<CMatrix>& L, const std::vector<Complex>& l) {
  CMatrix out = H;
  for (std::size_t k = 0; k < L.size(); ++k) {
    out += (0.5 * kI) * (std::conj(l[k]) * L[k] - l[k] * L[k].adjoint());
  }
  return out;
}

void check_spec(const EffectiveHamiltonianSpec& spec) {
  const Index n = spec.H.rows();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "H is empty");
  require_square(spec.H, n, "H");
  if (spec.L.size() != spec.l.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(spec.L.size()) + " Lindblad operators but " +
                                                  std::to_string(spec.l.size()) + " scalars");
  }
  for (std::size_t k = 0; k < spec.L.size(); ++k) require_square(spec.L[k], n, "L[" + std::to_string(k) + "]");
}

}  // namespace

ComplexSquareMatrix effective_hamiltonian(const EffectiveHamiltonianSpec& spec, double hermitian_tol,
                                          std::vector<std::string>* warnings) {
  check_spec(spec);
  const ComplexSquareMatrix H(spec.H);
  if (!H.is_hermitian(hermitian_tol) && warnings) {
    warnings->push_back("NonHermitianH: H differs from its adjoint by more than " + std::to_string(hermitian_tol));
  }
  return ComplexSquareMatrix(assemble(spec.H, spec.L, spec.l));
}

MatrixTrajectory effective_hamiltonian_trajectory(const EffectiveHamiltonianSpec& spec, const CMatrix& H_rate,
                                                  const std::vector<CMatrix>& L_rates) {
  check_spec(spec);
  const Index n = spec.H.rows();
  require_square(H_rate, n, "H_rate");
  if (L_rates.size() != spec.L.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one L_rate is needed per Lindblad operator");
  }
  for (std::size_t k = 0; k < L_rates.size(); ++k) {
    require_square(L_rates[k], n, "L_rate[" + std::to_string(k) + "]");
  }
  // The assembly is linear in (H, L_k), so the rates assemble into the derivative.
  const CMatrix rate = assemble(H_rate, L_rates, spec.l);
  auto value = [spec, H_rate, L_rates](double t) -> CMatrix {
    std::vector<CMatrix> L(spec.L.size());
    for (std::size_t k = 0; k < L.size(); ++k) L[k] = spec.L[k] + t * L_rates[k];
    return assemble(spec.H + t * H_rate, L, spec.l);
  };
  return MatrixTrajectory::analytic(
      n, value, [rate](double) { return rate; }, [n](double) -> CMatrix { return CMatrix::Zero(n, n); });
}

// ---- main result presets --------------------------------------------------

MainResultAcceleration main_result_acceleration(MainResultCase kind, const MatrixTrajectory& trajectory,
                                                double t, Index j, const MainResultOptions& options) {
  const ComplexSquareMatrix m = trajectory.value(t);
  const ComplexSquareMatrix mdot = trajectory.first_derivative(t);
  const ComplexSquareMatrix mddot = trajectory.second_derivative(t);
  const SpectralDecomposition d = decompose(m, options.tol);
  if (j < 0 || j >= d.dim()) throw Error(ErrorCode::InvalidArgument, "eigenvalue index out of range");

  std::optional<ConjugatePairing> pairing;
  if (m.is_real(0.0)) pairing = pair_conjugates(d, options.tol);
  const ConjugatePairing* pp = pairing ? &*pairing : nullptr;

  MainResultAcceleration out;
  out.exact = eigen_acceleration(d, mdot, mddot, j, pp, options.dynamics);
  if (kind == MainResultCase::ParityTime && options.transfer) {
    // Surfaces a spectral singularity at t even outside diagnostic mode.
    (void)scattering_data(*options.transfer, t);
  }
  if (!options.diagnostic) return out;

  const Index n = d.dim();
  const Index partner = pp ? pp->partner[static_cast<std::size_t>(j)] : j;
  switch (kind) {
    case MainResultCase::OpenQuantum:
      out.ansatz = breakdown_from(d.right, d.right, d.eigenvalues, mdot.matrix(), mddot.matrix(), j, partner);
      break;
    case MainResultCase::Biophysical: {
      Eigen::VectorXd grid = options.grid ? *options.grid : Eigen::VectorXd::LinSpaced(n, 0.0, double(n - 1));
      if (grid.size() != n) throw Error(ErrorCode::DimensionMismatch, "site grid length differs from N");
      LocalizationAnsatz ansatz{grid, Eigen::VectorXd(n), Eigen::VectorXd(n)};
      double xi = 0.0;
      for (Index i = 0; i < n; ++i) {
        const LocalizationFit fit = fit_localization(d.right.col(i), grid);
        ansatz.centers(i) = fit.center;
        xi = std::max(xi, fit.length);
      }
      ansatz.lengths.setConstant(xi);
      CMatrix psi(n, n);
      for (Index i = 0; i < n; ++i) psi.col(i) = localized_vector(ansatz, i).normalized().cast<Complex>();
      out.ansatz = breakdown_from(psi, psi, d.eigenvalues, mdot.matrix(), mddot.matrix(), j, partner);
      break;
    }
    case MainResultCase::ParityTime: {
      if (n != 2) throw Error(ErrorCode::DimensionMismatch, "the scattering case needs a 2x2 S-matrix");
      if (!options.transfer) {
        throw Error(ErrorCode::InvalidArgument, "diagnostic scattering case needs the transfer model");
      }
      const ScatteringData s = scattering_data(*options.transfer, t);
      Eigen::MatrixXd cost(2, 2);
      const std::array<Complex, 2> closed{s.s_plus, s.s_minus};
      for (Index a = 0; a < 2; ++a)
        for (Index b = 0; b < 2; ++b) cost(a, b) = std::abs(d.eigenvalues(a) - closed[b]);
      const auto match = min_cost_assignment(cost);
      CVector lambda(2);
      for (Index a = 0; a < 2; ++a) lambda(a) = closed[match[a]];
      out.ansatz = breakdown_from(d.left, d.right, lambda, mdot.matrix(), mddot.matrix(), j, partner);
      break;
    }
  }
  out.discrepancy = std::abs(out.ansatz->total - out.exact.total);
  return out;
}

}  // namespace eigenforce
