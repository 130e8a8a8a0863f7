#include "eigenforce/stochastic.hpp"

#include "eigenforce/error.hpp"
#include "eigenforce/kernels.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace eigenforce {

namespace {

constexpr Complex kI{0.0, 1.0};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Index require_partner(const SpectralDecomposition& d, const ConjugatePairing& pairing, Index j) {
  if (j < 0 || j >= d.dim()) throw Error(ErrorCode::InvalidArgument, "eigenvalue index out of range");
  if (static_cast<Index>(pairing.partner.size()) != d.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "pairing does not belong to this decomposition");
  }
  const Index k = pairing.partner[static_cast<std::size_t>(j)];
  if (k == j) {
    throw Error(ErrorCode::RealEigenvalue,
                "eigenvalue " + std::to_string(j) + " is real; its expected conjugate force is singular");
  }
  return k;
}

MonteCarloEstimate reduce(const std::vector<Complex>& draws) {
  MonteCarloEstimate est;
  Complex sum{};
  for (const Complex& z : draws) {
    if (std::isfinite(z.real()) && std::isfinite(z.imag())) {
      sum += z;
      ++est.samples;
    } else {
      ++est.excluded;
    }
  }
  if (est.samples == 0) {
    throw Error(ErrorCode::EmptyEstimate, "Monte Carlo estimate has no finite samples");
  }
  const double count = static_cast<double>(est.samples);
  est.mean = sum / count;
  if (est.samples < 2) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    est.standard_error = {nan, nan};
    return est;
  }
  double sre = 0.0, sim = 0.0;
  for (const Complex& z : draws) {
    if (!(std::isfinite(z.real()) && std::isfinite(z.imag()))) continue;
    const Complex dz = z - est.mean;
    sre += dz.real() * dz.real();
    sim += dz.imag() * dz.imag();
  }
  est.standard_error = {std::sqrt(sre / (count - 1.0) / count), std::sqrt(sim / (count - 1.0) / count)};
  return est;
}

template <class Kernel>
MonteCarloEstimate monte_carlo(const ComplexSquareMatrix& m, const PerturbationProcess& proc, Index j,
                               std::size_t samples, double tol, Kernel kernel) {
  if (samples == 0) throw Error(ErrorCode::EmptyEstimate, "Monte Carlo estimate needs at least one sample");
  if (!m.is_real(0.0)) {
    throw Error(ErrorCode::InvalidArgument, "the conjugate force is defined for real matrices only");
  }
  proc.validate(m.dim());
  const SpectralDecomposition d = decompose(m, tol);
  const ConjugatePairing pairing = pair_conjugates(d, tol);
  const auto ctx = kernels::ConjugateSummandContext::from(d, pairing, j);
  return reduce(kernel(ctx, proc, samples));
}

}  // namespace

void PerturbationProcess::validate(Index n) const {
  if (!(std::isfinite(sigma2) && sigma2 >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "perturbation variance must be finite and non-negative");
  }
  if (!(std::isfinite(dt) && dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "perturbation time step must be finite and positive");
  }
  if (variances) {
    if (variances->rows() != n || variances->cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "variance matrix must be " + std::to_string(n) + "x" +
                                                    std::to_string(n));
    }
    if (!variances->allFinite() || (variances->array() < 0.0).any()) {
      throw Error(ErrorCode::InvalidArgument, "variance matrix entries must be finite and non-negative");
    }
  }
}

Eigen::MatrixXd PerturbationProcess::variance_matrix(Index n) const {
  Eigen::MatrixXd v = variances ? *variances : Eigen::MatrixXd::Constant(n, n, sigma2);
  if (kind == PerturbationKind::Diagonal) v = Eigen::MatrixXd(v.diagonal().asDiagonal());
  return v;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

Eigen::MatrixXd sample_perturbation(const PerturbationProcess& proc, Index n, std::uint64_t sample_index) {
  std::mt19937_64 rng(substream_seed(proc.seed, sample_index));
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  if (proc.kind == PerturbationKind::Diagonal) {
    for (Index a = 0; a < n; ++a) {
      const double var = proc.variances ? (*proc.variances)(a, a) : proc.sigma2;
      p(a, a) = normal(rng) * std::sqrt(var);
    }
  } else {
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        const double var = proc.variances ? (*proc.variances)(a, b) : proc.sigma2;
        p(a, b) = normal(rng) * std::sqrt(var);
      }
    }
  }
  return p;
}

ComplexSquareMatrix sample_step(const ComplexSquareMatrix& m, const PerturbationProcess& proc,
                                std::uint64_t sample_index) {
  proc.validate(m.dim());
  const Eigen::MatrixXd p = sample_perturbation(proc, m.dim(), sample_index);
  return ComplexSquareMatrix(CMatrix(m.matrix() + proc.dt * p.cast<Complex>()));
}

Complex expected_conjugate_force_general(const SpectralDecomposition& d, const ConjugatePairing& pairing,
                                         const Eigen::MatrixXd& variances, Index j, ExpectationForm form) {
  require_partner(d, pairing, j);
  const Index n = d.dim();
  if (variances.rows() != n || variances.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "variance matrix does not match the decomposition");
  }
  const Eigen::VectorXd u2 = d.left.col(j).cwiseAbs2();
  const Eigen::VectorXd v2 = d.right.col(j).cwiseAbs2();
  const double weight = u2.dot(variances * v2);
  const double im = d.eigenvalues(j).imag();
  const double scale = form == ExpectationForm::Exact ? 1.0 : 0.5;
  return -kI * scale * weight / im;
}

Complex expected_conjugate_force_iid(const SpectralDecomposition& d, const ConjugatePairing& pairing,
                                     double sigma2, Index j, PerturbationKind kind, ExpectationForm form) {
  require_partner(d, pairing, j);
  const double im = d.eigenvalues(j).imag();
  if (form == ExpectationForm::LiteralPaper) {
    return -kI * sigma2 * d.left.col(j).squaredNorm() / (2.0 * im);
  }
  if (kind == PerturbationKind::Full) {
    return -kI * sigma2 * d.left.col(j).squaredNorm() * d.right.col(j).squaredNorm() / im;
  }
  const double weight = d.left.col(j).cwiseAbs2().dot(d.right.col(j).cwiseAbs2());
  return -kI * sigma2 * weight / im;
}

MonteCarloEstimate monte_carlo_conjugate_force(const ComplexSquareMatrix& m, const PerturbationProcess& proc,
                                               Index j, std::size_t samples, double tol) {
  return monte_carlo(m, proc, j, samples, tol, kernels::conjugate_samples_parallel);
}

MonteCarloEstimate monte_carlo_conjugate_force_serial(const ComplexSquareMatrix& m,
                                                      const PerturbationProcess& proc, Index j,
                                                      std::size_t samples, double tol) {
  return monte_carlo(m, proc, j, samples, tol, kernels::conjugate_samples_serial);
}

}  // namespace eigenforce
