#pragma once

#include "eigenforce/dynamics.hpp"
#include "eigenforce/matrix.hpp"
#include "eigenforce/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace eigenforce {

enum class PerturbationKind { Diagonal, Full };

// Gaussian perturbation P with independent zero-mean entries. Entry (m,l)
// has variance variances(m,l) when given, else sigma2 (on the diagonal only
// for the Diagonal kind). Draws are a pure function of (seed, sample index).
struct PerturbationProcess {
  PerturbationKind kind = PerturbationKind::Diagonal;
  double sigma2 = 1.0;
  std::optional<Eigen::MatrixXd> variances;
  std::uint64_t seed = 0;
  double dt = 1.0;

  void validate(Index n) const;
  Eigen::MatrixXd variance_matrix(Index n) const;
};

// Independent 64-bit stream seed for (seed, index).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

Eigen::MatrixXd sample_perturbation(const PerturbationProcess& proc, Index n, std::uint64_t sample_index);

// M + dt * P(sample_index).
ComplexSquareMatrix sample_step(const ComplexSquareMatrix& m, const PerturbationProcess& proc,
                                std::uint64_t sample_index);

enum class ExpectationForm {
  Exact,         // expectation of the conjugate summand of lambda_ddot
  LiteralPaper,  // the printed closed forms with 1/(2 Im lambda_j)
};

// -i sum_ml E[p_ml^2] |u_j^m|^2 |v_j^l|^2 / Im(lambda_j)  (Exact form).
// Throws Error{RealEigenvalue} for a self-paired lambda_j.
Complex expected_conjugate_force_general(const SpectralDecomposition& d, const ConjugatePairing& pairing,
                                         const Eigen::MatrixXd& variances, Index j,
                                         ExpectationForm form = ExpectationForm::Exact);

// I.i.d. entries with variance sigma2. Full kind: -i sigma2 |u_j|^2 / Im(lambda_j)
// (|v_j| = 1). Diagonal kind: -i sigma2 sum_a |u_j^a|^2 |v_j^a|^2 / Im(lambda_j).
// LiteralPaper returns -i sigma2 |u_j|^2 / (2 Im(lambda_j)) for either kind.
Complex expected_conjugate_force_iid(const SpectralDecomposition& d, const ConjugatePairing& pairing,
                                     double sigma2, Index j,
                                     PerturbationKind kind = PerturbationKind::Diagonal,
                                     ExpectationForm form = ExpectationForm::Exact);

struct MonteCarloEstimate {
  Complex mean{};
  Complex standard_error{};  // componentwise on Re and Im
  std::size_t samples = 0;   // samples that entered the mean
  std::size_t excluded = 0;  // non-finite draws left out
};

// Mean over Mdot = P draws of the conjugate summand for lambda_j of
// decompose(m). Sample i uses substream (proc.seed, i); the reduction runs
// in sample order, so results do not depend on the thread count.
MonteCarloEstimate monte_carlo_conjugate_force(const ComplexSquareMatrix& m, const PerturbationProcess& proc,
                                               Index j, std::size_t samples, double tol = 1e-9);

// Single-threaded reference with identical results.
MonteCarloEstimate monte_carlo_conjugate_force_serial(const ComplexSquareMatrix& m,
                                                      const PerturbationProcess& proc, Index j,
                                                      std::size_t samples, double tol = 1e-9);

}  // namespace eigenforce
