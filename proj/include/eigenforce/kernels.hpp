#pragma once

// Data-parallel inner loops. Every *_parallel kernel has a *_serial twin
// that produces bitwise-identical output; tests compare the two and the
// benchmark times them.

#include "eigenforce/dynamics.hpp"
#include "eigenforce/spectral.hpp"
#include "eigenforce/stochastic.hpp"

#include <span>
#include <vector>

namespace eigenforce::kernels {

struct ForceEvaluation {
  Complex velocity{};
  ForceBreakdown force;
  bool singular = false;  // force fields are NaN
  Index singular_with = -1;
};

std::vector<ForceEvaluation> evaluate_forces_serial(const SpectralDecomposition& d,
                                                    const ComplexSquareMatrix& mdot,
                                                    const ComplexSquareMatrix& mddot,
                                                    const ConjugatePairing* pairing,
                                                    std::span<const Index> indices,
                                                    const DynamicsOptions& options = {});

std::vector<ForceEvaluation> evaluate_forces_parallel(const SpectralDecomposition& d,
                                                      const ComplexSquareMatrix& mdot,
                                                      const ComplexSquareMatrix& mddot,
                                                      const ConjugatePairing* pairing,
                                                      std::span<const Index> indices,
                                                      const DynamicsOptions& options = {});

// Eigen-data of lambda_j and its partner lambda_k needed for the conjugate
// summand 2 (u_k^* P v_j)(u_j^* P v_k) / (lambda_j - lambda_k).
struct ConjugateSummandContext {
  CVector u_j, v_j, u_k, v_k;
  Complex lambda_j, lambda_k;

  static ConjugateSummandContext from(const SpectralDecomposition& d, const ConjugatePairing& pairing,
                                      Index j);
  Complex evaluate(const Eigen::MatrixXd& p, PerturbationKind kind) const;
};

// out[i] = conjugate summand for Mdot = sample_perturbation(proc, n, i).
std::vector<Complex> conjugate_samples_serial(const ConjugateSummandContext& ctx,
                                              const PerturbationProcess& proc, std::size_t samples);
std::vector<Complex> conjugate_samples_parallel(const ConjugateSummandContext& ctx,
                                                const PerturbationProcess& proc, std::size_t samples);

}  // namespace eigenforce::kernels
