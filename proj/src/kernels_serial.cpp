#include "eigenforce/error.hpp"
#include "kernels_common.hpp"

#include <limits>

namespace eigenforce::kernels {

namespace detail {

ForceEvaluation evaluate_one(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot,
                             const ComplexSquareMatrix& mddot, const ConjugatePairing* pairing, Index j,
                             const DynamicsOptions& options) {
  ForceEvaluation out;
  out.velocity = eigen_velocity(d, mdot, j);
  try {
    out.force = eigen_acceleration(d, mdot, mddot, j, pairing, options);
  } catch (const SingularGapError& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Complex z{nan, nan};
    out.force = {z, z, z, z};
    out.singular = true;
    out.singular_with = static_cast<Index>(e.first());
  }
  return out;
}

}  // namespace detail

std::vector<ForceEvaluation> evaluate_forces_serial(const SpectralDecomposition& d,
                                                    const ComplexSquareMatrix& mdot,
                                                    const ComplexSquareMatrix& mddot,
                                                    const ConjugatePairing* pairing,
                                                    std::span<const Index> indices,
                                                    const DynamicsOptions& options) {
  std::vector<ForceEvaluation> out(indices.size());
  for (std::size_t q = 0; q < indices.size(); ++q) {
    out[q] = detail::evaluate_one(d, mdot, mddot, pairing, indices[q], options);
  }
  return out;
}

ConjugateSummandContext ConjugateSummandContext::from(const SpectralDecomposition& d,
                                                      const ConjugatePairing& pairing, Index j) {
  if (j < 0 || j >= d.dim()) throw Error(ErrorCode::InvalidArgument, "eigenvalue index out of range");
  const Index k = pairing.partner.at(static_cast<std::size_t>(j));
  if (k == j) {
    throw Error(ErrorCode::RealEigenvalue,
                "eigenvalue " + std::to_string(j) + " is real; its conjugate force is singular");
  }
  return {d.left.col(j), d.right.col(j), d.left.col(k), d.right.col(k), d.eigenvalues(j), d.eigenvalues(k)};
}

Complex ConjugateSummandContext::evaluate(const Eigen::MatrixXd& p, PerturbationKind kind) const {
  Complex a{}, b{};
  if (kind == PerturbationKind::Diagonal) {
    for (Index m = 0; m < v_j.size(); ++m) {
      a += std::conj(u_k(m)) * p(m, m) * v_j(m);
      b += std::conj(u_j(m)) * p(m, m) * v_k(m);
    }
  } else {
    const CMatrix pc = p.cast<Complex>();
    a = u_k.dot(pc * v_j);
    b = u_j.dot(pc * v_k);
  }
  return 2.0 * a * b / (lambda_j - lambda_k);
}

std::vector<Complex> conjugate_samples_serial(const ConjugateSummandContext& ctx,
                                              const PerturbationProcess& proc, std::size_t samples) {
  const Index n = ctx.v_j.size();
  std::vector<Complex> out(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    out[i] = ctx.evaluate(sample_perturbation(proc, n, i), proc.kind);
  }
  return out;
}

}  // namespace eigenforce::kernels
