#include "kernels_common.hpp"

#include <omp.h>

namespace eigenforce::kernels {

std::vector<ForceEvaluation> evaluate_forces_parallel(const SpectralDecomposition& d,
                                                      const ComplexSquareMatrix& mdot,
                                                      const ComplexSquareMatrix& mddot,
                                                      const ConjugatePairing* pairing,
                                                      std::span<const Index> indices,
                                                      const DynamicsOptions& options) {
  // Dimension problems are reported before entering the parallel region.
  if (!indices.empty()) (void)eigen_velocity(d, mdot, indices.front());
  if (mddot.dim() != d.dim()) return evaluate_forces_serial(d, mdot, mddot, pairing, indices, options);

  const auto count = static_cast<std::ptrdiff_t>(indices.size());
  std::vector<ForceEvaluation> out(indices.size());
#pragma omp parallel for schedule(static) if (count > 4)
  for (std::ptrdiff_t q = 0; q < count; ++q) {
    out[q] = detail::evaluate_one(d, mdot, mddot, pairing, indices[q], options);
  }
  return out;
}

std::vector<Complex> conjugate_samples_parallel(const ConjugateSummandContext& ctx,
                                                const PerturbationProcess& proc, std::size_t samples) {
  const Index n = ctx.v_j.size();
  const auto count = static_cast<std::ptrdiff_t>(samples);
  std::vector<Complex> out(samples);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[i] = ctx.evaluate(sample_perturbation(proc, n, static_cast<std::uint64_t>(i)), proc.kind);
  }
  return out;
}

}  // namespace eigenforce::kernels
