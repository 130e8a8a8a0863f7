#pragma once

#include "eigenforce/kernels.hpp"

namespace eigenforce::kernels::detail {

ForceEvaluation evaluate_one(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot,
                             const ComplexSquareMatrix& mddot, const ConjugatePairing* pairing, Index j,
                             const DynamicsOptions& options);

}  // namespace eigenforce::kernels::detail
