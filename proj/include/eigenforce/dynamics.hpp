#pragma once

#include "eigenforce/matrix.hpp"
#include "eigenforce/spectral.hpp"

#include <span>

namespace eigenforce {

// Second derivative of lambda_j split by source:
//   total = inertial + conjugate_term + others
//   inertial       = u_j^* Mddot v_j
//   conjugate_term = 2 P(jbar,j) P(j,jbar) / (lambda_j - lambda_jbar)
//   others         = same summand over i not in {j, jbar}
// with P(i,j) = u_i^* Mdot v_j. Without a pairing (or for a self-paired
// real eigenvalue) conjugate_term is zero and every summand is in others.
struct ForceBreakdown {
  Complex inertial{};
  Complex conjugate_term{};
  Complex others{};
  Complex total{};
};

struct EigenSeparation {
  Complex r_hat;  // (conj(lambda_i) - conj(lambda_j)) / |lambda_i - lambda_j|
  double r_abs;   // |lambda_i - lambda_j|
};

enum class ForceForm {
  Summand,       // the conjugate summand of lambda_ddot (canonical)
  Squared,       // -i |u_j^T Mdot v_j|^2 / Im(lambda_j); equals Summand for real M, Mdot
  LiteralPaper,  // -i |u_j^T Mdot v_j| / Im(lambda_j), unsquared
};

struct DynamicsOptions {
  double gap_tol = 1e-10;  // relative to max(1, max |lambda|)
};

// P(i,j) = u_i^* Mdot v_j for all i, j.
CMatrix coupling_matrix(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot);

// lambda_dot_j = u_j^* Mdot v_j. Throws DimensionMismatch.
Complex eigen_velocity(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot, Index j);

// Throws SingularGapError if another eigenvalue lies within the gap
// tolerance of lambda_j.
ForceBreakdown eigen_acceleration(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot,
                                  const ComplexSquareMatrix& mddot, Index j,
                                  const ConjugatePairing* pairing = nullptr,
                                  const DynamicsOptions& options = {});

// 2 P(i,j) P(j,i) / (lambda_j - lambda_i) for one i != j.
Complex pair_summand(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot, Index i, Index j);

// The same summand through the separation vector:
//   2 c_ij c_ji r_hat_ji / |r_ji|,  c_ij = u_i^* Mdot v_j.
Complex pair_summand_geometric(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot,
                               Index i, Index j);

// Force of conj(lambda_j) on lambda_j. Throws Error{RealEigenvalue} when
// lambda_j is self-paired (a collision on the real axis).
Complex conjugate_force(const SpectralDecomposition& d, const ConjugatePairing& pairing,
                        const ComplexSquareMatrix& mdot, Index j, ForceForm form = ForceForm::Summand);

// Throws Error{ZeroSeparation} when lambda_i == lambda_j.
EigenSeparation separation(Complex lambda_i, Complex lambda_j);

// Eigen-structure of a circulant matrix C(a,b) = c[(b - a) mod n]:
//   lambda_m = sum_k c_k w^(k m),  (v_m)_a = w^(a m) / sqrt(n),  w = exp(2 pi i / n).
struct CirculantBasis {
  CMatrix fourier;  // columns v_m
  CVector eigenvalues;
  bool real_generator = false;

  Index dim() const noexcept { return eigenvalues.size(); }
};

CirculantBasis circulant_basis(std::span<const Complex> first_row);
ComplexSquareMatrix circulant_matrix(std::span<const Complex> first_row);

// lambda_ddot_m of a circulant under the diagonal perturbation P = diag(p),
// Mddot = 0, evaluated in the Fourier basis:
//   -(i / Im lambda_m) |sum_a v_m^a p_a v_m^a|^2
//     + 2 sum_{i not in {m, mbar}} |sum_a conj(v_i^a) p_a v_m^a|^2 / (lambda_m - lambda_i)
// The first term is present only for a real generator and complex lambda_m.
Complex circulant_acceleration(const CirculantBasis& basis, std::span<const double> p, Index m,
                               const DynamicsOptions& options = {});

}  // namespace eigenforce
