#include "eigenforce/dynamics.hpp"

#include "eigenforce/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eigenforce {

namespace {

void require_dim(const SpectralDecomposition& d, const ComplexSquareMatrix& m, const char* name) {
  if (m.dim() != d.dim()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(name) + " is " + std::to_string(m.dim()) +
                                                  "x" + std::to_string(m.dim()) +
                                                  " but the decomposition has dimension " +
                                                  std::to_string(d.dim()));
  }
}

void require_index(const SpectralDecomposition& d, Index j) {
  if (j < 0 || j >= d.dim()) {
    throw Error(ErrorCode::InvalidArgument, "eigenvalue index " + std::to_string(j) + " out of range");
  }
}

double gap_tolerance(const CVector& lambda, const DynamicsOptions& options) {
  return options.gap_tol * std::max(1.0, lambda.cwiseAbs().maxCoeff());
}

constexpr Complex kI{0.0, 1.0};

}  // namespace

CMatrix coupling_matrix(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot) {
  require_dim(d, mdot, "Mdot");
  return d.left.adjoint() * mdot.matrix() * d.right;
}

Complex eigen_velocity(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot, Index j) {
  require_dim(d, mdot, "Mdot");
  require_index(d, j);
  return d.bilinear(j, mdot.matrix(), j);
}

ForceBreakdown eigen_acceleration(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot,
                                  const ComplexSquareMatrix& mddot, Index j,
                                  const ConjugatePairing* pairing, const DynamicsOptions& options) {
  require_dim(d, mdot, "Mdot");
  require_dim(d, mddot, "Mddot");
  require_index(d, j);
  const Index n = d.dim();
  const CVector& lambda = d.eigenvalues;
  const double atol = gap_tolerance(lambda, options);

  // Column j and row j of the coupling matrix, O(n^2).
  const CVector col = d.left.adjoint() * (mdot.matrix() * d.right.col(j));
  const CVector row = (d.left.col(j).adjoint() * mdot.matrix() * d.right).transpose();
  const Index partner = pairing ? pairing->partner.at(static_cast<std::size_t>(j)) : j;

  ForceBreakdown f;
  f.inertial = d.bilinear(j, mddot.matrix(), j);
  for (Index i = 0; i < n; ++i) {
    if (i == j) continue;
    const Complex gap = lambda(j) - lambda(i);
    if (std::abs(gap) < atol) {
      throw SingularGapError(static_cast<std::size_t>(i), static_cast<std::size_t>(j), std::abs(gap));
    }
    const Complex s = 2.0 * col(i) * row(i) / gap;
    if (i == partner) {
      f.conjugate_term += s;
    } else {
      f.others += s;
    }
  }
  f.total = f.inertial + f.conjugate_term + f.others;
  return f;
}

Complex pair_summand(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot, Index i, Index j) {
  require_dim(d, mdot, "Mdot");
  require_index(d, i);
  require_index(d, j);
  if (i == j) throw Error(ErrorCode::InvalidArgument, "pair summand needs i != j");
  const Complex gap = d.eigenvalues(j) - d.eigenvalues(i);
  if (gap == Complex{}) {
    throw SingularGapError(static_cast<std::size_t>(i), static_cast<std::size_t>(j), 0.0);
  }
  return 2.0 * d.bilinear(i, mdot.matrix(), j) * d.bilinear(j, mdot.matrix(), i) / gap;
}

Complex pair_summand_geometric(const SpectralDecomposition& d, const ComplexSquareMatrix& mdot,
                               Index i, Index j) {
  require_dim(d, mdot, "Mdot");
  require_index(d, i);
  require_index(d, j);
  const EigenSeparation sep = separation(d.eigenvalues(j), d.eigenvalues(i));
  const Complex c_ij = d.bilinear(i, mdot.matrix(), j);
  const Complex c_ji = d.bilinear(j, mdot.matrix(), i);
  return 2.0 * c_ij * c_ji * sep.r_hat / sep.r_abs;
}

Complex conjugate_force(const SpectralDecomposition& d, const ConjugatePairing& pairing,
                        const ComplexSquareMatrix& mdot, Index j, ForceForm form) {
  require_dim(d, mdot, "Mdot");
  require_index(d, j);
  if (static_cast<Index>(pairing.partner.size()) != d.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "pairing does not belong to this decomposition");
  }
  const Index k = pairing.partner[static_cast<std::size_t>(j)];
  if (k == j) {
    throw Error(ErrorCode::RealEigenvalue,
                "eigenvalue " + std::to_string(j) + " is real; its conjugate force is singular");
  }
  const double im = d.eigenvalues(j).imag();
  switch (form) {
    case ForceForm::Summand:
      return pair_summand(d, mdot, k, j);
    case ForceForm::Squared: {
      const Complex c = d.left.col(j).transpose() * mdot.matrix() * d.right.col(j);
      return -kI * std::norm(c) / im;
    }
    case ForceForm::LiteralPaper: {
      const Complex c = d.left.col(j).transpose() * mdot.matrix() * d.right.col(j);
      return -kI * std::abs(c) / im;
    }
  }
  return {};
}

EigenSeparation separation(Complex lambda_i, Complex lambda_j) {
  const Complex diff = lambda_i - lambda_j;
  const double r_abs = std::hypot(diff.real(), diff.imag());
  if (r_abs == 0.0) throw Error(ErrorCode::ZeroSeparation, "eigenvalues coincide; r_hat is undefined");
  return {std::conj(diff) / r_abs, r_abs};
}

CirculantBasis circulant_basis(std::span<const Complex> first_row) {
  const auto n = static_cast<Index>(first_row.size());
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "circulant needs a non-empty first row");
  CirculantBasis basis;
  basis.fourier.resize(n, n);
  basis.eigenvalues.setZero(n);
  basis.real_generator = std::all_of(first_row.begin(), first_row.end(),
                                     [](Complex c) { return c.imag() == 0.0; });
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (Index m = 0; m < n; ++m) {
    for (Index a = 0; a < n; ++a) {
      // Reduce a*m mod n so the phase stays exact for large indices.
      const double phase = w * static_cast<double>((a * m) % n);
      basis.fourier(a, m) = std::polar(inv_sqrt_n, phase);
      basis.eigenvalues(m) += first_row[static_cast<std::size_t>(a)] * std::polar(1.0, phase);
    }
  }
  return basis;
}

ComplexSquareMatrix circulant_matrix(std::span<const Complex> first_row) {
  const auto n = static_cast<Index>(first_row.size());
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "circulant needs a non-empty first row");
  CMatrix c(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) c(a, b) = first_row[static_cast<std::size_t>((b - a + n) % n)];
  return ComplexSquareMatrix(std::move(c));
}

Complex circulant_acceleration(const CirculantBasis& basis, std::span<const double> p, Index m,
                               const DynamicsOptions& options) {
  const Index n = basis.dim();
  if (static_cast<Index>(p.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "perturbation length differs from circulant dimension");
  }
  if (m < 0 || m >= n) throw Error(ErrorCode::InvalidArgument, "Fourier mode out of range");
  const CVector& lambda = basis.eigenvalues;
  const CMatrix& v = basis.fourier;
  const double atol = gap_tolerance(lambda, options);

  const Index mbar = (n - m) % n;
  const bool has_partner = basis.real_generator && mbar != m && lambda(m).imag() != 0.0;

  Complex acc{};
  if (has_partner) {
    Complex c{};
    for (Index a = 0; a < n; ++a) c += v(a, m) * p[static_cast<std::size_t>(a)] * v(a, m);
    acc += -kI * std::norm(c) / lambda(m).imag();
  }
  for (Index i = 0; i < n; ++i) {
    if (i == m || (has_partner && i == mbar)) continue;
    const Complex gap = lambda(m) - lambda(i);
    if (std::abs(gap) < atol) {
      throw SingularGapError(static_cast<std::size_t>(i), static_cast<std::size_t>(m), std::abs(gap));
    }
    Complex c{};
    for (Index a = 0; a < n; ++a) c += std::conj(v(a, i)) * p[static_cast<std::size_t>(a)] * v(a, m);
    acc += 2.0 * std::norm(c) / gap;
  }
  return acc;
}

}  // namespace eigenforce
