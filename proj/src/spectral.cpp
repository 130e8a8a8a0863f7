#include "eigenforce/spectral.hpp"

#include "eigenforce/assignment.hpp"
#include "eigenforce/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace eigenforce {

namespace {

// Rotates v so that its largest-modulus component (first one on ties) is
// real and positive. Makes eigenvectors of conjugate eigenvalues of a real
// matrix come out as exact conjugates of each other up to round-off.
void fix_phase(Eigen::Ref<CVector> v) {
  const double peak = v.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) return;
  for (Index a = 0; a < v.size(); ++a) {
    if (std::abs(v(a)) >= (1.0 - 1e-10) * peak) {
      v *= std::conj(v(a)) / std::abs(v(a));
      return;
    }
  }
}

double spectral_scale(const CVector& lambda) {
  return lambda.size() ? std::max(1.0, lambda.cwiseAbs().maxCoeff()) : 1.0;
}

}  // namespace

SpectralDecomposition decompose(const ComplexSquareMatrix& m, double tol) {
  const Index n = m.dim();

  Eigen::ComplexEigenSolver<CMatrix> right_solver(m.matrix(), true);
  if (right_solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "eigensolver failed on the matrix");
  }
  Eigen::ComplexEigenSolver<CMatrix> left_solver(CMatrix(m.matrix().adjoint()), true);
  if (left_solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergence, "eigensolver failed on the adjoint matrix");
  }

  const CVector& raw = right_solver.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (raw(a).real() != raw(b).real()) return raw(a).real() < raw(b).real();
    if (raw(a).imag() != raw(b).imag()) return raw(a).imag() < raw(b).imag();
    return a < b;
  });

  SpectralDecomposition d;
  d.eigenvalues.resize(n);
  d.right.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    d.eigenvalues(j) = raw(order[j]);
    CVector v = right_solver.eigenvectors().col(order[j]);
    v.normalize();
    fix_phase(v);
    d.right.col(j) = v;
  }

  // Left vectors: eigenvectors of M^* belong to conj(lambda). Match them to
  // the right vectors by eigenvalue; overlap breaks near-ties.
  const CVector& mu = left_solver.eigenvalues();
  const CMatrix& w = left_solver.eigenvectors();
  const double tie = tol * spectral_scale(d.eigenvalues);
  Eigen::MatrixXd cost(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      const double wn = w.col(k).norm();
      const double overlap = wn > 0.0 ? std::abs(w.col(k).dot(d.right.col(j))) / wn : 0.0;
      cost(j, k) = std::abs(d.eigenvalues(j) - std::conj(mu(k))) + tie * (1.0 - overlap);
    }
  }
  const auto match = min_cost_assignment(cost);

  d.left.resize(n, n);
  d.condition_flags.assign(static_cast<std::size_t>(n), kConditionOk);
  for (Index j = 0; j < n; ++j) {
    CVector u = w.col(match[j]);
    const Complex s = u.dot(d.right.col(j));
    if (std::abs(s) > 0.0) {
      u /= std::conj(s);
    } else {
      u.setConstant(Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
    }
    d.left.col(j) = u;
    const double kappa = u.norm();
    if (!(kappa <= kIllConditionedThreshold)) d.condition_flags[j] |= kIllConditioned;
  }

  d.min_gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double gap = std::abs(d.eigenvalues(i) - d.eigenvalues(j));
      d.min_gap = std::min(d.min_gap, gap);
      if (gap < tol) {
        d.condition_flags[i] |= kNearDegenerate;
        d.condition_flags[j] |= kNearDegenerate;
      }
    }
  }
  d.degenerate = d.min_gap < tol;
  return d;
}

SpectralDecomposition permuted(const SpectralDecomposition& d, const std::vector<Index>& perm) {
  const Index n = d.dim();
  if (static_cast<Index>(perm.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "permutation length differs from dimension");
  }
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  out.left.resize(n, n);
  out.condition_flags.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const Index src = perm[j];
    out.eigenvalues(j) = d.eigenvalues(src);
    out.right.col(j) = d.right.col(src);
    out.left.col(j) = d.left.col(src);
    out.condition_flags[j] = d.condition_flags[src];
  }
  out.min_gap = d.min_gap;
  out.degenerate = d.degenerate;
  return out;
}

ConjugatePairing pair_conjugates(const SpectralDecomposition& d, double tol) {
  const Index n = d.dim();
  const CVector& lambda = d.eigenvalues;
  ConjugatePairing pairing;
  pairing.tolerance = tol * spectral_scale(lambda);
  const double atol = pairing.tolerance;

  Eigen::MatrixXd cost(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) cost(j, k) = std::abs(lambda(k) - std::conj(lambda(j)));
  const auto sigma = min_cost_assignment(cost);

  constexpr Index unset = -1;
  pairing.partner.assign(static_cast<std::size_t>(n), unset);
  auto fail = [&](Index j) {
    throw Error(ErrorCode::PairingFailure,
                "eigenvalue " + std::to_string(j) + " has no complex conjugate within tolerance " +
                    std::to_string(atol));
  };

  for (Index j = 0; j < n; ++j) {
    if (pairing.partner[j] != unset) continue;
    Index k = sigma[j];
    if (k != j && pairing.partner[k] != unset) {
      // Degenerate clusters can yield a non-involutive optimum; repair
      // greedily with the nearest unpaired conjugate.
      k = unset;
      double best = std::numeric_limits<double>::infinity();
      for (Index c = 0; c < n; ++c) {
        if (c == j || pairing.partner[c] != unset) continue;
        if (cost(j, c) < best) {
          best = cost(j, c);
          k = c;
        }
      }
      if (k == unset) k = j;
    }
    // Classify the pair symmetrically so near-axis pairs stay involutive.
    const double im = 0.5 * (std::abs(lambda(j).imag()) + std::abs(lambda(k).imag()));
    if (k == j || im <= atol) {
      if (std::abs(lambda(j).imag()) > atol) fail(j);
      pairing.partner[j] = j;
      continue;
    }
    if (cost(j, k) > atol) fail(j);
    pairing.partner[j] = k;
    pairing.partner[k] = j;
  }
  return pairing;
}

PathMatch match_paths(const SpectralDecomposition& prev, const SpectralDecomposition& next, double tol) {
  const Index n = prev.dim();
  if (next.dim() != n) {
    throw Error(ErrorCode::DimensionMismatch, "cannot match spectra of different dimensions");
  }
  Eigen::MatrixXd cost(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) cost(j, k) = std::abs(next.eigenvalues(k) - prev.eigenvalues(j));

  PathMatch match;
  match.permutation = min_cost_assignment(cost);
  auto& perm = match.permutation;

  const double atol =
      tol * std::max(spectral_scale(prev.eigenvalues), spectral_scale(next.eigenvalues));
  const Eigen::MatrixXd overlap = (prev.left.adjoint() * next.right).cwiseAbs();
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      const double delta =
          cost(a, perm[b]) + cost(b, perm[a]) - cost(a, perm[a]) - cost(b, perm[b]);
      if (delta > atol) continue;
      match.ambiguous = true;
      match.ambiguous_pairs.emplace_back(a, b);
      if (overlap(a, perm[b]) + overlap(b, perm[a]) > overlap(a, perm[a]) + overlap(b, perm[b])) {
        std::swap(perm[a], perm[b]);
      }
    }
  }

  match.cost = assignment_cost(cost, perm);
  match.identity_cost = cost.diagonal().sum();
  return match;
}

}  // namespace eigenforce
