#pragma once

#include "eigenforce/matrix.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace eigenforce {

enum ConditionFlag : std::uint32_t {
  kConditionOk = 0,
  kNearDegenerate = 1u << 0,  // some other eigenvalue closer than tol
  kIllConditioned = 1u << 1,  // |u_j| |v_j| above kIllConditionedThreshold
};

inline constexpr double kIllConditionedThreshold = 1e8;

// Eigenvalues with biorthonormal left/right eigenvectors of one matrix.
//   M v_j = lambda_j v_j,  u_j^* M = lambda_j u_j^*,  u_j^* v_i = delta_ij,
//   |v_j|_2 = 1 (the biorthogonal scale lives entirely in u_j).
// Eigenvalues are ordered by (Re, Im, solver index) unless the decomposition
// has been reordered into path order with permuted().
struct SpectralDecomposition {
  CVector eigenvalues;
  CMatrix right;  // columns v_j
  CMatrix left;   // columns u_j
  std::vector<std::uint32_t> condition_flags;
  double min_gap = 0.0;
  bool degenerate = false;  // min_gap < tol

  Index dim() const noexcept { return eigenvalues.size(); }

  // u_i^* X v_j
  Complex bilinear(Index i, const CMatrix& x, Index j) const {
    return left.col(i).dot(x * right.col(j));
  }

  double condition_number(Index j) const { return left.col(j).norm() * right.col(j).norm(); }
};

// Dense eigendecomposition of a general square matrix. Left vectors come from
// the decomposition of M^*, are matched to right vectors by eigenvalue and
// scaled so u_j^* v_j = 1. Near-degenerate spectra are flagged, not rejected.
// Throws Error{NonConvergence} if the eigensolver fails.
SpectralDecomposition decompose(const ComplexSquareMatrix& m, double tol = 1e-9);

// Returns the decomposition reordered so that entry j is entry perm[j] of d.
SpectralDecomposition permuted(const SpectralDecomposition& d, const std::vector<Index>& perm);

struct ConjugatePairing {
  std::vector<Index> partner;  // partner[j] == j for real eigenvalues
  double tolerance = 0.0;      // absolute tolerance actually applied

  bool is_self(Index j) const { return partner[static_cast<std::size_t>(j)] == j; }
};

// Pairs each eigenvalue with its complex conjugate. tol is relative to
// max(1, max |lambda|). Eigenvalues with |Im| <= tolerance pair with
// themselves. Throws Error{PairingFailure} when the spectrum is not
// conjugate-closed to tolerance.
ConjugatePairing pair_conjugates(const SpectralDecomposition& d, double tol = 1e-9);

struct PathMatch {
  std::vector<Index> permutation;  // path j of prev continues as entry permutation[j] of next
  double cost = 0.0;               // sum_j |lambda_next[perm[j]] - lambda_prev[j]|
  double identity_cost = 0.0;
  bool ambiguous = false;
  std::vector<std::pair<Index, Index>> ambiguous_pairs;  // prev indices whose swap is within tolerance
};

// Minimum-cost bijection between consecutive spectra. Swaps whose cost
// differs from the optimum by at most tol * max(1, max |lambda|) are flagged
// ambiguous and resolved by the larger eigenvector overlap |u_prev^* v_next|.
PathMatch match_paths(const SpectralDecomposition& prev, const SpectralDecomposition& next,
                      double tol = 1e-9);

}  // namespace eigenforce
