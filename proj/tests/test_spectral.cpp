#include "eigenforce/error.hpp"
#include "eigenforce/spectral.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace eigenforce;

namespace {

ComplexSquareMatrix random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix m(n, n);
  for (int i = 0; i < n * n; ++i) m.data()[i] = {normal(rng), normal(rng)};
  return ComplexSquareMatrix(m);
}

}  // namespace

TEST_CASE("decompose returns biorthonormal eigen-triples") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const ComplexSquareMatrix m = trial % 2 ? random_complex(n, rng)
                                            : ComplexSquareMatrix::from_real(oracle::random_real(n, rng));
    const SpectralDecomposition d = decompose(m);
    const double scale = m.frobenius_norm();
    CHECK((d.left.adjoint() * d.right - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
    for (Index j = 0; j < n; ++j) {
      CHECK(d.right.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK((m.matrix() * d.right.col(j) - d.eigenvalues(j) * d.right.col(j)).norm() < 1e-10 * scale);
      CHECK((d.left.col(j).adjoint() * m.matrix() - d.eigenvalues(j) * d.left.col(j).adjoint()).norm() <
            1e-10 * scale * d.left.col(j).norm());
    }
    CHECK(oracle::multiset_distance(d.eigenvalues, oracle::eigenvalues(m.matrix())) < 1e-10 * scale);
  }
}

TEST_CASE("eigenvalues come out ordered by real part, then imaginary part") {
  std::mt19937_64 rng(2);
  const auto d = decompose(ComplexSquareMatrix::from_real(oracle::random_real(9, rng)));
  for (Index j = 1; j < d.dim(); ++j) {
    const Complex a = d.eigenvalues(j - 1), b = d.eigenvalues(j);
    CHECK((a.real() < b.real() || (a.real() == b.real() && a.imag() <= b.imag())));
  }
}

TEST_CASE("real matrices give conjugate-closed spectra with an involutive pairing") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + trial % 9;
    const auto d = decompose(ComplexSquareMatrix::from_real(oracle::random_real(n, rng)));
    const ConjugatePairing p = pair_conjugates(d);
    for (Index j = 0; j < n; ++j) {
      const Index k = p.partner[static_cast<std::size_t>(j)];
      CHECK(p.partner[static_cast<std::size_t>(k)] == j);
      CHECK(std::abs(d.eigenvalues(k) - std::conj(d.eigenvalues(j))) < 1e-9);
      if (k != j) {
        // Phase-fixed right vectors of a conjugate pair are conjugates.
        CHECK((d.right.col(k) - d.right.col(j).conjugate()).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("pairing fails on a spectrum that is not conjugate-closed") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = {0, 1};
  m(1, 1) = {2, 0};
  const auto d = decompose(ComplexSquareMatrix(m));
  try {
    pair_conjugates(d);
    FAIL("pairing accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PairingFailure);
  }
}

TEST_CASE("degenerate and defective spectra are flagged, not rejected") {
  const auto id = decompose(ComplexSquareMatrix::identity(3));
  CHECK(id.degenerate);
  CHECK(id.min_gap == 0.0);
  for (auto f : id.condition_flags) CHECK((f & kNearDegenerate) != 0);

  CMatrix jordan = CMatrix::Zero(2, 2);
  jordan(0, 1) = 1.0;
  const auto jd = decompose(ComplexSquareMatrix(jordan));
  CHECK(jd.degenerate);
  bool ill = false;
  for (auto f : jd.condition_flags) ill = ill || (f & kIllConditioned);
  CHECK(ill);
}

TEST_CASE("permuted reorders every field consistently") {
  std::mt19937_64 rng(4);
  const auto d = decompose(ComplexSquareMatrix::from_real(oracle::random_real(5, rng)));
  const std::vector<Index> perm{3, 0, 4, 1, 2};
  const auto p = permuted(d, perm);
  for (Index j = 0; j < 5; ++j) {
    CHECK(p.eigenvalues(j) == d.eigenvalues(perm[j]));
    CHECK(p.right.col(j) == d.right.col(perm[j]));
    CHECK(p.left.col(j) == d.left.col(perm[j]));
  }
  CHECK_THROWS_AS(permuted(d, {0, 1}), Error);
}

TEST_CASE("match_paths follows small steps like brute force and never beats identity cost") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 5;
    const Eigen::MatrixXd a = oracle::random_real(n, rng);
    const Eigen::MatrixXd b = oracle::random_real(n, rng, 1e-3);
    const auto d0 = decompose(ComplexSquareMatrix::from_real(a));
    const auto d1 = decompose(ComplexSquareMatrix::from_real(a + b));
    const PathMatch pm = match_paths(d0, d1);
    CHECK(pm.cost <= pm.identity_cost + 1e-15);
    if (pm.ambiguous) continue;
    const auto slow = oracle::brute_force_match(d0.eigenvalues, d1.eigenvalues);
    for (int i = 0; i < n; ++i) CHECK(pm.permutation[i] == slow[i]);
  }
}

TEST_CASE("match_paths flags a tie between assignments as ambiguous") {
  // Every assignment onto the spectrum {0, 0} costs the same.
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = 1.0;
  const auto d0 = decompose(ComplexSquareMatrix(a));
  const auto d1 = decompose(ComplexSquareMatrix::zero(2));
  const PathMatch pm = match_paths(d0, d1);
  CHECK(pm.ambiguous);
  CHECK(pm.ambiguous_pairs.size() == 1);
  std::set<Index> seen(pm.permutation.begin(), pm.permutation.end());
  CHECK(seen.size() == 2);
}
