#include "eigenforce/dynamics.hpp"
#include "eigenforce/error.hpp"
#include "eigenforce/trajectory.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace eigenforce;

namespace {

MatrixTrajectory random_quadratic(int n, std::mt19937_64& rng) {
  return MatrixTrajectory::polynomial({oracle::random_real(n, rng).cast<Complex>(),
                                       oracle::random_real(n, rng).cast<Complex>(),
                                       oracle::random_real(n, rng).cast<Complex>()});
}

}  // namespace

TEST_CASE("polynomial trajectories have exact derivatives") {
  CMatrix a = CMatrix::Constant(2, 2, 1.0), b = CMatrix::Identity(2, 2), c = CMatrix::Constant(2, 2, Complex(0, 2));
  const auto traj = MatrixTrajectory::polynomial({a, b, c});
  const double t = 0.7;
  CHECK((traj.value(t).matrix() - (a + t * b + t * t * c)).norm() < 1e-15);
  CHECK((traj.first_derivative(t).matrix() - (b + 2 * t * c)).norm() < 1e-15);
  CHECK((traj.second_derivative(t).matrix() - 2.0 * c).norm() < 1e-15);
}

TEST_CASE("finite-difference trajectories agree with analytic derivatives") {
  std::mt19937_64 rng(21);
  const auto exact = random_quadratic(4, rng);
  const auto fd = MatrixTrajectory::finite_difference(4, [&](double t) { return exact.value(t).matrix(); });
  CHECK(fd.mode() == MatrixTrajectory::DerivativeMode::FiniteDifference);
  for (double t : {-0.3, 0.0, 1.1}) {
    CHECK((fd.first_derivative(t).matrix() - exact.first_derivative(t).matrix()).norm() < 1e-7);
    CHECK((fd.second_derivative(t).matrix() - exact.second_derivative(t).matrix()).norm() < 1e-5);
  }
}

TEST_CASE("eigen_velocity and eigen_acceleration match central differences") {
  std::mt19937_64 rng(22);
  int compared = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 3 + trial % 4;
    const auto traj = random_quadratic(n, rng);
    const double t = 0.3;
    const auto d = decompose(traj.value(t));
    if (d.min_gap < 1e-2) continue;
    const auto fd = oracle::central_differences([&](double s) { return traj.value(s).matrix(); }, t, 1e-4, 2.5e-4);
    const auto order = oracle::brute_force_match(d.eigenvalues, fd.lambda);
    for (Index j = 0; j < n; ++j) {
      const Complex vel = eigen_velocity(d, traj.first_derivative(t), j);
      const ForceBreakdown f = eigen_acceleration(d, traj.first_derivative(t), traj.second_derivative(t), j);
      CHECK(oracle::relative_error(vel, fd.first(order[j])) < 1e-6);
      CHECK(oracle::relative_error(f.total, fd.second(order[j])) < 1e-4);
    }
    ++compared;
  }
  CHECK(compared >= 5);
}

TEST_CASE("the breakdown is additive and isolates the conjugate summand") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + trial % 4;
    const auto m = ComplexSquareMatrix::from_real(oracle::random_real(n, rng));
    const auto mdot = ComplexSquareMatrix::from_real(oracle::random_real(n, rng));
    const auto mddot = ComplexSquareMatrix::from_real(oracle::random_real(n, rng));
    const auto d = decompose(m);
    const auto p = pair_conjugates(d);
    for (Index j = 0; j < n; ++j) {
      const ForceBreakdown f = eigen_acceleration(d, mdot, mddot, j, &p);
      CHECK(std::abs(f.total - (f.inertial + f.conjugate_term + f.others)) < 1e-12 * (1 + std::abs(f.total)));
      const ForceBreakdown unpaired = eigen_acceleration(d, mdot, mddot, j);
      CHECK(unpaired.conjugate_term == Complex{});
      CHECK(std::abs(unpaired.total - f.total) < 1e-10 * (1 + std::abs(f.total)));
      if (p.is_self(j)) {
        CHECK(f.conjugate_term == Complex{});
        CHECK_THROWS_AS(conjugate_force(d, p, mdot, j), Error);
        continue;
      }
      const Complex summand = conjugate_force(d, p, mdot, j, ForceForm::Summand);
      const Complex squared = conjugate_force(d, p, mdot, j, ForceForm::Squared);
      const Complex literal = conjugate_force(d, p, mdot, j, ForceForm::LiteralPaper);
      CHECK(std::abs(summand - f.conjugate_term) < 1e-12 * (1 + std::abs(summand)));
      CHECK(std::abs(summand - squared) < 1e-8 * (1 + std::abs(summand)));
      // For real data the conjugate summand is purely imaginary.
      CHECK(std::abs(squared.real()) == 0.0);
      CHECK(std::abs(literal) * std::abs(literal) * std::abs(d.eigenvalues(j).imag()) ==
            doctest::Approx(std::abs(squared)).epsilon(1e-9));
    }
  }
}

TEST_CASE("conjugate eigenvalues of real trajectories accelerate as conjugates") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + trial % 3;
    const auto traj = random_quadratic(n, rng);
    const auto d = decompose(traj.value(0.2));
    const auto p = pair_conjugates(d);
    for (Index j = 0; j < n; ++j) {
      const Index k = p.partner[static_cast<std::size_t>(j)];
      const auto fj = eigen_acceleration(d, traj.first_derivative(0.2), traj.second_derivative(0.2), j, &p);
      const auto fk = eigen_acceleration(d, traj.first_derivative(0.2), traj.second_derivative(0.2), k, &p);
      const double s = 1e-9 * (1 + std::abs(fj.total));
      CHECK(std::abs(fk.total - std::conj(fj.total)) < s);
      CHECK(std::abs(fk.conjugate_term - std::conj(fj.conjugate_term)) < s);
    }
  }
}

TEST_CASE("pair summand and its geometric form agree") {
  std::mt19937_64 rng(25);
  const auto m = ComplexSquareMatrix::from_real(oracle::random_real(6, rng));
  const auto mdot = ComplexSquareMatrix::from_real(oracle::random_real(6, rng));
  const auto d = decompose(m);
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 6; ++j) {
      if (i == j) continue;
      const Complex a = pair_summand(d, mdot, i, j);
      CHECK(std::abs(a - pair_summand_geometric(d, mdot, i, j)) < 1e-12 * (1 + std::abs(a)));
    }
  }
  const auto sep = separation({1, 1}, {0, 0});
  CHECK(std::abs(sep.r_hat) == doctest::Approx(1.0));
  CHECK(sep.r_abs == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(separation({2, 3}, {2, 3}), Error);
}

TEST_CASE("singular gaps raise SingularGapError naming the pair") {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  const auto d = decompose(ComplexSquareMatrix(m));
  const auto mdot = ComplexSquareMatrix::identity(3);
  try {
    eigen_acceleration(d, mdot, mdot, 0);
    FAIL("no exception");
  } catch (const SingularGapError& e) {
    CHECK(e.code() == ErrorCode::SingularGap);
    CHECK(e.second() == 0);
    CHECK(e.first() == 1);
  }
  CHECK_NOTHROW(eigen_acceleration(d, mdot, mdot, 2));
}

TEST_CASE("dimension mismatches are rejected") {
  const auto d = decompose(ComplexSquareMatrix::identity(3));
  CHECK_THROWS_AS(eigen_velocity(d, ComplexSquareMatrix::identity(2), 0), Error);
  CHECK_THROWS_AS(eigen_velocity(d, ComplexSquareMatrix::identity(3), 3), Error);
}

TEST_CASE("static trajectories have zero velocity and acceleration") {
  std::mt19937_64 rng(26);
  const auto m = ComplexSquareMatrix::from_real(oracle::random_real(5, rng));
  const auto d = decompose(m);
  const auto zero = ComplexSquareMatrix::zero(5);
  for (Index j = 0; j < 5; ++j) {
    CHECK(eigen_velocity(d, zero, j) == Complex{});
    CHECK(eigen_acceleration(d, zero, zero, j).total == Complex{});
  }
}

TEST_CASE("conjugate force grows like 1/Im(lambda) when the pair nears the axis linearly") {
  // M(s) = s [[0, 1], [-1, 0]] has lambda = +-is with s-independent normal
  // eigenvectors; fixed Mdot = diag(1, 0).
  const auto mdot = ComplexSquareMatrix::from_real(Eigen::Vector2d(1.0, 0.0).asDiagonal().toDenseMatrix());
  std::vector<double> x, y;
  for (double s = 1e-3; s <= 1e-1 * 1.0001; s *= std::pow(10.0, 0.25)) {
    Eigen::MatrixXd m(2, 2);
    m << 0, s, -s, 0;
    const auto d = decompose(ComplexSquareMatrix::from_real(m));
    const auto p = pair_conjugates(d);
    const Index j = d.eigenvalues(0).imag() > 0 ? 0 : 1;
    x.push_back(std::log(std::abs(d.eigenvalues(j).imag())));
    y.push_back(std::log(std::abs(conjugate_force(d, p, mdot, j))));
  }
  CHECK(oracle::slope(x, y) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("circulant basis reproduces the DFT eigen-structure") {
  const std::vector<Complex> row{{1, 0}, {2, 0}, {0.5, 0}, {-1, 0}, {0.25, 0}};
  const auto basis = circulant_basis(row);
  const auto c = circulant_matrix(row);
  CHECK(basis.real_generator);
  for (Index m = 0; m < 5; ++m) {
    const CVector v = basis.fourier.col(m);
    CHECK((c.matrix() * v - basis.eigenvalues(m) * v).norm() < 1e-12);
  }
  CHECK((basis.fourier.adjoint() * basis.fourier - CMatrix::Identity(5, 5)).norm() < 1e-12);
  CHECK(c(2, 0) == row[3]);  // C(a, b) = c[(b - a) mod n]
}

TEST_CASE("circulant acceleration equals the general formula under diagonal perturbation") {
  std::mt19937_64 rng(27);
  std::normal_distribution<double> normal;
  for (int n : {4, 5, 8, 11}) {
    std::vector<Complex> row(static_cast<std::size_t>(n));
    for (auto& c : row) c = normal(rng);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto& x : p) x = normal(rng);
    const auto basis = circulant_basis(row);
    const auto c = circulant_matrix(row);
    const auto d = decompose(c);
    const auto pairing = pair_conjugates(d);
    Eigen::VectorXd pv = Eigen::Map<Eigen::VectorXd>(p.data(), n);
    const auto mdot = ComplexSquareMatrix::from_real(pv.asDiagonal().toDenseMatrix());
    const auto zero = ComplexSquareMatrix::zero(n);
    for (Index m = 0; m < n; ++m) {
      Index j = 0;
      (d.eigenvalues.array() - basis.eigenvalues(m)).abs().minCoeff(&j);
      const Complex general = eigen_acceleration(d, mdot, zero, j, &pairing).total;
      const Complex fourier = circulant_acceleration(basis, p, m);
      CHECK(std::abs(general - fourier) <= 1e-10 * std::max(1.0, std::abs(general)));
    }
  }
}
