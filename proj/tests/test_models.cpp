#include "eigenforce/error.hpp"
#include "eigenforce/models.hpp"
#include "eigenforce/spectral.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace eigenforce;

namespace {

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Eigen::Matrix2cd random_unimodular(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  while (true) {
    const Complex m11(normal(rng), normal(rng)), m12(normal(rng), normal(rng)), m22(normal(rng), normal(rng));
    if (std::abs(m12) < 1e-3 || std::abs(m22) < 1e-4) continue;
    Eigen::Matrix2cd m;
    m << m11, m12, (m11 * m22 - 1.0) / m12, m22;
    return m;
  }
}

}  // namespace

TEST_CASE("omega for N=3, D=1, a=0") {
  BiophysicalRing ring;
  ring.N = 3;
  const auto omega = build_omega(ring);
  for (Index r = 0; r < 3; ++r) {
    std::vector<double> row{omega(r, 0).real(), omega(r, 1).real(), omega(r, 2).real()};
    std::sort(row.begin(), row.end());
    CHECK(row == std::vector<double>{-2.0, 1.0, 1.0});
  }
  oracle::CVector expect(3);
  expect << 0.0, -3.0, -3.0;
  CHECK(oracle::multiset_distance(decompose(omega).eigenvalues, expect) < 1e-12);
}

TEST_CASE("omega conserves the uniform mode") {
  BiophysicalRing ring;
  ring.N = 7;
  ring.D = 0.8;
  ring.a = 0.35;
  const auto omega = build_omega(ring);
  const CVector ones = CVector::Ones(7);
  CHECK((omega.matrix() * ones - ring.a * ones).norm() < 1e-14);
}

TEST_CASE("ring spectra match the Fourier closed forms for N = 3..32") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (Index n = 3; n <= 32; ++n) {
    BiophysicalRing ring;
    ring.N = n;
    ring.D = u(rng);
    ring.a = u(rng) - 1.0;
    const auto omega = build_omega(ring);
    const double scale = std::max(1.0, omega.frobenius_norm());
    CHECK(oracle::multiset_distance(decompose(omega).eigenvalues,
                                    oracle::tilted_ring_spectrum(int(n), ring.D, ring.a, 0.0)) < 1e-10 * scale);
    ring.h = u(rng) - 1.0;
    const auto tilted = build_omega_le(ring);
    const auto d = decompose(tilted);
    CHECK(oracle::multiset_distance(d.eigenvalues, oracle::tilted_ring_spectrum(int(n), ring.D, ring.a, ring.h)) <
          1e-10 * std::max(1.0, tilted.frobenius_norm()));
    CHECK(oracle::multiset_distance(ring_spectrum(ring), oracle::tilted_ring_spectrum(int(n), ring.D, ring.a, ring.h)) <
          1e-12 * scale);
    // Real matrix: conjugate-closed spectrum.
    CHECK(oracle::multiset_distance(d.eigenvalues, d.eigenvalues.conjugate()) < 1e-9 * scale);
  }
}

TEST_CASE("omega_le reduces to omega and obeys the trace identity") {
  BiophysicalRing ring;
  ring.N = 6;
  ring.D = 1.3;
  ring.a = 0.2;
  CHECK(build_omega_le(ring) == build_omega(ring));
  ring.U = Eigen::VectorXd::Zero(6);
  ring.U(0) = 0.7;
  CHECK(std::abs(build_omega_le(ring).trace() - (6.0 * (ring.a - 2.0 * ring.D) + 0.7)) < 1e-14);
  CHECK((growth_operator(ring).matrix() - (build_omega_le(ring).matrix() - ring.a * CMatrix::Identity(6, 6)))
            .norm() < 1e-14);
}

TEST_CASE("ring validation") {
  BiophysicalRing ring;
  ring.N = 2;
  CHECK_THROWS_AS(build_omega(ring), Error);
  ring.N = 4;
  ring.D = 0.0;
  CHECK_THROWS_AS(build_omega(ring), Error);
  ring.D = 1.0;
  ring.U = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(build_omega_le(ring), Error);
}

TEST_CASE("ring trajectory derivatives match central differences") {
  std::mt19937_64 rng(52);
  BiophysicalRing ring;
  ring.N = 5;
  ring.D = 0.9;
  ring.a = 0.1;
  ring.h = 0.3;
  ring.U = random_vector(5, rng);
  const auto traj = ring_trajectory(ring, random_vector(5, rng), 0.4);
  const double t = 0.6, h = 1e-4;
  const CMatrix fd1 = (traj.value(t + h).matrix() - traj.value(t - h).matrix()) / (2 * h);
  const CMatrix fd2 = (traj.value(t + h).matrix() - 2.0 * traj.value(t).matrix() + traj.value(t - h).matrix()) / (h * h);
  CHECK((fd1 - traj.first_derivative(t).matrix()).norm() < 1e-7);
  CHECK((fd2 - traj.second_derivative(t).matrix()).norm() < 1e-4);
  ring.h += t * 0.4;
  ring.U = traj.value(t).matrix().diagonal().real().array() - (ring.a - 2 * ring.D);
  CHECK((traj.value(t).matrix() - build_omega_le(ring).matrix()).norm() < 1e-13);
}

TEST_CASE("localized vectors") {
  LocalizationAnsatz ansatz;
  ansatz.grid = Eigen::VectorXd::LinSpaced(64, -3.0, 3.0);
  ansatz.centers = Eigen::VectorXd::Constant(1, ansatz.grid(23));
  ansatz.lengths = Eigen::VectorXd::Constant(1, 0.4);
  const Eigen::VectorXd v = localized_vector(ansatz, 0);
  CHECK(v(23) == 1.0);
  for (Index i = 24; i < 64; ++i) CHECK(v(i) < v(i - 1));
  for (Index i = 0; i < 23; ++i) CHECK(v(i) < v(i + 1));

  ansatz.grid = Eigen::VectorXd::LinSpaced(3, 0.0, 2.0);
  ansatz.centers(0) = 1.0;
  ansatz.lengths(0) = 1.0;
  CHECK(localized_vector(ansatz, 0)(0) == doctest::Approx(std::exp(-1.0)));

  ansatz.lengths(0) = 0.0;
  try {
    localized_vector(ansatz, 0);
    FAIL("zero length accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonpositiveLength);
  }
}

TEST_CASE("fit_localization recovers an exact exponential profile") {
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(21, 0.0, 20.0);
  const CVector v = (-(grid.array() - 8.0).abs() / 2.5).exp().matrix().cast<Complex>() * Complex(0.0, 3.0);
  const LocalizationFit fit = fit_localization(v, grid);
  CHECK(fit.center == 8.0);
  CHECK(fit.length == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("effective Hamiltonian assembly") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> normal;
  auto random_c = [&](int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n * n; ++i) m.data()[i] = {normal(rng), normal(rng)};
    return m;
  };
  CMatrix H = random_c(4);
  H = (H + H.adjoint()).eval();

  EffectiveHamiltonianSpec spec{H, {random_c(4), random_c(4)}, {Complex{}, Complex{}}};
  CHECK(effective_hamiltonian(spec).matrix() == H);

  CMatrix herm = random_c(3);
  herm = (herm + herm.adjoint()).eval();
  EffectiveHamiltonianSpec cancel{CMatrix::Zero(3, 3), {herm}, {Complex(0.7, 0.0)}};
  CHECK(effective_hamiltonian(cancel).matrix().norm() < 1e-14);

  spec.l = {Complex(0.3, -0.2), Complex(-1.1, 0.5)};
  CMatrix direct = H;
  for (std::size_t k = 0; k < 2; ++k) {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        direct(r, c) += Complex(0, 0.5) * (std::conj(spec.l[k]) * spec.L[k](r, c) - spec.l[k] * std::conj(spec.L[k](c, r)));
  }
  const auto Ht = effective_hamiltonian(spec);
  CHECK((Ht.matrix() - direct).norm() < 1e-13);
  // The displacement term is i/2 (X - X^dagger) with X = conj(l) L, so it is Hermitian.
  CHECK(Ht.is_hermitian(1e-12));
  CHECK((Ht.matrix() - H).norm() > 1e-3);

  std::vector<std::string> warnings;
  EffectiveHamiltonianSpec bad{random_c(4), {}, {}};
  effective_hamiltonian(bad, 1e-10, &warnings);
  CHECK(warnings.size() == 1);
  EffectiveHamiltonianSpec mismatch{H, {random_c(3)}, {Complex{}}};
  CHECK_THROWS_AS(effective_hamiltonian(mismatch), Error);
}

TEST_CASE("effective Hamiltonian trajectory is linear in t") {
  std::mt19937_64 rng(54);
  const CMatrix H = oracle::random_real(3, rng).cast<Complex>();
  const CMatrix L = oracle::random_real(3, rng).cast<Complex>();
  const CMatrix Hr = oracle::random_real(3, rng).cast<Complex>();
  const CMatrix Lr = oracle::random_real(3, rng).cast<Complex>();
  EffectiveHamiltonianSpec spec{H + H.transpose(), {L}, {Complex(0.4, 0.9)}};
  const auto traj = effective_hamiltonian_trajectory(spec, Hr, {Lr});
  const double h = 1e-4;
  const CMatrix fd = (traj.value(0.5 + h).matrix() - traj.value(0.5 - h).matrix()) / (2 * h);
  CHECK((fd - traj.first_derivative(0.5).matrix()).norm() < 1e-9);
  CHECK(traj.second_derivative(0.1).matrix().norm() == 0.0);
}

TEST_CASE("scattering data worked cases") {
  const auto free = scattering_data(Eigen::Matrix2cd::Identity());
  CHECK(free.T_l == Complex(1, 0));
  CHECK(free.R_r == Complex{});
  CHECK(free.R_l == Complex{});
  CHECK(free.s_plus == Complex(1, 0));
  CHECK(free.s_minus == Complex(1, 0));

  Eigen::Matrix2cd m;
  m << 2, 1, 1, 1;
  const auto s = scattering_data(m);
  Eigen::Matrix2cd expect;
  expect << 1, 1, -1, 1;
  CHECK((s.s_matrix() - expect).norm() < 1e-15);
  CHECK(std::abs(s.s_plus - Complex(1, 1)) < 1e-15);
  CHECK(std::abs(s.s_minus - Complex(1, -1)) < 1e-15);

  // M11 M22 real and > 1: a conjugate pair.
  m << 3, 1, 2, 1;  // det 1, M11 M22 = 3
  const auto broken = scattering_data(m);
  CHECK(std::abs(broken.s_plus - std::conj(broken.s_minus)) < 1e-14);
  CHECK(std::abs(broken.s_plus.imag()) > 0.1);

  m << 2, 1, 1, 2;
  try {
    scattering_data(m);
    FAIL("det 3 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotUnimodular);
  }
  m << 0, 1, -1, 0;
  try {
    scattering_data(m);
    FAIL("M22 = 0 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpectralSingularity);
  }
}

TEST_CASE("closed-form s+- equal the eigenvalues of S for random unimodular M") {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Matrix2cd m = random_unimodular(rng);
    if (std::abs(m(1, 1)) < 1e-8) continue;
    const auto s = scattering_data(m, 1e-8);
    const auto [e1, e2] = oracle::eig2(s.s_matrix());
    const double err = std::min(std::max(std::abs(s.s_plus - e1), std::abs(s.s_minus - e2)),
                                std::max(std::abs(s.s_plus - e2), std::abs(s.s_minus - e1)));
    CHECK(err <= 1e-12 * std::max(1.0, s.s_matrix().norm()));
  }
}

TEST_CASE("delta scatterers are unimodular and compose") {
  const Eigen::Matrix2cd one = delta_transfer(1.3, 0.2, Complex(0.5, -0.4));
  CHECK(std::abs(one.determinant() - 1.0) < 1e-14);
  const auto arr = TransferMatrixModel::delta_array({-0.5, 0.5}, {Complex(0, 1), Complex(0, -1)});
  const Eigen::Matrix2cd m = arr.at(2.0);
  CHECK(std::abs(m.determinant() - 1.0) < 1e-13);
  CHECK((m - delta_transfer(2.0, 0.5, Complex(0, -1)) * delta_transfer(2.0, -0.5, Complex(0, 1))).norm() < 1e-15);
  // A single real barrier reflects; with no scatterer strength, the medium is transparent.
  const auto clear = TransferMatrixModel::delta_array({0.0}, {Complex{}});
  CHECK((clear.at(1.0) - Eigen::Matrix2cd::Identity()).norm() == 0.0);
}

TEST_CASE("tabulated transfer matrices interpolate smoothly and stay unimodular") {
  const auto exact = TransferMatrixModel::delta_array({-0.5, 0.5}, {Complex(0.3, 0.8), Complex(0.3, -0.8)});
  std::vector<double> ks;
  std::vector<Eigen::Matrix2cd> values;
  for (int i = 0; i <= 40; ++i) {
    ks.push_back(1.0 + 0.05 * i);
    values.push_back(exact.at(ks.back()));
  }
  const auto table = TransferMatrixModel::table(ks, values);
  CHECK((table.at(1.5) - exact.at(1.5)).norm() < 1e-12);
  CHECK((table.at(1.525) - exact.at(1.525)).norm() < 1e-4);
  CHECK(std::abs(table.at(2.33).determinant() - 1.0) < 1e-12);
  CHECK_THROWS_AS(table.at(0.5), Error);
  CHECK_THROWS_AS(TransferMatrixModel::table({1, 2, 3}, {values[0], values[1], values[2]}), Error);
}

TEST_CASE("scattering states follow the asymptotic forms") {
  const auto clear = TransferMatrixModel::delta_array({0.0}, {Complex{}});
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(9, -4.0, 4.0);
  const auto plane = scattering_state(clear, 1.7, ScatteringSide::Left, x);
  for (Index i = 0; i < x.size(); ++i) CHECK(std::abs(plane.psi(i) - std::polar(1.0, 1.7 * x(i))) < 1e-15);

  const auto model = TransferMatrixModel::delta_array({-0.4, 0.4}, {Complex(1.0, 0.5), Complex(1.0, -0.5)});
  const double k = 2.1;
  const Complex amp(0.8, 0.3);
  const auto left = scattering_state(model, k, ScatteringSide::Left, x, amp, -0.5, 0.5);
  const auto s = scattering_data(model, k);
  const double lo = x(0), hi = x(8);
  CHECK(std::norm(left.psi(0)) ==
        doctest::Approx(std::norm(amp) * std::norm(1.0 + s.R_l * std::polar(1.0, -2 * k * lo))).epsilon(1e-12));
  CHECK(std::norm(left.psi(8)) == doctest::Approx(std::norm(amp * s.T_l)).epsilon(1e-12));
  CHECK(std::isnan(left.psi(4).real()));
  const auto right = scattering_state(model, k, ScatteringSide::Right, x, 1.0, -0.5, 0.5);
  CHECK(std::abs(right.psi(8) - (std::polar(1.0, -k * hi) + s.R_r * std::polar(1.0, k * hi))) < 1e-14);
  CHECK(std::abs(right.psi(0) - s.T_r * std::polar(1.0, -k * lo)) < 1e-14);
}

TEST_CASE("main result presets: static models have zero breakdown") {
  BiophysicalRing ring;
  ring.N = 5;
  ring.h = 0.2;
  const auto traj = ring_trajectory(ring, Eigen::VectorXd(), 0.0);
  for (Index j = 0; j < 5; ++j) {
    const auto r = main_result_acceleration(MainResultCase::Biophysical, traj, 0.0, j);
    CHECK(r.exact.total == Complex{});
    CHECK_FALSE(r.ansatz.has_value());
  }
}

TEST_CASE("main result, biophysical case: disorder ramp matches finite differences") {
  std::mt19937_64 rng(56);
  BiophysicalRing ring;
  ring.N = 6;
  ring.D = 1.0;
  ring.a = 0.3;
  const Eigen::VectorXd u = random_vector(6, rng);
  const auto traj = ring_trajectory(ring, u, 0.0);
  const double t = 0.8;
  const auto d = decompose(traj.value(t));
  REQUIRE(d.min_gap > 1e-2);
  const auto fd = oracle::central_differences([&](double s) { return traj.value(s).matrix(); }, t, 1e-4, 1e-3);
  const auto order = oracle::brute_force_match(d.eigenvalues, fd.lambda);
  MainResultOptions opts;
  opts.diagnostic = true;
  for (Index j = 0; j < 6; ++j) {
    const auto r = main_result_acceleration(MainResultCase::Biophysical, traj, t, j, opts);
    CHECK(oracle::relative_error(r.exact.total, fd.second(order[j])) < 1e-4);
    REQUIRE(r.ansatz.has_value());
    CHECK(std::isfinite(r.discrepancy));
  }
}

TEST_CASE("main result, open quantum case: Hermitian states make the ansatz exact") {
  std::mt19937_64 rng(57);
  CMatrix H = oracle::random_real(4, rng).cast<Complex>();
  H = (H + H.adjoint()).eval();
  CMatrix Hr = oracle::random_real(4, rng).cast<Complex>();
  Hr = (Hr + Hr.adjoint()).eval();
  const auto traj = effective_hamiltonian_trajectory({H, {}, {}}, Hr, {});
  MainResultOptions opts;
  opts.diagnostic = true;
  for (Index j = 0; j < 4; ++j) {
    const auto r = main_result_acceleration(MainResultCase::OpenQuantum, traj, 0.3, j, opts);
    CHECK(r.discrepancy < 1e-9 * (1 + std::abs(r.exact.total)));
  }
}

TEST_CASE("main result, scattering case: closed-form s+- follow the S eigenvalue paths") {
  const auto model = TransferMatrixModel::delta_array({-0.5, 0.5}, {Complex(0.5, 1.5), Complex(0.5, -1.5)});
  const auto traj = s_matrix_trajectory(model);
  MainResultOptions opts;
  opts.diagnostic = true;
  opts.transfer = model;
  SpectralDecomposition prev;
  for (int i = 0; i <= 40; ++i) {
    const double k = 0.8 + 0.05 * i;
    auto d = decompose(traj.value(k));
    if (i > 0) d = permuted(d, match_paths(prev, d).permutation);
    const auto s = scattering_data(model, k);
    oracle::CVector closed(2);
    closed << s.s_plus, s.s_minus;
    CHECK(oracle::multiset_distance(d.eigenvalues, closed) < 1e-10);
    prev = d;
    if (d.min_gap < 1e-3) continue;
    const auto r = main_result_acceleration(MainResultCase::ParityTime, traj, k, 0, opts);
    REQUIRE(r.ansatz.has_value());
    CHECK(r.discrepancy < 1e-6 * (1 + std::abs(r.exact.total)));
  }
}
