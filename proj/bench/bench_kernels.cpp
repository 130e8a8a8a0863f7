// Times the serial and OpenMP kernels on the same inputs and checks that
// they agree bit for bit.
//
//   eigenforce_bench [n] [samples] [repeats]

#include "eigenforce/kernels.hpp"
#include "eigenforce/spectral.hpp"
#include "eigenforce/stochastic.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>

using namespace eigenforce;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const Index n = argc > 1 ? std::atol(argv[1]) : 64;
  const std::size_t samples = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 200000;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n), b(n, n), c(n, n);
  for (Index i = 0; i < n * n; ++i) {
    a.data()[i] = normal(rng);
    b.data()[i] = normal(rng);
    c.data()[i] = normal(rng);
  }
  const auto m = ComplexSquareMatrix::from_real(a);
  const auto mdot = ComplexSquareMatrix::from_real(b);
  const auto mddot = ComplexSquareMatrix::from_real(c);
  const SpectralDecomposition d = decompose(m);
  const ConjugatePairing pairing = pair_conjugates(d, 1e-9);
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});

  std::printf("threads: %d, n = %ld, samples = %zu\n", omp_get_max_threads(), static_cast<long>(n), samples);

  std::vector<kernels::ForceEvaluation> fs, fp;
  const double ts = best_of(repeats, [&] { fs = kernels::evaluate_forces_serial(d, mdot, mddot, &pairing, all); });
  const double tp = best_of(repeats, [&] { fp = kernels::evaluate_forces_parallel(d, mdot, mddot, &pairing, all); });
  bool same = fs.size() == fp.size();
  for (std::size_t q = 0; same && q < fs.size(); ++q) same = fs[q].force.total == fp[q].force.total;
  std::printf("forces   serial %9.4f s  parallel %9.4f s  speedup %5.2fx  identical %s\n", ts, tp, ts / tp,
              same ? "yes" : "NO");

  Index j = 0;
  while (j < n && pairing.partner[static_cast<std::size_t>(j)] == j) ++j;
  if (j == n) {
    std::printf("samples  skipped: spectrum is real\n");
    return 0;
  }
  const auto ctx = kernels::ConjugateSummandContext::from(d, pairing, j);
  PerturbationProcess proc;
  proc.seed = 7;
  std::vector<Complex> ss, sp;
  const double us = best_of(repeats, [&] { ss = kernels::conjugate_samples_serial(ctx, proc, samples); });
  const double up = best_of(repeats, [&] { sp = kernels::conjugate_samples_parallel(ctx, proc, samples); });
  std::printf("samples  serial %9.4f s  parallel %9.4f s  speedup %5.2fx  identical %s\n", us, up, us / up,
              ss == sp ? "yes" : "NO");
  return 0;
}
