#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's spectral code: eigenvalues come straight from Eigen's solver,
// matching is brute force or greedy, and closed forms are written out anew.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline CVector eigenvalues(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  return solver.eigenvalues();
}

// Permutation p minimising sum_i |a(i) - b(p[i])|, by enumeration (n <= 8).
inline std::vector<int> brute_force_match(const CVector& a, const CVector& b) {
  const int n = static_cast<int>(a.size());
  std::vector<int> p(n), best;
  std::iota(p.begin(), p.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += std::abs(a(i) - b(p[i]));
    if (c < best_cost) {
      best_cost = c;
      best = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

// Largest distance after greedily pairing each a(i) with its nearest unused b.
inline double multiset_distance(const CVector& a, const CVector& b) {
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index arg = -1;
    for (Eigen::Index k = 0; k < b.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(a(i) - b(k));
      if (d < best) {
        best = d;
        arg = k;
      }
    }
    if (arg < 0) return std::numeric_limits<double>::infinity();
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

// Eigenvalues of M(t +- h) reordered to follow `center` by brute force.
inline CVector follow(const CVector& center, const CMatrix& m) {
  const CVector ev = eigenvalues(m);
  const auto p = brute_force_match(center, ev);
  CVector out(center.size());
  for (Eigen::Index i = 0; i < center.size(); ++i) out(i) = ev(p[i]);
  return out;
}

struct Derivatives {
  CVector lambda, first, second;
};

// Central differences of the eigenvalue paths through t; `lambda` is the
// order of Eigen's solver at t.
inline Derivatives central_differences(const std::function<CMatrix(double)>& m, double t, double h1, double h2) {
  Derivatives d;
  d.lambda = eigenvalues(m(t));
  d.first = (follow(d.lambda, m(t + h1)) - follow(d.lambda, m(t - h1))) / (2.0 * h1);
  d.second = (follow(d.lambda, m(t + h2)) - 2.0 * d.lambda + follow(d.lambda, m(t - h2))) / (h2 * h2);
  return d;
}

// a - 2D + D e^h w^m + D e^-h w^-m
inline CVector tilted_ring_spectrum(int n, double D, double a, double h) {
  CVector out(n);
  for (int m = 0; m < n; ++m) {
    const double th = 2.0 * std::numbers::pi * m / n;
    out(m) = a - 2.0 * D + 2.0 * D * std::cos(Complex(th, -h));
  }
  return out;
}

// Eigenvalues of a 2x2 matrix from its characteristic polynomial.
inline std::pair<Complex, Complex> eig2(const Eigen::Matrix2cd& s) {
  const Complex tr = s.trace(), det = s.determinant();
  const Complex root = std::sqrt(tr * tr / 4.0 - det);
  return {tr / 2.0 + root, tr / 2.0 - root};
}

inline Eigen::MatrixXd random_real(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n * n; ++i) m.data()[i] = normal(rng);
  return m;
}

inline double relative_error(Complex a, Complex b) {
  const double s = std::max(std::abs(b), 1e-300);
  return std::abs(a - b) / s;
}

// Ordinary least squares slope of y on x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace oracle
