#include "eigenforce/trajectory.hpp"

#include "eigenforce/error.hpp"

#include <memory>
#include <algorithm>

namespace eigenforce {

MatrixTrajectory MatrixTrajectory::analytic(Index n, Fn value, Fn first, Fn second) {
  if (n <= 0) throw Error(ErrorCode::DimensionMismatch, "trajectory dimension must be positive");
  if (!value || !first || !second) {
    throw Error(ErrorCode::InvalidArgument, "analytic trajectory needs value and both derivatives");
  }
  MatrixTrajectory tr;
  tr.n_ = n;
  tr.mode_ = DerivativeMode::Analytic;
  tr.value_ = std::move(value);
  tr.first_ = std::move(first);
  tr.second_ = std::move(second);
  return tr;
}

MatrixTrajectory MatrixTrajectory::finite_difference(Index n, Fn value, std::optional<double> step) {
  if (n <= 0) throw Error(ErrorCode::DimensionMismatch, "trajectory dimension must be positive");
  if (!value) throw Error(ErrorCode::InvalidArgument, "trajectory needs a value function");
  if (step && !(*step > 0.0)) throw Error(ErrorCode::InvalidArgument, "difference step must be positive");
  MatrixTrajectory tr;
  tr.n_ = n;
  tr.mode_ = DerivativeMode::FiniteDifference;
  tr.value_ = std::move(value);
  tr.step_ = step;
  return tr;
}

MatrixTrajectory MatrixTrajectory::polynomial(std::vector<CMatrix> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "polynomial trajectory needs coefficients");
  const Index n = coeffs.front().rows();
  for (const auto& c : coeffs) {
    if (c.rows() != n || c.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "polynomial coefficients must share one square shape");
    }
  }
  auto shared = std::make_shared<const std::vector<CMatrix>>(std::move(coeffs));
  // Horner evaluation of the order-th derivative.
  auto eval = [shared, n](double t, int order) {
    const auto& c = *shared;
    CMatrix acc = CMatrix::Zero(n, n);
    for (int k = static_cast<int>(c.size()) - 1; k >= order; --k) {
      double factor = 1.0;
      for (int q = 0; q < order; ++q) factor *= k - q;
      acc = acc * t + factor * c[static_cast<std::size_t>(k)];
    }
    return acc;
  };
  return analytic(
      n, [eval](double t) { return eval(t, 0); }, [eval](double t) { return eval(t, 1); },
      [eval](double t) { return eval(t, 2); });
}

CMatrix MatrixTrajectory::checked(const CMatrix& m, const char* what) const {
  if (m.rows() != n_ || m.cols() != n_) {
    throw Error(ErrorCode::DimensionMismatch, std::string("trajectory ") + what +
                                                  " returned a matrix of the wrong shape");
  }
  return m;
}

ComplexSquareMatrix MatrixTrajectory::value(double t) const {
  return ComplexSquareMatrix(checked(value_(t), "value"));
}

double MatrixTrajectory::first_difference_step(double t) const {
  if (step_) return *step_;
  return 1e-4 * std::max(1.0, value_(t).norm());
}

double MatrixTrajectory::second_difference_step(double t) const {
  if (step_) return *step_;
  return 1e-3 * std::max(1.0, value_(t).norm());
}

ComplexSquareMatrix MatrixTrajectory::first_derivative(double t) const {
  if (mode_ == DerivativeMode::Analytic) return ComplexSquareMatrix(checked(first_(t), "first derivative"));
  const double h = first_difference_step(t);
  return ComplexSquareMatrix(checked((value_(t + h) - value_(t - h)) / (2.0 * h), "value"));
}

ComplexSquareMatrix MatrixTrajectory::second_derivative(double t) const {
  if (mode_ == DerivativeMode::Analytic) return ComplexSquareMatrix(checked(second_(t), "second derivative"));
  const double h = second_difference_step(t);
  return ComplexSquareMatrix(
      checked((value_(t + h) - 2.0 * value_(t) + value_(t - h)) / (h * h), "value"));
}

}  // namespace eigenforce
