#pragma once

#include "eigenforce/matrix.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace eigenforce {

// A one-parameter matrix family M(t) with first and second derivatives,
// either supplied analytically or formed by central differences of value().
class MatrixTrajectory {
 public:
  using Fn = std::function<CMatrix(double)>;
  enum class DerivativeMode { Analytic, FiniteDifference };

  static MatrixTrajectory analytic(Index n, Fn value, Fn first, Fn second);

  // Without an explicit step, the first derivative uses 1e-4 * max(1, |M(t)|_F)
  // and the second derivative 1e-3 * max(1, |M(t)|_F).
  static MatrixTrajectory finite_difference(Index n, Fn value, std::optional<double> step = {});

  // M(t) = sum_k t^k coeffs[k], with exact derivatives.
  static MatrixTrajectory polynomial(std::vector<CMatrix> coeffs);

  Index dim() const noexcept { return n_; }
  DerivativeMode mode() const noexcept { return mode_; }
  std::optional<double> step() const noexcept { return step_; }

  ComplexSquareMatrix value(double t) const;
  ComplexSquareMatrix first_derivative(double t) const;
  ComplexSquareMatrix second_derivative(double t) const;

  double first_difference_step(double t) const;
  double second_difference_step(double t) const;

 private:
  MatrixTrajectory() = default;
  CMatrix checked(const CMatrix& m, const char* what) const;

  Index n_ = 0;
  DerivativeMode mode_ = DerivativeMode::Analytic;
  Fn value_, first_, second_;
  std::optional<double> step_;
};

}  // namespace eigenforce
