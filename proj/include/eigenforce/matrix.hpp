#pragma once

#include <Eigen/Dense>

#include <complex>
#include <filesystem>
#include <string>
#include <string_view>

namespace eigenforce {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Dense n x n complex matrix with finite entries and n >= 1. Real matrices
// are stored with zero imaginary parts; is_real() recognises them.
class ComplexSquareMatrix {
 public:
  explicit ComplexSquareMatrix(CMatrix m);

  static ComplexSquareMatrix from_real(const Eigen::MatrixXd& m);
  static ComplexSquareMatrix zero(Index n);
  static ComplexSquareMatrix identity(Index n);

  Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Index r, Index c) const { return m_(r, c); }

  bool is_real(double tol) const;
  bool is_hermitian(double tol) const;
  double frobenius_norm() const { return m_.norm(); }
  Complex trace() const { return m_.trace(); }

  friend bool operator==(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  CMatrix m_;
};

// Parses "a", "bi", "a+bi", "a-bi", "i", "-i", with optional exponents
// ("1e-3+2.5E2i"). Throws Error{ParseError}.
Complex parse_complex(std::string_view token);

// Full round-trip representation (17 significant digits), "a+bi" form.
std::string format_complex(Complex z);

// Whitespace-separated rows, one matrix row per non-empty line. Lines
// starting with '#' are comments. Error messages carry "line N".
ComplexSquareMatrix parse_matrix(std::string_view text);
ComplexSquareMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const ComplexSquareMatrix& m);

}  // namespace eigenforce
