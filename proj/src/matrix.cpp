#include "eigenforce/matrix.hpp"

#include "eigenforce/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace eigenforce {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::PairingFailure: return "PairingFailure";
    case ErrorCode::SingularGap: return "SingularGap";
    case ErrorCode::RealEigenvalue: return "RealEigenvalue";
    case ErrorCode::ZeroSeparation: return "ZeroSeparation";
    case ErrorCode::EmptyEstimate: return "EmptyEstimate";
    case ErrorCode::NonpositiveLength: return "NonpositiveLength";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::SpectralSingularity: return "SpectralSingularity";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

SingularGapError::SingularGapError(std::size_t i, std::size_t j, double gap)
    : Error(ErrorCode::SingularGap,
            "eigenvalues " + std::to_string(i) + " and " + std::to_string(j) +
                " are closer than the gap tolerance (|gap| = " + std::to_string(gap) + ")"),
      i_(i), j_(j), gap_(gap) {}

ComplexSquareMatrix::ComplexSquareMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                    ", expected square");
  }
  if (m_.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "matrix dimension must be positive");
  if (!m_.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
}

ComplexSquareMatrix ComplexSquareMatrix::from_real(const Eigen::MatrixXd& m) {
  return ComplexSquareMatrix(m.cast<Complex>());
}

ComplexSquareMatrix ComplexSquareMatrix::zero(Index n) {
  return ComplexSquareMatrix(CMatrix::Zero(n, n));
}

ComplexSquareMatrix ComplexSquareMatrix::identity(Index n) {
  return ComplexSquareMatrix(CMatrix::Identity(n, n));
}

bool ComplexSquareMatrix::is_real(double tol) const {
  return m_.imag().cwiseAbs().maxCoeff() <= tol;
}

bool ComplexSquareMatrix::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

double parse_real(std::string_view s, std::string_view token) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::ParseError, "invalid complex number '" + std::string(token) + "'");
  }
  return value;
}

// Unit coefficient for bare "i", "+i", "-i".
double parse_coefficient(std::string_view s, std::string_view token) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  return parse_real(s, token);
}

}  // namespace

Complex parse_complex(std::string_view token) {
  if (token.empty()) throw Error(ErrorCode::ParseError, "empty complex number");
  const char last = token.back();
  if (last != 'i') return {parse_real(token, token), 0.0};

  std::string_view body = token.substr(0, token.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, parse_coefficient(body, token)};
  return {parse_real(body.substr(0, split), token), parse_coefficient(body.substr(split), token)};
}

std::string format_complex(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

ComplexSquareMatrix parse_matrix(std::string_view text) {
  std::vector<std::vector<Complex>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::vector<int> row_lines;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tok;
    std::vector<Complex> row;
    while (fields >> tok) {
      if (tok.front() == '#') break;
      try {
        row.push_back(parse_complex(tok));
      } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": row has " +
                                             std::to_string(row.size()) + " entries, expected " +
                                             std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
    row_lines.push_back(line_no);
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "matrix has no rows");
  const auto n = static_cast<Index>(rows.size());
  if (static_cast<Index>(rows.front().size()) != n) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(row_lines.back()) + ": matrix has " +
                                           std::to_string(n) + " rows of " +
                                           std::to_string(rows.front().size()) +
                                           " entries, expected square");
  }
  CMatrix m(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) m(r, c) = rows[r][c];
  return ComplexSquareMatrix(std::move(m));
}

ComplexSquareMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open matrix file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_matrix_file(const std::filesystem::path& path, const ComplexSquareMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write matrix file " + path.string());
  for (Index r = 0; r < m.dim(); ++r) {
    for (Index c = 0; c < m.dim(); ++c) {
      if (c) out << ' ';
      out << format_complex(m(r, c));
    }
    out << '\n';
  }
}

}  // namespace eigenforce
