#ifndef QDILATE_TYPES_HPP
#define QDILATE_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qdilate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {

// Scalar comparisons.
inline constexpr double scalar = 1e-10;

// Frobenius-norm matrix comparisons on a space of dimension d.
inline double matrix(Index d) { return 1e-9 * std::sqrt(static_cast<double>(d)); }

// Relative eigenvalue threshold for rank decisions (Choi rank, correlation rank).
inline constexpr double rank_relative = 1e-8;

// Singular values within this of 1 belong to the partial-isometry part.
inline constexpr double singular_one = 1e-8;

// Outer edge of the ambiguous band for the isometric-contractive split.
inline constexpr double singular_warn = 1e-6;

// Slack allowed above 1 for contraction norms.
inline constexpr double contraction_slack = 1e-12;

}  // namespace tol

inline constexpr int default_dimension_cap = 4096;

// Validation failure with a machine-readable code, e.g. "UNITAL_VIOLATION".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Row-major vectorization; the canonical GNS coordinate convention throughout.
inline Vector vec_row_major(const Matrix& a) {
  Vector v(a.size());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  return v;
}

inline Matrix unvec_row_major(const Vector& v, Index rows, Index cols) {
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = v(i * cols + j);
  return a;
}

inline Vector vec_col_major(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

inline Matrix unvec_col_major(const Vector& v, Index rows, Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

inline double unitarity_residual(const Matrix& u) {
  const Index n = u.rows();
  return std::max((u.adjoint() * u - Matrix::Identity(n, n)).norm(),
                  (u * u.adjoint() - Matrix::Identity(n, n)).norm());
}

}  // namespace qdilate

#endif  // QDILATE_TYPES_HPP
