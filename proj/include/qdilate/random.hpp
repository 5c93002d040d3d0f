#ifndef QDILATE_RANDOM_HPP
#define QDILATE_RANDOM_HPP

#include <cstdint>
#include <random>

#include "qdilate/types.hpp"

namespace qdilate {

// Seeded generator for all randomized checks. Normals are produced by
// Box-Muller on raw uniforms so that streams are reproducible across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return std::generate_canonical<double, 53>(engine_);
  }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Complex complex_normal() { return {normal(), normal()}; }

  // i.i.d. standard complex Gaussian entries.
  Matrix ginibre(Index rows, Index cols) {
    Matrix g(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) g(i, j) = complex_normal();
    return g;
  }

  // QR of a Ginibre matrix with the R-diagonal phase fix.
  Matrix haar_unitary(Index n) {
    const Matrix g = ginibre(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
      const Complex d = r(j, j);
      q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    }
    return q;
  }

  // Ginibre rescaled to have largest singular value max_sv.
  Matrix contraction(Index n, double max_sv) {
    Matrix g = ginibre(n, n);
    Eigen::JacobiSVD<Matrix> svd(g);
    return g * (max_sv / svd.singularValues()(0));
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qdilate

#endif  // QDILATE_RANDOM_HPP
