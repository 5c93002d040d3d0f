#ifndef QDILATE_ALGEBRA_HPP
#define QDILATE_ALGEBRA_HPP

#include <utility>
#include <vector>

#include "qdilate/random.hpp"
#include "qdilate/types.hpp"

namespace qdilate {

struct AlgebraBlock {
  Index dim = 0;
  double weight = 0.0;
};

// A finite unital matrix *-algebra: a direct sum of full complex matrix
// blocks, each carrying a positive trace weight. The weights sum to one,
// so the induced trace is a faithful normalized trace.
class MatrixAlgebra {
 public:
  explicit MatrixAlgebra(std::vector<AlgebraBlock> blocks);

  // Single full block C^{n x n} with the normalized trace.
  static MatrixAlgebra full(Index n);

  // Diagonal algebra C^N with trace weights probs (must sum to 1).
  static MatrixAlgebra diagonal(const std::vector<double>& probs);

  Index num_blocks() const { return static_cast<Index>(blocks_.size()); }
  const AlgebraBlock& block(Index i) const { return blocks_[static_cast<size_t>(i)]; }
  const std::vector<AlgebraBlock>& blocks() const { return blocks_; }

  // Dimension of the enveloping block-diagonal embedding, sum of block dims.
  Index concrete_dim() const { return concrete_dim_; }
  // Dimension of L^2(A): sum of squared block dims.
  Index gns_dim() const { return gns_dim_; }
  // Start of block i in concrete coordinates.
  Index block_offset(Index i) const { return offsets_[static_cast<size_t>(i)]; }

  bool same_structure(const MatrixAlgebra& other) const;

 private:
  std::vector<AlgebraBlock> blocks_;
  std::vector<Index> offsets_;
  Index concrete_dim_ = 0;
  Index gns_dim_ = 0;
};

// blocks given as (dim, weight) pairs; weights must sum to 1.
MatrixAlgebra make_algebra(const std::vector<std::pair<Index, double>>& blocks);

// Default trace weights w_i = n_i / sum(n_j), the restriction of the
// normalized trace on the enveloping full matrix algebra.
MatrixAlgebra make_algebra(const std::vector<Index>& dims);

// An element of a MatrixAlgebra, stored per block as a dense complex matrix.
class AlgebraElement {
 public:
  AlgebraElement(MatrixAlgebra algebra, std::vector<Matrix> blocks);

  static AlgebraElement zero(const MatrixAlgebra& a);
  static AlgebraElement identity(const MatrixAlgebra& a);

  const MatrixAlgebra& algebra() const { return algebra_; }
  const Matrix& block(Index i) const { return blocks_[static_cast<size_t>(i)]; }
  Matrix& block(Index i) { return blocks_[static_cast<size_t>(i)]; }

  AlgebraElement adjoint() const;

  // Block-diagonal embedding into C^{d x d}, blocks in order.
  Matrix concrete() const;
  static AlgebraElement from_concrete(const MatrixAlgebra& a, const Matrix& m,
                                      double* off_block_residual = nullptr);

  // Frobenius norm of the concrete embedding.
  double frobenius_norm() const;

  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(Complex s);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(AlgebraElement a, Complex s) { return a *= s; }
  AlgebraElement operator*(const AlgebraElement& rhs) const;  // blockwise product

 private:
  MatrixAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

// The weighted trace as a density element: block i is (w_i/n_i) I, so that
// trace(X) = Tr(rho * X) on concrete embeddings.
struct TraceDensity {
  MatrixAlgebra algebra;
  AlgebraElement rho;

  static TraceDensity of(const MatrixAlgebra& a);

  // Diagonal of the concrete embedding of rho (rho is a positive multiple of
  // the identity on each block).
  RealVector diagonal() const;
};

Complex trace(const AlgebraElement& x);

// <X, Y> = trace(X* Y), conjugate-linear in the first argument.
Complex inner_product(const AlgebraElement& x, const AlgebraElement& y);

inline double gns_norm(const AlgebraElement& x) {
  return std::sqrt(std::max(0.0, inner_product(x, x).real()));
}

// Blocks are all pairs (n_i * m_j, w_i * v_j) in lexicographic (i, j) order.
MatrixAlgebra tensor_algebra(const MatrixAlgebra& a, const MatrixAlgebra& b);
AlgebraElement tensor_element(const AlgebraElement& x, const AlgebraElement& y);

// id_A (x) tr_B : A (x) B -> A.
AlgebraElement partial_trace(const MatrixAlgebra& a, const MatrixAlgebra& b,
                             const AlgebraElement& x);

// Trace-preserving conditional expectation onto A (x) I_B.
AlgebraElement conditional_expectation(const MatrixAlgebra& a, const MatrixAlgebra& b,
                                       const AlgebraElement& x);

// Matrix units of every block, row-major within each block, blocks in order.
// Pairwise trace-orthogonal; the Gram matrix is diagonal with entries w_i/n_i.
std::vector<AlgebraElement> matrix_units(const MatrixAlgebra& a);

// Matrix units scaled to unit GNS norm, same ordering.
std::vector<AlgebraElement> orthonormal_units(const MatrixAlgebra& a);

// Embedding of an element of factors[0] (x) ... (x) factors[k-1] into the
// tensor coordinates C^{d_0} (x) ... (x) C^{d_k-1}. This differs from
// concrete() (the block-diagonal layout) by a fixed index interleaving.
Matrix tensor_concrete(const std::vector<MatrixAlgebra>& factors, const AlgebraElement& x);
AlgebraElement from_tensor_concrete(const std::vector<MatrixAlgebra>& factors,
                                    const Matrix& m, double* off_block_residual = nullptr);

// Element with Ginibre blocks.
AlgebraElement random_element(const MatrixAlgebra& a, Rng& rng);

}  // namespace qdilate

#endif  // QDILATE_ALGEBRA_HPP
