#include "qdilate/algebra.hpp"

#include <numeric>

namespace qdilate {

namespace {

void check_same_algebra(const AlgebraElement& x, const AlgebraElement& y) {
  if (!x.algebra().same_structure(y.algebra()))
    throw ValidationError("SHAPE_MISMATCH", "elements belong to different algebras");
}

}  // namespace

MatrixAlgebra::MatrixAlgebra(std::vector<AlgebraBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty())
    throw ValidationError("INVALID_ALGEBRA", "algebra needs at least one block");
  double total = 0.0;
  for (const auto& b : blocks_) {
    if (b.dim < 1) throw ValidationError("INVALID_ALGEBRA", "block dimension must be >= 1");
    if (b.weight <= 0.0) throw ValidationError("INVALID_ALGEBRA", "block weight must be > 0");
    offsets_.push_back(concrete_dim_);
    concrete_dim_ += b.dim;
    gns_dim_ += b.dim * b.dim;
    total += b.weight;
  }
  if (std::abs(total - 1.0) > tol::scalar)
    throw ValidationError("INVALID_ALGEBRA", "trace weights must sum to 1, got " + std::to_string(total));
}

MatrixAlgebra MatrixAlgebra::full(Index n) { return MatrixAlgebra({{n, 1.0}}); }

MatrixAlgebra MatrixAlgebra::diagonal(const std::vector<double>& probs) {
  std::vector<AlgebraBlock> blocks;
  blocks.reserve(probs.size());
  for (double p : probs) blocks.push_back({1, p});
  return MatrixAlgebra(std::move(blocks));
}

bool MatrixAlgebra::same_structure(const MatrixAlgebra& other) const {
  if (num_blocks() != other.num_blocks()) return false;
  for (Index i = 0; i < num_blocks(); ++i) {
    if (block(i).dim != other.block(i).dim) return false;
    if (std::abs(block(i).weight - other.block(i).weight) > tol::scalar) return false;
  }
  return true;
}

MatrixAlgebra make_algebra(const std::vector<std::pair<Index, double>>& blocks) {
  std::vector<AlgebraBlock> bs;
  bs.reserve(blocks.size());
  for (const auto& [dim, weight] : blocks) bs.push_back({dim, weight});
  return MatrixAlgebra(std::move(bs));
}

MatrixAlgebra make_algebra(const std::vector<Index>& dims) {
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{0});
  std::vector<AlgebraBlock> bs;
  bs.reserve(dims.size());
  for (Index n : dims) bs.push_back({n, static_cast<double>(n) / static_cast<double>(total)});
  return MatrixAlgebra(std::move(bs));
}

AlgebraElement::AlgebraElement(MatrixAlgebra algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (static_cast<Index>(blocks_.size()) != algebra_.num_blocks())
    throw ValidationError("SHAPE_MISMATCH", "wrong number of blocks");
  for (Index i = 0; i < algebra_.num_blocks(); ++i) {
    const Index n = algebra_.block(i).dim;
    if (blocks_[static_cast<size_t>(i)].rows() != n || blocks_[static_cast<size_t>(i)].cols() != n)
      throw ValidationError("SHAPE_MISMATCH", "block " + std::to_string(i) + " has wrong shape");
  }
}

AlgebraElement AlgebraElement::zero(const MatrixAlgebra& a) {
  std::vector<Matrix> blocks;
  for (Index i = 0; i < a.num_blocks(); ++i)
    blocks.push_back(Matrix::Zero(a.block(i).dim, a.block(i).dim));
  return AlgebraElement(a, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const MatrixAlgebra& a) {
  std::vector<Matrix> blocks;
  for (Index i = 0; i < a.num_blocks(); ++i)
    blocks.push_back(Matrix::Identity(a.block(i).dim, a.block(i).dim));
  return AlgebraElement(a, std::move(blocks));
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(algebra_, std::move(blocks));
}

Matrix AlgebraElement::concrete() const {
  Matrix out = Matrix::Zero(algebra_.concrete_dim(), algebra_.concrete_dim());
  for (Index i = 0; i < algebra_.num_blocks(); ++i) {
    const Index off = algebra_.block_offset(i);
    const Index n = algebra_.block(i).dim;
    out.block(off, off, n, n) = block(i);
  }
  return out;
}

AlgebraElement AlgebraElement::from_concrete(const MatrixAlgebra& a, const Matrix& m,
                                             double* off_block_residual) {
  if (m.rows() != a.concrete_dim() || m.cols() != a.concrete_dim())
    throw ValidationError("SHAPE_MISMATCH", "concrete matrix has wrong dimension");
  std::vector<Matrix> blocks;
  double on_block_sq = 0.0;
  for (Index i = 0; i < a.num_blocks(); ++i) {
    const Index off = a.block_offset(i);
    const Index n = a.block(i).dim;
    blocks.push_back(m.block(off, off, n, n));
    on_block_sq += blocks.back().squaredNorm();
  }
  if (off_block_residual != nullptr)
    *off_block_residual = std::sqrt(std::max(0.0, m.squaredNorm() - on_block_sq));
  return AlgebraElement(a, std::move(blocks));
}

double AlgebraElement::frobenius_norm() const {
  double sq = 0.0;
  for (const auto& b : blocks_) sq += b.squaredNorm();
  return std::sqrt(sq);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  check_same_algebra(*this, rhs);
  for (size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += rhs.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  check_same_algebra(*this, rhs);
  for (size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= rhs.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& rhs) const {
  check_same_algebra(*this, rhs);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (size_t i = 0; i < blocks_.size(); ++i) blocks.push_back(blocks_[i] * rhs.blocks_[i]);
  return AlgebraElement(algebra_, std::move(blocks));
}

TraceDensity TraceDensity::of(const MatrixAlgebra& a) {
  AlgebraElement rho = AlgebraElement::identity(a);
  for (Index i = 0; i < a.num_blocks(); ++i)
    rho.block(i) *= a.block(i).weight / static_cast<double>(a.block(i).dim);
  return TraceDensity{a, std::move(rho)};
}

RealVector TraceDensity::diagonal() const {
  RealVector d(algebra.concrete_dim());
  for (Index i = 0; i < algebra.num_blocks(); ++i) {
    const Index off = algebra.block_offset(i);
    const Index n = algebra.block(i).dim;
    d.segment(off, n).setConstant(algebra.block(i).weight / static_cast<double>(n));
  }
  return d;
}

Complex trace(const AlgebraElement& x) {
  Complex t = 0.0;
  const MatrixAlgebra& a = x.algebra();
  for (Index i = 0; i < a.num_blocks(); ++i)
    t += a.block(i).weight * x.block(i).trace() / static_cast<double>(a.block(i).dim);
  return t;
}

Complex inner_product(const AlgebraElement& x, const AlgebraElement& y) {
  check_same_algebra(x, y);
  Complex t = 0.0;
  const MatrixAlgebra& a = x.algebra();
  for (Index i = 0; i < a.num_blocks(); ++i) {
    const Complex block_trace = (x.block(i).adjoint() * y.block(i)).trace();
    t += a.block(i).weight * block_trace / static_cast<double>(a.block(i).dim);
  }
  return t;
}

MatrixAlgebra tensor_algebra(const MatrixAlgebra& a, const MatrixAlgebra& b) {
  std::vector<AlgebraBlock> blocks;
  blocks.reserve(static_cast<size_t>(a.num_blocks() * b.num_blocks()));
  for (Index i = 0; i < a.num_blocks(); ++i)
    for (Index j = 0; j < b.num_blocks(); ++j)
      blocks.push_back({a.block(i).dim * b.block(j).dim, a.block(i).weight * b.block(j).weight});
  return MatrixAlgebra(std::move(blocks));
}

AlgebraElement tensor_element(const AlgebraElement& x, const AlgebraElement& y) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(x.algebra().num_blocks() * y.algebra().num_blocks()));
  for (Index i = 0; i < x.algebra().num_blocks(); ++i)
    for (Index j = 0; j < y.algebra().num_blocks(); ++j)
      blocks.push_back(kron(x.block(i), y.block(j)));
  return AlgebraElement(tensor_algebra(x.algebra(), y.algebra()), std::move(blocks));
}

AlgebraElement partial_trace(const MatrixAlgebra& a, const MatrixAlgebra& b,
                             const AlgebraElement& x) {
  if (!x.algebra().same_structure(tensor_algebra(a, b)))
    throw ValidationError("SHAPE_MISMATCH", "element does not live in the tensor algebra");
  AlgebraElement out = AlgebraElement::zero(a);
  for (Index i = 0; i < a.num_blocks(); ++i) {
    const Index n = a.block(i).dim;
    for (Index j = 0; j < b.num_blocks(); ++j) {
      const Index m = b.block(j).dim;
      const double density = b.block(j).weight / static_cast<double>(m);
      const Matrix& z = x.block(i * b.num_blocks() + j);
      // Second-factor contraction of (I (x) rho_B) z.
      for (Index p = 0; p < n; ++p)
        for (Index q = 0; q < n; ++q) {
          Complex s = 0.0;
          for (Index t = 0; t < m; ++t) s += z(p * m + t, q * m + t);
          out.block(i)(p, q) += density * s;
        }
    }
  }
  return out;
}

AlgebraElement conditional_expectation(const MatrixAlgebra& a, const MatrixAlgebra& b,
                                       const AlgebraElement& x) {
  return tensor_element(partial_trace(a, b, x), AlgebraElement::identity(b));
}

std::vector<AlgebraElement> matrix_units(const MatrixAlgebra& a) {
  std::vector<AlgebraElement> units;
  units.reserve(static_cast<size_t>(a.gns_dim()));
  for (Index i = 0; i < a.num_blocks(); ++i) {
    const Index n = a.block(i).dim;
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) {
        AlgebraElement e = AlgebraElement::zero(a);
        e.block(i)(r, c) = 1.0;
        units.push_back(std::move(e));
      }
  }
  return units;
}

std::vector<AlgebraElement> orthonormal_units(const MatrixAlgebra& a) {
  std::vector<AlgebraElement> units = matrix_units(a);
  size_t k = 0;
  for (Index i = 0; i < a.num_blocks(); ++i) {
    const double scale =
        std::sqrt(static_cast<double>(a.block(i).dim) / a.block(i).weight);
    for (Index r = 0; r < a.block(i).dim * a.block(i).dim; ++r) units[k++] *= scale;
  }
  return units;
}

namespace {

// Row index maps between the block layout of an iterated tensor product and
// plain tensor coordinates. For block multi-index (i_1..i_K) and local
// mixed-radix digits (a_1..a_K), the tensor coordinate of a row is
// sum_k (offset_k(i_k) + a_k) * stride_k.
struct TensorLayout {
  std::vector<MatrixAlgebra> factors;
  Index total_dim = 1;

  explicit TensorLayout(std::vector<MatrixAlgebra> fs) : factors(std::move(fs)) {
    for (const auto& f : factors) total_dim *= f.concrete_dim();
  }

  // Iterate over blocks of the product algebra in lexicographic order,
  // calling fn(block_size, row_map) where row_map maps local row indices to
  // tensor coordinates.
  template <typename Fn>
  void for_each_block(Fn&& fn) const {
    const size_t k = factors.size();
    std::vector<Index> block_idx(k, 0);
    while (true) {
      Index block_size = 1;
      for (size_t f = 0; f < k; ++f) block_size *= factors[f].block(block_idx[f]).dim;

      std::vector<Index> row_map(static_cast<size_t>(block_size));
      for (Index local = 0; local < block_size; ++local) {
        Index rem = local, coord = 0;
        // Decode local digits, last factor fastest; accumulate strides.
        Index digit_radix_product = block_size;
        Index stride_product = total_dim;
        for (size_t f = 0; f < k; ++f) {
          const Index nf = factors[f].block(block_idx[f]).dim;
          digit_radix_product /= nf;
          const Index digit = rem / digit_radix_product;
          rem %= digit_radix_product;
          stride_product /= factors[f].concrete_dim();
          coord += (factors[f].block_offset(block_idx[f]) + digit) * stride_product;
        }
        row_map[static_cast<size_t>(local)] = coord;
      }
      fn(block_size, row_map);

      // Advance the block multi-index.
      size_t f = k;
      while (f > 0) {
        --f;
        if (++block_idx[f] < factors[f].num_blocks()) break;
        block_idx[f] = 0;
        if (f == 0) return;
      }
    }
  }
};

}  // namespace

Matrix tensor_concrete(const std::vector<MatrixAlgebra>& factors, const AlgebraElement& x) {
  TensorLayout layout(factors);
  Matrix out = Matrix::Zero(layout.total_dim, layout.total_dim);
  Index block = 0;
  layout.for_each_block([&](Index block_size, const std::vector<Index>& row_map) {
    const Matrix& z = x.block(block);
    for (Index p = 0; p < block_size; ++p)
      for (Index q = 0; q < block_size; ++q)
        out(row_map[static_cast<size_t>(p)], row_map[static_cast<size_t>(q)]) = z(p, q);
    ++block;
  });
  return out;
}

AlgebraElement from_tensor_concrete(const std::vector<MatrixAlgebra>& factors,
                                    const Matrix& m, double* off_block_residual) {
  TensorLayout layout(factors);
  if (m.rows() != layout.total_dim || m.cols() != layout.total_dim)
    throw ValidationError("SHAPE_MISMATCH", "tensor-concrete matrix has wrong dimension");
  MatrixAlgebra product = factors.front();
  for (size_t f = 1; f < factors.size(); ++f) product = tensor_algebra(product, factors[f]);

  std::vector<Matrix> blocks;
  double on_block_sq = 0.0;
  layout.for_each_block([&](Index block_size, const std::vector<Index>& row_map) {
    Matrix z(block_size, block_size);
    for (Index p = 0; p < block_size; ++p)
      for (Index q = 0; q < block_size; ++q)
        z(p, q) = m(row_map[static_cast<size_t>(p)], row_map[static_cast<size_t>(q)]);
    on_block_sq += z.squaredNorm();
    blocks.push_back(std::move(z));
  });
  if (off_block_residual != nullptr)
    *off_block_residual = std::sqrt(std::max(0.0, m.squaredNorm() - on_block_sq));
  return AlgebraElement(product, std::move(blocks));
}

AlgebraElement random_element(const MatrixAlgebra& a, Rng& rng) {
  std::vector<Matrix> blocks;
  for (Index i = 0; i < a.num_blocks(); ++i) blocks.push_back(rng.ginibre(a.block(i).dim, a.block(i).dim));
  return AlgebraElement(a, std::move(blocks));
}

}  // namespace qdilate
