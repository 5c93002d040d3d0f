#include "qdilate/channel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qdilate {

namespace {

AlgebraElement kraus_sum(const MatrixAlgebra& domain, const std::vector<AlgebraElement>& kraus,
                         bool adjoint_on_left) {
  AlgebraElement sum = AlgebraElement::zero(domain);
  for (const auto& q : kraus) {
    for (Index i = 0; i < domain.num_blocks(); ++i) {
      if (adjoint_on_left)
        sum.block(i) += q.block(i).adjoint() * q.block(i);
      else
        sum.block(i) += q.block(i) * q.block(i).adjoint();
    }
  }
  return sum;
}

Matrix enveloping_apply(const std::vector<Matrix>& kraus_concrete, const Matrix& x) {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& q : kraus_concrete) out += q * x * q.adjoint();
  return out;
}

std::vector<Matrix> concrete_kraus(const Channel& ch) {
  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(ch.kraus_count()));
  for (const auto& q : ch.kraus()) out.push_back(q.concrete());
  return out;
}

}  // namespace

ChannelValidation validate_kraus(const MatrixAlgebra& domain,
                                 const std::vector<AlgebraElement>& kraus) {
  ChannelValidation v;
  const Index d = domain.concrete_dim();
  const double threshold = tol::matrix(d);

  const AlgebraElement identity = AlgebraElement::identity(domain);
  v.unital_residual = (kraus_sum(domain, kraus, false) - identity).frobenius_norm();
  v.tp_residual = (kraus_sum(domain, kraus, true) - identity).frobenius_norm();
  v.unital = v.unital_residual <= threshold;
  v.trace_preserving = v.tp_residual <= threshold;

  std::vector<Matrix> qc;
  qc.reserve(kraus.size());
  for (const auto& q : kraus) qc.push_back(q.concrete());
  const Matrix choi =
      choi_of_linear_map(d, [&](const Matrix& x) { return enveloping_apply(qc, x); });
  Eigen::SelfAdjointEigenSolver<Matrix> es((choi + choi.adjoint()) / 2.0);
  v.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  v.completely_positive = v.choi_min_eigenvalue >= -tol::matrix(d * d);
  return v;
}

Channel::Channel(MatrixAlgebra domain, std::vector<AlgebraElement> kraus)
    : domain_(std::move(domain)), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ValidationError("INVALID_CHANNEL", "empty Kraus set");
  for (const auto& q : kraus_)
    if (!q.algebra().same_structure(domain_))
      throw ValidationError("SHAPE_MISMATCH", "Kraus operator outside the domain algebra");
  validation_ = validate_kraus(domain_, kraus_);
  if (!validation_.unital)
    throw ValidationError("UNITAL_VIOLATION",
                          "sum q q* differs from identity by " +
                              std::to_string(validation_.unital_residual));
  if (!validation_.trace_preserving)
    throw ValidationError("TP_VIOLATION", "sum q* q differs from identity by " +
                                              std::to_string(validation_.tp_residual));
  if (!validation_.completely_positive)
    throw ValidationError("CP_VIOLATION", "Choi matrix has eigenvalue " +
                                              std::to_string(validation_.choi_min_eigenvalue));
}

AlgebraElement apply(const Channel& ch, const AlgebraElement& x) {
  if (!x.algebra().same_structure(ch.domain()))
    throw ValidationError("SHAPE_MISMATCH", "element outside the channel domain");
  AlgebraElement out = AlgebraElement::zero(ch.domain());
  for (const auto& q : ch.kraus())
    for (Index i = 0; i < ch.domain().num_blocks(); ++i)
      out.block(i) += q.block(i) * x.block(i) * q.block(i).adjoint();
  return out;
}

AlgebraElement apply_power(const Channel& ch, const AlgebraElement& x, Index m) {
  if (m < 0) throw ValidationError("INVALID_ARGUMENT", "power must be >= 0");
  AlgebraElement out = x;
  for (Index k = 0; k < m; ++k) out = apply(ch, out);
  return out;
}

Channel dual(const Channel& ch) {
  std::vector<AlgebraElement> kraus;
  kraus.reserve(static_cast<size_t>(ch.kraus_count()));
  for (const auto& q : ch.kraus()) kraus.push_back(q.adjoint());
  return Channel(ch.domain(), std::move(kraus));
}

Channel compose(const Channel& second, const Channel& first) {
  if (!second.domain().same_structure(first.domain()))
    throw ValidationError("SHAPE_MISMATCH", "composition domains differ");
  std::vector<AlgebraElement> kraus;
  kraus.reserve(static_cast<size_t>(second.kraus_count() * first.kraus_count()));
  for (const auto& q2 : second.kraus())
    for (const auto& q1 : first.kraus()) kraus.push_back(q2 * q1);
  return minimal_kraus(Channel(second.domain(), std::move(kraus)));
}

Matrix choi_of_linear_map(Index d, const std::function<Matrix(const Matrix&)>& action) {
  Matrix choi = Matrix::Zero(d * d, d * d);
  Matrix unit = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      unit(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = action(unit);
      unit(i, j) = 0.0;
    }
  return choi;
}

Matrix choi_matrix(const Channel& ch) {
  const auto qc = concrete_kraus(ch);
  return choi_of_linear_map(ch.domain().concrete_dim(),
                            [&](const Matrix& x) { return enveloping_apply(qc, x); });
}

bool same_channel(const Channel& a, const Channel& b) {
  if (!a.domain().same_structure(b.domain())) return false;
  const Index d = a.domain().concrete_dim();
  return choi_residual(a, b) <= tol::matrix(d * d);
}

Channel minimal_kraus(const Channel& ch) {
  const Index d = ch.domain().concrete_dim();
  const Matrix choi = choi_matrix(ch);
  Eigen::SelfAdjointEigenSolver<Matrix> es((choi + choi.adjoint()) / 2.0);
  const double cutoff = tol::rank_relative * es.eigenvalues().cwiseAbs().maxCoeff();

  std::vector<AlgebraElement> kraus;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda <= cutoff) continue;
    const Matrix op = std::sqrt(lambda) * unvec_col_major(es.eigenvectors().col(k), d, d);
    // Eigenvectors of the Choi matrix lie in the span of the original Kraus
    // operators, so the gathered element is exact up to roundoff.
    double off_block = 0.0;
    kraus.push_back(AlgebraElement::from_concrete(ch.domain(), op, &off_block));
    if (off_block > tol::matrix(d))
      throw ValidationError("MISMATCH", "extracted Kraus operator leaves the algebra by " +
                                            std::to_string(off_block));
  }
  return Channel(ch.domain(), std::move(kraus));
}

KrausEquivalence kraus_equivalence(const MatrixAlgebra& domain,
                                   const std::vector<AlgebraElement>& set1,
                                   const std::vector<AlgebraElement>& set2) {
  KrausEquivalence result;
  const Channel ch1(domain, set1);
  const Channel ch2(domain, set2);
  result.choi_residual = choi_residual(ch1, ch2);
  const Index d = domain.concrete_dim();
  if (result.choi_residual > tol::matrix(d * d)) return result;

  const Index m = std::max(ch1.kraus_count(), ch2.kraus_count());
  Matrix stack1 = Matrix::Zero(d * d, m);  // columns vec(q_k), zero-padded
  Matrix stack2 = Matrix::Zero(d * d, m);
  for (Index k = 0; k < ch1.kraus_count(); ++k) stack1.col(k) = vec_col_major(set1[static_cast<size_t>(k)].concrete());
  for (Index k = 0; k < ch2.kraus_count(); ++k) stack2.col(k) = vec_col_major(set2[static_cast<size_t>(k)].concrete());

  // Least squares on the trace-Gram system: gram * Y = cross with Y = W^T.
  const Matrix gram = stack1.adjoint() * stack1;
  const Matrix cross = stack1.adjoint() * stack2;
  Eigen::JacobiSVD<Matrix> gram_svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
  gram_svd.setThreshold(tol::rank_relative);
  const Matrix y = gram_svd.solve(cross);

  // The minimal-norm solution is a partial isometry on the determined
  // subspace; its unitary polar factor satisfies the stacking equation.
  Eigen::JacobiSVD<Matrix> polar(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix w = (polar.matrixU() * polar.matrixV().adjoint()).transpose();

  result.mixing = w;
  result.unitarity_residual = unitarity_residual(w);
  result.mapping_residual = (stack1 * w.transpose() - stack2).norm();
  result.equivalent = result.unitarity_residual <= tol::matrix(m) &&
                      result.mapping_residual <= tol::matrix(d * d);
  return result;
}

Matrix apply_transpose_map(const Matrix& x) { return x.transpose(); }

Matrix transpose_map_choi(Index n) {
  return choi_of_linear_map(n, [](const Matrix& x) { return apply_transpose_map(x); });
}

}  // namespace qdilate
