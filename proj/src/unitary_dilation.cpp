#include "qdilate/unitary_dilation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qdilate {

Matrix hermitian_sqrt(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  // Eigenvalues within roundoff of zero are flushed to zero; the square
  // root would otherwise amplify eps-level noise to sqrt(eps).
  RealVector clamped = es.eigenvalues();
  for (Index i = 0; i < clamped.size(); ++i)
    if (clamped(i) < 1e-12) clamped(i) = 0.0;
  return es.eigenvectors() * clamped.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix defect_operator(const Matrix& t) {
  const Index h = t.rows();
  return hermitian_sqrt(Matrix::Identity(h, h) - t.adjoint() * t);
}

Matrix codefect_operator(const Matrix& t) {
  const Index h = t.rows();
  return hermitian_sqrt(Matrix::Identity(h, h) - t * t.adjoint());
}

namespace {

void require_contraction(const Matrix& t) {
  Eigen::JacobiSVD<Matrix> svd(t);
  const double top = svd.singularValues().maxCoeff();
  if (top > 1.0 + tol::contraction_slack)
    throw ValidationError("NOT_CONTRACTION", "largest singular value " + std::to_string(top));
}

}  // namespace

Matrix julia(const Matrix& t) {
  require_contraction(t);
  const Index h = t.rows();
  Matrix u(2 * h, 2 * h);
  u.topLeftCorner(h, h) = t;
  u.topRightCorner(h, h) = -codefect_operator(t);
  u.bottomLeftCorner(h, h) = defect_operator(t);
  u.bottomRightCorner(h, h) = t.adjoint();
  return u;
}

ContractionDilation egervary_n_dilation(const Matrix& t, Index steps) {
  if (steps < 1) throw ValidationError("INVALID_ARGUMENT", "need at least one step");
  require_contraction(t);
  const Index h = t.rows();
  Matrix u = Matrix::Zero((steps + 1) * h, (steps + 1) * h);
  u.block(0, 0, h, h) = t;
  u.block(h, 0, h, h) = defect_operator(t);
  u.block(0, steps * h, h, h) = -codefect_operator(t);
  u.block(h, steps * h, h, h) = t.adjoint();
  for (Index j = 2; j <= steps; ++j)
    u.block(j * h, (j - 1) * h, h, h) = Matrix::Identity(h, h);
  return ContractionDilation{t, steps, std::move(u), h};
}

CompressionReport verify_compressions(const ContractionDilation& dil) {
  CompressionReport report;
  const Index h = dil.block_dim;
  report.tolerance = tol::matrix(dil.unitary.rows());
  report.unitarity_residual = unitarity_residual(dil.unitary);

  Matrix u_power = Matrix::Identity(dil.unitary.rows(), dil.unitary.cols());
  Matrix t_power = Matrix::Identity(h, h);
  double worst = report.unitarity_residual;
  for (Index k = 1; k <= dil.steps + 1; ++k) {
    u_power = u_power * dil.unitary;
    t_power = t_power * dil.contraction;
    const double r = (u_power.topLeftCorner(h, h) - t_power).norm();
    report.residuals.push_back(r);
    if (k <= dil.steps) worst = std::max(worst, r);
  }
  report.boundary_residual = report.residuals.back();
  report.pass = worst <= report.tolerance;
  return report;
}

BridgeReport bridge_check(const NDilation& dil, Index dimension_cap) {
  BridgeReport report;
  report.steps = dil.steps;
  const MatrixAlgebra& big = dil.big_algebra;
  report.gns_dim = big.gns_dim();
  if (report.gns_dim > dimension_cap)
    throw ValidationError("DIMENSION_CAP_EXCEEDED",
                          "GNS dimension " + std::to_string(report.gns_dim) + " exceeds cap");
  report.tolerance = tol::matrix(report.gns_dim);

  // T_alpha via the automorphism's concrete action, T_Phi for the
  // conditional expectation, and T_{q (x) id} via blockwise Kraus action.
  const Matrix t_alpha = representing_matrix_of_map(big, [&](const AlgebraElement& x) {
    return apply_alpha(dil, x, 1);
  });
  const Matrix projector = representing_matrix_of_map(big, [&](const AlgebraElement& x) {
    return phi_n(dil, x);
  });

  const MatrixAlgebra& a = dil.base.system;
  const Channel& q = dil.base.channel;
  MatrixAlgebra env_product = dil.factors[1];
  for (size_t f = 2; f < dil.factors.size(); ++f)
    env_product = tensor_algebra(env_product, dil.factors[f]);
  const Index env_blocks = env_product.num_blocks();

  const Matrix t_q_tensor_id = representing_matrix_of_map(big, [&](const AlgebraElement& x) {
    AlgebraElement out = AlgebraElement::zero(big);
    for (const auto& kraus : q.kraus())
      for (Index i = 0; i < a.num_blocks(); ++i)
        for (Index j = 0; j < env_blocks; ++j) {
          const Index blk = i * env_blocks + j;
          const Index env_dim = env_product.block(j).dim;
          const Matrix big_kraus = kron(kraus.block(i), Matrix::Identity(env_dim, env_dim));
          out.block(blk) += big_kraus * x.block(blk) * big_kraus.adjoint();
        }
    return out;
  });

  report.unitary_residual = unitarity_residual(t_alpha);

  Matrix alpha_power = Matrix::Identity(report.gns_dim, report.gns_dim);
  Matrix q_power = alpha_power;
  for (Index m = 1; m <= dil.steps; ++m) {
    alpha_power = alpha_power * t_alpha;
    q_power = q_power * t_q_tensor_id;
    const double r =
        (projector * alpha_power * projector - projector * q_power * projector).norm();
    report.max_residual = std::max(report.max_residual, r);
  }
  report.max_residual = std::max(report.max_residual, report.unitary_residual);
  report.pass = report.max_residual <= report.tolerance;
  return report;
}

}  // namespace qdilate
