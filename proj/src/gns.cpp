#include "qdilate/gns.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qdilate {

namespace {

constexpr double classify_tol = 1e-8;

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& t) {
  return Eigen::JacobiSVD<Matrix>(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

}  // namespace

Vector gns_coordinates(const AlgebraElement& x) {
  const MatrixAlgebra& a = x.algebra();
  Vector v(a.gns_dim());
  Index k = 0;
  for (Index i = 0; i < a.num_blocks(); ++i) {
    const Index n = a.block(i).dim;
    const double scale = std::sqrt(a.block(i).weight / static_cast<double>(n));
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) v(k++) = scale * x.block(i)(r, c);
  }
  return v;
}

AlgebraElement from_gns_coordinates(const MatrixAlgebra& a, const Vector& v) {
  if (v.size() != a.gns_dim())
    throw ValidationError("SHAPE_MISMATCH", "coordinate vector has wrong length");
  AlgebraElement x = AlgebraElement::zero(a);
  Index k = 0;
  for (Index i = 0; i < a.num_blocks(); ++i) {
    const Index n = a.block(i).dim;
    const double scale = std::sqrt(static_cast<double>(n) / a.block(i).weight);
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) x.block(i)(r, c) = scale * v(k++);
  }
  return x;
}

Matrix representing_matrix_of_map(
    const MatrixAlgebra& a,
    const std::function<AlgebraElement(const AlgebraElement&)>& action) {
  const Index g = a.gns_dim();
  Matrix t(g, g);
  const auto basis = orthonormal_units(a);
  for (Index l = 0; l < g; ++l) t.col(l) = gns_coordinates(action(basis[static_cast<size_t>(l)]));
  return t;
}

RepContraction representing_matrix(const Channel& ch) {
  return RepContraction{ch.domain(), representing_matrix_of_map(ch.domain(), [&](const AlgebraElement& x) {
                          return apply(ch, x);
                        })};
}

Matrix representing_matrix_kron(const Channel& ch) {
  if (ch.domain().num_blocks() != 1)
    throw ValidationError("INVALID_ARGUMENT",
                          "Kronecker formula needs a single full block domain");
  const Index n = ch.domain().block(0).dim;
  Matrix t = Matrix::Zero(n * n, n * n);
  for (const auto& q : ch.kraus()) t += kron(q.block(0), q.block(0).conjugate());
  return t;
}

Matrix left_mult_matrix(const Matrix& b) {
  return kron(b, Matrix::Identity(b.rows(), b.cols()));
}

Matrix right_mult_matrix(const Matrix& b) {
  return kron(Matrix::Identity(b.rows(), b.cols()), b.transpose());
}

Matrix swap_matrix(Index n) {
  Matrix s = Matrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) s(i * n + j, j * n + i) = 1.0;
  return s;
}

Vector conjugation_apply(Index n, const Vector& v) {
  return swap_matrix(n) * v.conjugate();
}

double conjugation_commutant_residual(const Matrix& t) {
  const Index n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(t.rows()))));
  const Matrix s = swap_matrix(n);
  return (s * t.conjugate() * s - t).norm();
}

const char* to_string(ContractionClass c) {
  switch (c) {
    case ContractionClass::Unitary: return "UNITARY";
    case ContractionClass::Projection: return "PROJECTION";
    case ContractionClass::PartialIsometry: return "PARTIAL_ISOMETRY";
    case ContractionClass::GenericContraction: return "GENERIC_CONTRACTION";
  }
  return "GENERIC_CONTRACTION";
}

ContractionClass classify(const Matrix& t) {
  const Index g = t.rows();
  const double scale = classify_tol * std::sqrt(static_cast<double>(g));
  const auto svd = full_svd(t);
  const auto& sv = svd.singularValues();

  bool all_one = true, zero_or_one = true;
  for (Index i = 0; i < sv.size(); ++i) {
    const bool near_one = std::abs(sv(i) - 1.0) <= classify_tol;
    const bool near_zero = sv(i) <= classify_tol;
    all_one = all_one && near_one;
    zero_or_one = zero_or_one && (near_one || near_zero);
  }
  if (all_one) return ContractionClass::Unitary;
  if ((t * t - t).norm() <= scale && (t - t.adjoint()).norm() <= scale)
    return ContractionClass::Projection;
  if (zero_or_one) return ContractionClass::PartialIsometry;
  return ContractionClass::GenericContraction;
}

ChannelClassification classify_channel(const Channel& ch) {
  ChannelClassification out;
  const RepContraction rep = representing_matrix(ch);
  out.cls = classify(rep.matrix);

  const MatrixAlgebra& a = ch.domain();
  const double threshold = tol::matrix(a.concrete_dim());
  const auto units = matrix_units(a);

  double mult_residual = 0.0;
  std::vector<AlgebraElement> images;
  images.reserve(units.size());
  for (const auto& u : units) images.push_back(apply(ch, u));
  for (size_t k = 0; k < units.size(); ++k)
    for (size_t l = 0; l < units.size(); ++l)
      mult_residual = std::max(
          mult_residual, (apply(ch, units[k] * units[l]) - images[k] * images[l]).frobenius_norm());
  out.multiplicative = mult_residual <= threshold;

  out.idempotent = same_channel(compose(ch, ch), ch);
  out.self_dual = same_channel(dual(ch), ch);

  // q restricted to its multiplicative domain, then the trace-preserving
  // expectation onto it, reproduces q exactly when T_q is a partial isometry.
  const MultiplicativeDomain mult = multiplicative_domain(ch);
  const Matrix projector = mult.basis * mult.basis.adjoint();
  double restricted_residual = 0.0;
  for (const auto& u : units) {
    const AlgebraElement projected =
        from_gns_coordinates(a, projector * gns_coordinates(u));
    restricted_residual =
        std::max(restricted_residual, (apply(ch, projected) - apply(ch, u)).frobenius_norm());
  }
  out.restricted_multiplicative = restricted_residual <= threshold;

  const bool projection_predicate = out.idempotent && out.self_dual;
  switch (out.cls) {
    case ContractionClass::Unitary:
      out.predicate_agrees = out.multiplicative;
      break;
    case ContractionClass::Projection:
      out.predicate_agrees = projection_predicate;
      break;
    case ContractionClass::PartialIsometry:
      out.predicate_agrees =
          out.restricted_multiplicative && !out.multiplicative && !projection_predicate;
      break;
    case ContractionClass::GenericContraction:
      out.predicate_agrees =
          !out.multiplicative && !projection_predicate && !out.restricted_multiplicative;
      break;
  }
  return out;
}

SplitParts isometric_split(const Matrix& t) {
  const auto svd = full_svd(t);
  const auto& sv = svd.singularValues();
  const Index g = t.rows();

  SplitParts parts;
  parts.isometric = Matrix::Zero(g, g);
  std::vector<Index> unit_indices;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) >= 1.0 - tol::singular_one) {
      parts.isometric += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
      unit_indices.push_back(i);
    } else if (sv(i) > 1.0 - tol::singular_warn) {
      parts.gap_warning = true;
    }
  }
  parts.rank_one_dim = static_cast<Index>(unit_indices.size());
  parts.unit_singular_basis = Matrix(g, parts.rank_one_dim);
  for (size_t k = 0; k < unit_indices.size(); ++k)
    parts.unit_singular_basis.col(static_cast<Index>(k)) = svd.matrixV().col(unit_indices[k]);
  parts.strict = t - parts.isometric;
  return parts;
}

Matrix orthonormal_span(const Matrix& vectors, double rel_cutoff) {
  if (vectors.cols() == 0) return Matrix(vectors.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const double cutoff = rel_cutoff * svd.singularValues().maxCoeff();
  Index rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

double subspace_angle(const Matrix& p, const Matrix& q) {
  if (p.cols() != q.cols()) return M_PI / 2.0;
  if (p.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(p.adjoint() * q);
  const double c = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  return std::acos(c);
}

Matrix subspace_intersection(const Matrix& p, const Matrix& q) {
  const Index g = p.rows();
  const Matrix defect = (Matrix::Identity(g, g) - p * p.adjoint()) +
                        (Matrix::Identity(g, g) - q * q.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es((defect + defect.adjoint()) / 2.0);
  Index dim = 0;
  for (Index i = 0; i < g; ++i)
    if (es.eigenvalues()(i) <= tol::rank_relative) ++dim;
  return es.eigenvectors().leftCols(dim);
}

namespace {

// Kernel of the Schwarz-defect form I - T*T; equals Mult(q) for T = T_{q}.
Matrix schwarz_defect_kernel(const Matrix& t) {
  const Index g = t.rows();
  const Matrix defect = Matrix::Identity(g, g) - t.adjoint() * t;
  Eigen::SelfAdjointEigenSolver<Matrix> es((defect + defect.adjoint()) / 2.0);
  Index dim = 0;
  for (Index i = 0; i < g; ++i)
    if (es.eigenvalues()(i) <= classify_tol) ++dim;
  return es.eigenvectors().leftCols(dim);
}

}  // namespace

MultiplicativeDomain multiplicative_domain(const Channel& ch) {
  const MatrixAlgebra& a = ch.domain();
  const RepContraction rep = representing_matrix(ch);

  MultiplicativeDomain out;
  out.basis = schwarz_defect_kernel(rep.matrix);
  out.dim = out.basis.cols();

  const SplitParts split = isometric_split(rep.matrix);
  out.spectral_dim = split.rank_one_dim;
  out.subspace_angle = subspace_angle(out.basis, split.unit_singular_basis);
  if (out.dim != out.spectral_dim || out.subspace_angle > 1e-6)
    throw ValidationError("MISMATCH",
                          "spectral and Schwarz-defect multiplicative domains disagree");

  // Direct verification: Schwarz equalities on the basis, closure under
  // products and adjoints.
  const double threshold = tol::matrix(a.concrete_dim());
  const Matrix projector = out.basis * out.basis.adjoint();
  const Index g = a.gns_dim();
  std::vector<AlgebraElement> basis_elements;
  for (Index k = 0; k < out.dim; ++k)
    basis_elements.push_back(from_gns_coordinates(a, out.basis.col(k)));
  double residual = 0.0;
  for (const auto& m : basis_elements) {
    const AlgebraElement qm = apply(ch, m);
    residual = std::max(residual,
                        (apply(ch, m.adjoint() * m) - qm.adjoint() * qm).frobenius_norm());
    residual = std::max(residual,
                        (apply(ch, m * m.adjoint()) - qm * qm.adjoint()).frobenius_norm());
    const Vector adj = gns_coordinates(m.adjoint());
    residual = std::max(residual, ((Matrix::Identity(g, g) - projector) * adj).norm());
  }
  for (const auto& m1 : basis_elements)
    for (const auto& m2 : basis_elements) {
      const Vector prod = gns_coordinates(m1 * m2);
      residual = std::max(residual, ((Matrix::Identity(g, g) - projector) * prod).norm());
    }
  out.closure_residual = residual;
  if (residual > threshold)
    throw ValidationError("MISMATCH", "multiplicative domain fails closure by " +
                                          std::to_string(residual));
  return out;
}

StableDomainReport stable_multiplicative_domain(const Channel& ch, Index max_power) {
  const RepContraction rep = representing_matrix(ch);
  const Index g = rep.matrix.rows();
  if (max_power < 1) max_power = 2 * g;

  StableDomainReport out;
  out.basis = schwarz_defect_kernel(rep.matrix);
  out.stabilized_at = 1;
  Index last_change = 1;
  Matrix power = rep.matrix;
  for (Index k = 2; k <= max_power; ++k) {
    power = power * rep.matrix;
    const Matrix mult_k = schwarz_defect_kernel(power);
    const Matrix next = subspace_intersection(out.basis, mult_k);
    if (next.cols() != out.basis.cols()) last_change = k;
    out.basis = next;
  }
  out.dim = out.basis.cols();
  out.stabilized_at = last_change;
  out.converged = last_change < max_power;

  const SplitParts split = isometric_split(rep.matrix);
  Matrix ran_v(g, split.rank_one_dim);
  {
    // Range of V: left singular vectors with sigma = 1.
    const auto svd = full_svd(rep.matrix);
    Index c = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) >= 1.0 - tol::singular_one) ran_v.col(c++) = svd.matrixU().col(i);
  }
  const Matrix candidate = subspace_intersection(split.unit_singular_basis, ran_v);
  out.closed_form_dim = candidate.cols();
  out.closed_form_angle = subspace_angle(out.basis, candidate);
  out.closed_form_agrees =
      out.closed_form_dim == out.dim && out.closed_form_angle <= 1e-6;
  return out;
}

std::pair<Index, Index> defect_indices(const Matrix& t) {
  const SplitParts split = isometric_split(t);
  const Index g = t.rows();
  return {g - split.rank_one_dim, g - split.rank_one_dim};
}

KernelSelfAdjointness kernel_selfadjointness_check(const Channel& ch) {
  const RepContraction rep = representing_matrix(ch);
  const Index g = rep.matrix.rows();
  const auto svd = full_svd(rep.matrix);
  const double cutoff = tol::rank_relative * std::max(1.0, svd.singularValues().maxCoeff());

  std::vector<Index> null_indices;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) <= cutoff) null_indices.push_back(i);

  KernelSelfAdjointness out;
  out.kernel_dim = static_cast<Index>(null_indices.size());

  Matrix kernel(g, out.kernel_dim), cokernel(g, out.kernel_dim);
  for (size_t k = 0; k < null_indices.size(); ++k) {
    kernel.col(static_cast<Index>(k)) = svd.matrixV().col(null_indices[k]);
    cokernel.col(static_cast<Index>(k)) = svd.matrixU().col(null_indices[k]);
  }

  const Matrix pk = Matrix::Identity(g, g) - kernel * kernel.adjoint();
  const Matrix pc = Matrix::Identity(g, g) - cokernel * cokernel.adjoint();
  for (Index k = 0; k < out.kernel_dim; ++k) {
    const AlgebraElement km = from_gns_coordinates(ch.domain(), kernel.col(k));
    out.kernel_residual =
        std::max(out.kernel_residual, (pk * gns_coordinates(km.adjoint())).norm());
    const AlgebraElement cm = from_gns_coordinates(ch.domain(), cokernel.col(k));
    out.cokernel_residual =
        std::max(out.cokernel_residual, (pc * gns_coordinates(cm.adjoint())).norm());
  }
  out.pass = std::max(out.kernel_residual, out.cokernel_residual) <= tol::matrix(g);
  return out;
}

}  // namespace qdilate
