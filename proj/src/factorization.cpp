#include "qdilate/factorization.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace qdilate {

namespace {

bool all_blocks_scalar(const MatrixAlgebra& a) {
  for (Index i = 0; i < a.num_blocks(); ++i)
    if (a.block(i).dim != 1) return false;
  return true;
}

double element_unitarity_residual(const AlgebraElement& u) {
  double worst = 0.0;
  for (Index i = 0; i < u.algebra().num_blocks(); ++i)
    worst = std::max(worst, unitarity_residual(u.block(i)));
  return worst;
}

UnitaryFactorization assemble_and_verify(MatrixAlgebra system, MatrixAlgebra environment,
                                         AlgebraElement unitary,
                                         std::vector<AlgebraElement> kraus,
                                         std::vector<AlgebraElement> env_elements) {
  Channel channel(system, std::move(kraus));
  UnitaryFactorization fact{std::move(system), std::move(environment), std::move(unitary),
                            std::move(env_elements), std::move(channel)};
  const OneDilationReport report = verify_one_dilation(fact);
  if (!report.pass)
    throw ValidationError("FACTORIZATION_MISMATCH",
                          "partial-trace identity residual " +
                              std::to_string(report.max_residual));
  return fact;
}

}  // namespace

OneDilationReport verify_one_dilation(const UnitaryFactorization& fact) {
  OneDilationReport report;
  const MatrixAlgebra& a = fact.system;
  const MatrixAlgebra& b = fact.environment;
  const MatrixAlgebra ab = tensor_algebra(a, b);
  report.tolerance = tol::matrix(ab.concrete_dim());

  const AlgebraElement env_identity = AlgebraElement::identity(b);
  const AlgebraElement u_adj = fact.unitary.adjoint();

  // Partial trace of Ad_U against the channel, on every system matrix unit.
  const auto units = matrix_units(a);
  for (size_t k = 0; k < units.size(); ++k) {
    const AlgebraElement conj = fact.unitary * tensor_element(units[k], env_identity) * u_adj;
    const double r =
        (partial_trace(a, b, conj) - apply(fact.channel, units[k])).frobenius_norm();
    if (r > report.kraus_residual) {
      report.kraus_residual = r;
      report.worst_unit = static_cast<Index>(k);
    }
  }

  // Phi o Ad_U o Phi = (q o ptr) (x) I on the tensor algebra's units.
  for (const auto& y : matrix_units(ab)) {
    const AlgebraElement mid = fact.unitary * conditional_expectation(a, b, y) * u_adj;
    const AlgebraElement lhs = conditional_expectation(a, b, mid);
    const AlgebraElement rhs =
        tensor_element(apply(fact.channel, partial_trace(a, b, y)), env_identity);
    report.expectation_residual =
        std::max(report.expectation_residual, (lhs - rhs).frobenius_norm());
  }

  if (fact.environment_elements.size() == fact.channel.kraus().size()) {
    AlgebraElement rebuilt = AlgebraElement::zero(ab);
    for (size_t k = 0; k < fact.environment_elements.size(); ++k)
      rebuilt += tensor_element(fact.channel.kraus()[k], fact.environment_elements[k]);
    report.reconstruction_residual = (rebuilt - fact.unitary).frobenius_norm();
  }

  report.max_residual = std::max({report.kraus_residual, report.expectation_residual,
                                  report.reconstruction_residual});
  report.pass = report.max_residual <= report.tolerance;
  return report;
}

UnitaryFactorization factorization_from_unitary(const AlgebraElement& u,
                                                const MatrixAlgebra& system,
                                                const MatrixAlgebra& environment) {
  if (!u.algebra().same_structure(tensor_algebra(system, environment)))
    throw ValidationError("SHAPE_MISMATCH", "unitary not in system (x) environment");
  const double ur = element_unitarity_residual(u);
  if (ur > tol::matrix(u.algebra().concrete_dim()))
    throw ValidationError("NOT_UNITARY", "unitarity residual " + std::to_string(ur));

  std::vector<AlgebraElement> kraus;
  std::vector<AlgebraElement> env_elements;

  if (environment.num_blocks() == 1) {
    // Full-block environment: coefficients against matrix units E_kl, each
    // with tr_B(E_kl E_kl*) = 1/m.
    const Index m = environment.block(0).dim;
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (Index k = 0; k < m; ++k)
      for (Index l = 0; l < m; ++l) {
        AlgebraElement coeff = AlgebraElement::zero(system);
        for (Index i = 0; i < system.num_blocks(); ++i) {
          const Index n = system.block(i).dim;
          const Matrix& z = u.block(i);
          for (Index p = 0; p < n; ++p)
            for (Index q = 0; q < n; ++q) coeff.block(i)(p, q) = z(p * m + k, q * m + l);
        }
        AlgebraElement env_unit = AlgebraElement::zero(environment);
        env_unit.block(0)(k, l) = 1.0 / scale;
        kraus.push_back(scale * coeff);
        env_elements.push_back(std::move(env_unit));
      }
  } else if (all_blocks_scalar(environment)) {
    // Diagonal environment: block (i, j) of u is the j-th coefficient, with
    // tr_B(E_jj E_jj*) = p_j.
    for (Index j = 0; j < environment.num_blocks(); ++j) {
      const double p = environment.block(j).weight;
      AlgebraElement coeff = AlgebraElement::zero(system);
      for (Index i = 0; i < system.num_blocks(); ++i)
        coeff.block(i) = u.block(i * environment.num_blocks() + j);
      AlgebraElement env_unit = AlgebraElement::zero(environment);
      env_unit.block(j)(0, 0) = 1.0 / std::sqrt(p);
      kraus.push_back(std::sqrt(p) * coeff);
      env_elements.push_back(std::move(env_unit));
    }
  } else {
    throw ValidationError("UNSUPPORTED_ENVIRONMENT",
                          "environment must be a full block or a diagonal algebra");
  }

  return assemble_and_verify(system, environment, u, std::move(kraus), std::move(env_elements));
}

Matrix dft_matrix(Index n) {
  Matrix omega(n, n);
  const double theta = -2.0 * M_PI / static_cast<double>(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j)
      omega(k, j) = scale * std::polar(1.0, theta * static_cast<double>(k * j));
  return omega;
}

UnitaryFactorization dft_channel(Index n, Index m) {
  if (n < 1 || m < 1) throw ValidationError("INVALID_ARGUMENT", "dft_channel needs n, m >= 1");
  const Matrix omega = dft_matrix(n * m);
  const MatrixAlgebra system = MatrixAlgebra::full(n);
  const MatrixAlgebra environment = MatrixAlgebra::full(m);

  // Contiguous n x n tiles of the DFT matrix are the coefficients against
  // the environment matrix units.
  Matrix u = Matrix::Zero(n * m, n * m);
  Matrix env_unit = Matrix::Zero(m, m);
  for (Index k = 0; k < m; ++k)
    for (Index j = 0; j < m; ++j) {
      env_unit(k, j) = 1.0;
      u += kron(omega.block(k * n, j * n, n, n), env_unit);
      env_unit(k, j) = 0.0;
    }
  return factorization_from_unitary(AlgebraElement(tensor_algebra(system, environment), {u}),
                                    system, environment);
}

UnitaryFactorization random_unitary_channel(const std::vector<Matrix>& unitaries,
                                            const std::vector<double>& probs) {
  if (unitaries.empty() || unitaries.size() != probs.size())
    throw ValidationError("INVALID_ARGUMENT", "need matching unitaries and probabilities");
  double total = 0.0;
  for (double p : probs) {
    if (p <= 0.0) throw ValidationError("INVALID_ARGUMENT", "probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > tol::scalar)
    throw ValidationError("INVALID_ARGUMENT", "probabilities must sum to 1");
  const Index n = unitaries.front().rows();
  for (const auto& v : unitaries) {
    if (v.rows() != n || v.cols() != n)
      throw ValidationError("SHAPE_MISMATCH", "unitaries must share one dimension");
    if (unitarity_residual(v) > tol::matrix(n))
      throw ValidationError("NOT_UNITARY", "input matrix is not unitary");
  }

  const MatrixAlgebra system = MatrixAlgebra::full(n);
  const MatrixAlgebra environment = MatrixAlgebra::diagonal(probs);
  std::vector<Matrix> blocks(unitaries.begin(), unitaries.end());
  const AlgebraElement u(tensor_algebra(system, environment), std::move(blocks));
  return factorization_from_unitary(u, system, environment);
}

UnitaryFactorization depolarizing_channel(Index n) {
  const MatrixAlgebra system = MatrixAlgebra::full(n);
  Matrix swap = Matrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) swap(i * n + j, j * n + i) = 1.0;
  return factorization_from_unitary(AlgebraElement(tensor_algebra(system, system), {swap}),
                                    system, system);
}

CorrelationMatrix::CorrelationMatrix(Matrix c) : c_(std::move(c)) {
  if (c_.rows() != c_.cols())
    throw ValidationError("NOT_CORRELATION", "correlation matrix must be square");
  const Index n = c_.rows();
  if ((c_ - c_.adjoint()).norm() > tol::matrix(n))
    throw ValidationError("NOT_CORRELATION", "correlation matrix must be Hermitian");
  for (Index i = 0; i < n; ++i)
    if (std::abs(c_(i, i) - 1.0) > tol::scalar)
      throw ValidationError("NOT_CORRELATION", "diagonal entries must equal 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es((c_ + c_.adjoint()) / 2.0);
  if (es.eigenvalues().minCoeff() < -tol::matrix(n))
    throw ValidationError("NOT_CORRELATION", "matrix has eigenvalue " +
                                                 std::to_string(es.eigenvalues().minCoeff()));
}

bool CorrelationMatrix::is_real() const {
  return c_.imag().cwiseAbs().maxCoeff() <= tol::scalar;
}

Channel schur_channel(const CorrelationMatrix& c) {
  const Index n = c.size();
  Eigen::SelfAdjointEigenSolver<Matrix> es((c.matrix() + c.matrix().adjoint()) / 2.0);
  const double cutoff = tol::rank_relative * es.eigenvalues().cwiseAbs().maxCoeff();
  const MatrixAlgebra domain = MatrixAlgebra::full(n);
  std::vector<AlgebraElement> kraus;
  for (Index k = 0; k < n; ++k) {
    if (es.eigenvalues()(k) <= cutoff) continue;
    const Vector v = std::sqrt(es.eigenvalues()(k)) * es.eigenvectors().col(k);
    kraus.push_back(AlgebraElement(domain, {Matrix(v.asDiagonal())}));
  }
  return Channel(domain, std::move(kraus));
}

std::optional<RandomUnitaryMixture> rank_one_hull_member(const CorrelationMatrix& c) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((c.matrix() + c.matrix().adjoint()) / 2.0);
  const double cutoff = tol::rank_relative * es.eigenvalues().cwiseAbs().maxCoeff();
  Index rank = 0;
  for (Index k = 0; k < c.size(); ++k)
    if (es.eigenvalues()(k) > cutoff) ++rank;
  if (rank != 1) return std::nullopt;

  const Vector v =
      std::sqrt(es.eigenvalues()(c.size() - 1)) * es.eigenvectors().col(c.size() - 1);
  return RandomUnitaryMixture{{Matrix(v.asDiagonal())}, {1.0}};
}

std::vector<Matrix> clifford_generators(Index p) {
  if (p < 1) throw ValidationError("INVALID_ARGUMENT", "need p >= 1");
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;

  const Index qubits = (p + 1) / 2;
  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(p));
  for (Index k = 0; k < p; ++k) {
    const Index site = k / 2;
    Matrix gen = Matrix::Identity(1, 1);
    for (Index s = 0; s < qubits; ++s) {
      if (s < site)
        gen = kron(gen, sz);
      else if (s == site)
        gen = kron(gen, (k % 2 == 0) ? sx : sy);
      else
        gen = kron(gen, Matrix::Identity(2, 2));
    }
    out.push_back(std::move(gen));
  }
  return out;
}

UnitaryFactorization real_correlation_factorization(const CorrelationMatrix& c) {
  if (!c.is_real())
    throw ValidationError("NOT_REAL", "correlation matrix has complex entries");
  const Index n = c.size();
  const RealMatrix cr = c.matrix().real();

  Eigen::SelfAdjointEigenSolver<RealMatrix> es((cr + cr.transpose()) / 2.0);
  const double cutoff = tol::rank_relative * es.eigenvalues().cwiseAbs().maxCoeff();
  Index rank = 0;
  for (Index k = 0; k < n; ++k)
    if (es.eigenvalues()(k) > cutoff) ++rank;
  if (rank < 1) throw ValidationError("NOT_CORRELATION", "zero correlation matrix");

  // C = G^T G with unit-norm columns g_j in R^rank. The eigendecomposition
  // factor is canonicalized to the triangular Gram factor by QR, so the
  // output does not depend on eigenvector sign choices.
  RealMatrix g0(rank, n);
  for (Index r = 0; r < rank; ++r) {
    const Index k = n - 1 - r;  // descending eigenvalues
    g0.row(r) = std::sqrt(es.eigenvalues()(k)) * es.eigenvectors().col(k).transpose();
  }
  Eigen::HouseholderQR<RealMatrix> qr(g0);
  RealMatrix gram_factor =
      RealMatrix(qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>());
  for (Index r = 0; r < rank; ++r) {
    for (Index j = r; j < n; ++j) {
      if (std::abs(gram_factor(r, j)) > tol::scalar) {
        if (gram_factor(r, j) < 0) gram_factor.row(r) *= -1.0;
        break;
      }
    }
  }

  const std::vector<Matrix> generators = clifford_generators(rank);
  const Index env_dim = generators.front().rows();
  const MatrixAlgebra system = MatrixAlgebra::full(n);
  const MatrixAlgebra environment = MatrixAlgebra::full(env_dim);
  const MatrixAlgebra product = tensor_algebra(system, environment);

  // U = sum_k D_{v_k} (x) X_k with v_k the k-th row of the Gram factor; the
  // diagonal Kraus operators D_{v_k} implement X -> X o C and the Clifford
  // generators are trace-orthonormal.
  std::vector<AlgebraElement> kraus;
  std::vector<AlgebraElement> env_elements;
  Matrix u = Matrix::Zero(n * env_dim, n * env_dim);
  for (Index k = 0; k < rank; ++k) {
    const Vector v = gram_factor.row(k).transpose().cast<Complex>();
    const Matrix diag = Matrix(v.asDiagonal());
    u += kron(diag, generators[static_cast<size_t>(k)]);
    kraus.push_back(AlgebraElement(system, {diag}));
    env_elements.push_back(AlgebraElement(environment, {generators[static_cast<size_t>(k)]}));
  }

  return assemble_and_verify(system, environment, AlgebraElement(product, {u}),
                             std::move(kraus), std::move(env_elements));
}

}  // namespace qdilate
