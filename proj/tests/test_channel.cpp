#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "qdilate/channel.hpp"
#include "test_helpers.hpp"

using namespace qdilate;
using namespace qdilate::testing;

namespace {

Channel identity_channel(Index n) {
  const MatrixAlgebra a = MatrixAlgebra::full(n);
  return Channel(a, {AlgebraElement::identity(a)});
}

}  // namespace

TEST_CASE("channel validation accepts UCPTP sets and rejects the rest") {
  const MatrixAlgebra m2 = MatrixAlgebra::full(2);
  CHECK_NOTHROW(identity_channel(2));
  CHECK_NOTHROW(depolarizing_pauli_channel());

  // {E11, E12}: trace-preserving but not unital.
  const auto units = matrix_units(m2);
  const ChannelValidation v = validate_kraus(m2, {units[0], units[1]});
  CHECK(v.trace_preserving);
  CHECK_FALSE(v.unital);
  CHECK(v.unital_residual > 1e-3);
  CHECK_THROWS_AS(Channel(m2, {units[0], units[1]}), ValidationError);
  try {
    Channel bad(m2, {units[0], units[1]});
  } catch (const ValidationError& e) {
    CHECK(e.code() == "UNITAL_VIOLATION");
  }
}

TEST_CASE("apply and apply_power") {
  const Channel id = identity_channel(2);
  const Channel dep = depolarizing_pauli_channel();
  const MatrixAlgebra& m2 = id.domain();
  Rng rng(1);

  const AlgebraElement x = random_element(m2, rng);
  CHECK(distance(apply(id, x), x) < tol::matrix(2));
  CHECK(distance(apply_power(dep, x, 0), x) == 0.0);

  const AlgebraElement z(m2, {pauli_z()});
  CHECK(apply(dep, z).frobenius_norm() < tol::matrix(2));
  CHECK(distance(apply(dep, AlgebraElement::identity(m2)), AlgebraElement::identity(m2)) <
        tol::matrix(2));
}

TEST_CASE("tracial dual: involution and the defining pairing") {
  const Channel id = identity_channel(2);
  CHECK(choi_residual(dual(id), id) < tol::matrix(4));

  Rng rng(5);
  const Channel q = haar_block_channel(2, 2, rng);
  CHECK(choi_residual(dual(dual(q)), q) < tol::matrix(4));

  for (int t = 0; t < 10; ++t) {
    const AlgebraElement a1 = random_element(q.domain(), rng);
    const AlgebraElement a2 = random_element(q.domain(), rng);
    const Complex lhs = trace(a1 * apply(dual(q), a2));
    const Complex rhs = trace(apply(q, a1) * a2);
    CHECK(std::abs(lhs - rhs) < tol::scalar * 100);
  }
}

TEST_CASE("composition reduces Kraus sets and matches the apply oracle") {
  const Channel id = identity_channel(2);
  const Channel dep = depolarizing_pauli_channel();
  Rng rng(9);
  const Channel q = haar_block_channel(2, 2, rng);

  CHECK(same_channel(compose(id, q), q));
  CHECK(same_channel(compose(dep, dep), dep));

  const Channel q2 = haar_block_channel(2, 2, rng);
  const Channel composed = compose(q2, q);
  const Matrix oracle = choi_of_linear_map(2, [&](const Matrix& e) {
    const AlgebraElement x(q.domain(), {e});
    return apply(q2, apply(q, x)).block(0);
  });
  CHECK(distance(choi_matrix(composed), oracle) < tol::matrix(4));
}

TEST_CASE("Choi matrices of the stock channels") {
  const Channel id = identity_channel(2);
  const Matrix c_id = choi_matrix(id);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c_id);
  CHECK(es.eigenvalues()(3) == doctest::Approx(2.0));  // rank one, top eigenvalue n
  CHECK(std::abs(es.eigenvalues()(2)) < 1e-12);

  const Channel dep = depolarizing_pauli_channel();
  CHECK(distance(choi_matrix(dep), 0.5 * Matrix::Identity(4, 4)) < tol::matrix(4));

  // Channels have Hermitian Choi matrices; the transpose map is Hermitian
  // but not PSD.
  Rng rng(13);
  const Channel q = haar_block_channel(2, 2, rng);
  const Matrix c_q = choi_matrix(q);
  CHECK((c_q - c_q.adjoint()).norm() < tol::matrix(4));

  const Matrix c_t = transpose_map_choi(2);
  CHECK((c_t - c_t.adjoint()).norm() < tol::matrix(4));
  Eigen::SelfAdjointEigenSolver<Matrix> est(c_t);
  CHECK(est.eigenvalues().minCoeff() == doctest::Approx(-1.0));
}

TEST_CASE("Choi matrix reconstructs the channel action on units") {
  Rng rng(21);
  const Channel q = haar_block_channel(2, 2, rng);
  const Matrix choi = choi_matrix(q);
  const auto units = matrix_units(q.domain());
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      const Matrix block = choi.block(i * 2, j * 2, 2, 2);
      CHECK(distance(block, apply(q, units[static_cast<size_t>(i * 2 + j)]).block(0)) <
            tol::matrix(4));
    }
}

TEST_CASE("minimal Kraus extraction tracks the Choi rank") {
  const MatrixAlgebra m2 = MatrixAlgebra::full(2);
  const double s = 1.0 / std::sqrt(2.0);
  const AlgebraElement half_id(m2, {s * Matrix::Identity(2, 2)});
  const Channel redundant(m2, {half_id, half_id});
  const Channel reduced = minimal_kraus(redundant);
  CHECK(reduced.kraus_count() == 1);
  CHECK(same_channel(reduced, redundant));

  const Channel dep = depolarizing_pauli_channel();
  Channel composed(m2, [&] {
    std::vector<AlgebraElement> kraus;
    for (const auto& q2 : dep.kraus())
      for (const auto& q1 : dep.kraus()) kraus.push_back(q2 * q1);
    return kraus;
  }());
  CHECK(composed.kraus_count() == 16);
  const Channel minimal = minimal_kraus(composed);
  CHECK(minimal.kraus_count() == 4);
  CHECK(same_channel(minimal, dep));

  const Channel twice = minimal_kraus(minimal);
  CHECK(twice.kraus_count() == minimal.kraus_count());
  CHECK(same_channel(twice, minimal));
}

TEST_CASE("Kraus equivalence finds the unitary mixing matrix") {
  const MatrixAlgebra m2 = MatrixAlgebra::full(2);
  const Channel dep = depolarizing_pauli_channel();

  SUBCASE("a set against itself") {
    const auto eq = kraus_equivalence(m2, dep.kraus(), dep.kraus());
    REQUIRE(eq.equivalent);
    CHECK(distance(eq.mixing, Matrix::Identity(4, 4)) < tol::matrix(4));
  }
  SUBCASE("phase freedom on the identity") {
    const Complex phase = std::polar(1.0, 0.7);
    const AlgebraElement id = AlgebraElement::identity(m2);
    const AlgebraElement rotated = phase * id;
    const auto eq = kraus_equivalence(m2, {id}, {rotated});
    REQUIRE(eq.equivalent);
    REQUIRE(eq.mixing.rows() == 1);
    CHECK(std::abs(eq.mixing(0, 0) - phase) < tol::scalar * 100);
  }
  SUBCASE("Pauli set against the minimal extraction") {
    const Channel minimal = minimal_kraus(depolarizing_pauli_channel());
    const auto eq = kraus_equivalence(m2, dep.kraus(), minimal.kraus());
    REQUIRE(eq.equivalent);
    CHECK(eq.unitarity_residual < tol::matrix(4));
    CHECK(eq.mapping_residual < tol::matrix(16));
  }
  SUBCASE("padded sets of different sizes") {
    const double s = 1.0 / std::sqrt(2.0);
    const AlgebraElement half_id(m2, {s * Matrix::Identity(2, 2)});
    const AlgebraElement id = AlgebraElement::identity(m2);
    const auto eq = kraus_equivalence(m2, {id}, {half_id, half_id});
    REQUIRE(eq.equivalent);
    CHECK(eq.mixing.rows() == 2);
    CHECK(eq.unitarity_residual < tol::matrix(2));
    CHECK(eq.mapping_residual < tol::matrix(16));
  }
  SUBCASE("different channels are not equivalent") {
    const AlgebraElement id = AlgebraElement::identity(m2);
    const auto eq = kraus_equivalence(m2, {id}, dep.kraus());
    CHECK_FALSE(eq.equivalent);
    CHECK(eq.choi_residual > 1e-3);
  }
}

TEST_CASE("channel properties on seeded random channels") {
  Rng rng(33);
  for (int t = 0; t < 5; ++t) {
    const Channel q = haar_block_channel(2, 2, rng);
    const MatrixAlgebra& a = q.domain();

    // Trace preservation and faithfulness.
    const AlgebraElement x = random_element(a, rng);
    CHECK(std::abs(trace(apply(q, x)) - trace(x)) < tol::scalar * 100);
    const double c = 0.5;  // w / n on M_2
    CHECK(trace(apply(q, x.adjoint() * x)).real() >=
          c * x.frobenius_norm() * x.frobenius_norm() - tol::scalar);

    // Schwarz inequality: q(A*A) - q(A)*q(A) is PSD.
    const AlgebraElement gap = apply(q, x.adjoint() * x) - apply(q, x).adjoint() * apply(q, x);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gap.block(0));
    CHECK(es.eigenvalues().minCoeff() >= -tol::matrix(2));
  }
}
