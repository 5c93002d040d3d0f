#include <doctest.h>

#include <Eigen/SVD>

#include "qdilate/gns.hpp"
#include "test_helpers.hpp"

using namespace qdilate;
using namespace qdilate::testing;

namespace {

Channel automorphism_channel(const Matrix& v) {
  const MatrixAlgebra a = MatrixAlgebra::full(v.rows());
  return Channel(a, {AlgebraElement(a, {v})});
}

// Dephase onto the diagonal, then cycle the diagonal entries: the
// composition of a *-monomorphism of the diagonal subalgebra with the
// expectation onto it. Kraus set {E_{i+1,i}}.
Channel diagonal_cycle_channel(Index n) {
  const MatrixAlgebra a = MatrixAlgebra::full(n);
  std::vector<AlgebraElement> kraus;
  for (Index i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e((i + 1) % n, i) = 1.0;
    kraus.emplace_back(a, std::vector<Matrix>{e});
  }
  return Channel(a, std::move(kraus));
}

}  // namespace

TEST_CASE("GNS coordinates are isometric") {
  Rng rng(1);
  const MatrixAlgebra a = make_algebra({{2, 0.5}, {3, 0.5}});
  for (int t = 0; t < 5; ++t) {
    const AlgebraElement x = random_element(a, rng);
    const Vector v = gns_coordinates(x);
    CHECK(v.norm() == doctest::Approx(gns_norm(x)));
    CHECK(distance(from_gns_coordinates(a, v), x) < 1e-12);
    const AlgebraElement y = random_element(a, rng);
    CHECK(std::abs(v.dot(gns_coordinates(y)) - inner_product(x, y)) < tol::scalar * 100);
  }
}

TEST_CASE("representing matrices of the stock channels") {
  const MatrixAlgebra m2 = MatrixAlgebra::full(2);
  const Channel id(m2, {AlgebraElement::identity(m2)});
  CHECK(distance(representing_matrix(id).matrix, Matrix::Identity(4, 4)) < 1e-12);

  // Depolarizing: rank-one projection pairing E11 with E22.
  Matrix dep_expected = Matrix::Zero(4, 4);
  dep_expected(0, 0) = dep_expected(0, 3) = dep_expected(3, 0) = dep_expected(3, 3) = 0.5;
  CHECK(distance(representing_matrix(depolarizing_pauli_channel()).matrix, dep_expected) <
        1e-12);

  // Conjugation by sigma_x: the Kronecker formula gives a real matrix.
  const Channel flip = automorphism_channel(pauli_x());
  CHECK(distance(representing_matrix(flip).matrix, kron(pauli_x(), pauli_x())) < 1e-12);
}

TEST_CASE("Kronecker formula agrees with column evaluation") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const Channel q = haar_block_channel(2, 2, rng);
    CHECK(distance(representing_matrix(q).matrix, representing_matrix_kron(q)) < 1e-12);
  }
  for (int t = 0; t < 5; ++t) {
    const Channel q = haar_block_channel(3, 2, rng);
    CHECK(distance(representing_matrix(q).matrix, representing_matrix_kron(q)) < 1e-12);
  }
}

TEST_CASE("left and right multiplication operators") {
  Rng rng(5);
  for (Index n : {2, 3}) {
    const Matrix b = rng.ginibre(n, n);
    const Matrix l = left_mult_matrix(b);
    const Matrix r = right_mult_matrix(b);
    CHECK(distance(l, kron(b, Matrix::Identity(n, n))) == 0.0);
    CHECK(distance(r, kron(Matrix::Identity(n, n), b.transpose())) == 0.0);

    // Action oracle in the canonical row-major coordinates.
    const Matrix x = rng.ginibre(n, n);
    CHECK((l * vec_row_major(x) - vec_row_major(b * x)).norm() < 1e-12);
    CHECK((r * vec_row_major(x) - vec_row_major(x * b)).norm() < 1e-12);

    // Left and right multiplications commute.
    const Matrix c = rng.ginibre(n, n);
    CHECK(distance(l * right_mult_matrix(c), right_mult_matrix(c) * l) < 1e-12);
  }
  CHECK(distance(left_mult_matrix(Matrix::Identity(2, 2)), Matrix::Identity(4, 4)) == 0.0);
  CHECK(distance(right_mult_matrix(Matrix::Identity(2, 2)), Matrix::Identity(4, 4)) == 0.0);

  // [T_q] = sum_k [L_{q_k}] [R_{q_k^*}].
  const Channel dep = depolarizing_pauli_channel();
  Matrix via_lr = Matrix::Zero(4, 4);
  for (const auto& q : dep.kraus())
    via_lr += left_mult_matrix(q.block(0)) * right_mult_matrix(q.block(0).adjoint());
  CHECK(distance(via_lr, representing_matrix(dep).matrix) < 1e-12);
}

TEST_CASE("tensor swap and the conjugation") {
  const Matrix s = swap_matrix(2);
  Matrix expected(4, 4);
  expected << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1;
  CHECK(distance(s, expected) == 0.0);
  CHECK(distance(s * s, Matrix::Identity(4, 4)) == 0.0);

  // S is the representing matrix of the transpose map.
  const MatrixAlgebra m3 = MatrixAlgebra::full(3);
  const Matrix t_transpose = representing_matrix_of_map(m3, [&](const AlgebraElement& x) {
    return AlgebraElement(m3, {x.block(0).transpose().eval()});
  });
  CHECK(distance(t_transpose, swap_matrix(3)) < 1e-12);

  Rng rng(7);
  for (Index n : {2, 3}) {
    const Matrix a = rng.ginibre(n, n);
    const Vector va = vec_row_major(a);
    CHECK((conjugation_apply(n, va) - vec_row_major(a.adjoint())).norm() < 1e-12);
    CHECK((conjugation_apply(n, conjugation_apply(n, va)) - va).norm() < 1e-12);
  }
}

TEST_CASE("conjugation commutes with representing contractions") {
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    const Channel q = haar_block_channel(2, 2, rng);
    CHECK(conjugation_commutant_residual(representing_matrix(q).matrix) < 1e-10);
  }
  // The transpose map commutes as well (necessary, not sufficient).
  CHECK(conjugation_commutant_residual(swap_matrix(2)) < 1e-12);

  // X -> i X sigma_z is linear but not *-preserving.
  const Matrix bad = Complex(0, 1) * right_mult_matrix(pauli_z());
  CHECK(conjugation_commutant_residual(bad) > 0.1);
}

TEST_CASE("classification matches the channel-level predicates") {
  Rng rng(11);
  SUBCASE("automorphisms are unitary") {
    const auto cls = classify_channel(automorphism_channel(pauli_x()));
    CHECK(cls.cls == ContractionClass::Unitary);
    CHECK(cls.multiplicative);
    CHECK(cls.predicate_agrees);

    const auto haar_cls = classify_channel(automorphism_channel(rng.haar_unitary(2)));
    CHECK(haar_cls.cls == ContractionClass::Unitary);
    CHECK(haar_cls.predicate_agrees);
  }
  SUBCASE("depolarizing and dephasing are projections") {
    const auto dep = classify_channel(depolarizing_pauli_channel());
    CHECK(dep.cls == ContractionClass::Projection);
    CHECK(dep.idempotent);
    CHECK(dep.self_dual);
    CHECK(dep.predicate_agrees);

    const auto deph = classify_channel(dephasing_channel(2));
    CHECK(deph.cls == ContractionClass::Projection);
    CHECK(deph.predicate_agrees);
  }
  SUBCASE("embed-compose-expectation is a partial isometry") {
    const auto cyc = classify_channel(diagonal_cycle_channel(2));
    CHECK(cyc.cls == ContractionClass::PartialIsometry);
    CHECK(cyc.restricted_multiplicative);
    CHECK(cyc.predicate_agrees);

    const auto cyc3 = classify_channel(diagonal_cycle_channel(3));
    CHECK(cyc3.cls == ContractionClass::PartialIsometry);
    CHECK(cyc3.predicate_agrees);
  }
  SUBCASE("generic channels fall through") {
    const auto cls = classify_channel(haar_block_channel(2, 2, rng));
    CHECK(cls.cls == ContractionClass::GenericContraction);
    CHECK(cls.predicate_agrees);
  }
}

TEST_CASE("isometric-contractive split") {
  SUBCASE("unitaries keep everything") {
    Rng rng(13);
    const Matrix u = rng.haar_unitary(4);
    const SplitParts parts = isometric_split(u);
    CHECK(distance(parts.isometric, u) < 1e-12);
    CHECK(parts.strict.norm() < 1e-12);
    CHECK(parts.rank_one_dim == 4);
  }
  SUBCASE("projections are their own isometric part") {
    const Matrix t = representing_matrix(depolarizing_pauli_channel()).matrix;
    const SplitParts parts = isometric_split(t);
    CHECK(distance(parts.isometric, t) < 1e-12);
    CHECK(parts.strict.norm() < 1e-12);
    CHECK(parts.rank_one_dim == 1);
  }
  SUBCASE("a half-depolarizing mixture splits in two") {
    // Kraus {I/sqrt(2)} u {sigma_i / (2 sqrt(2))}: T = (I + T_dep) / 2.
    const MatrixAlgebra m2 = MatrixAlgebra::full(2);
    std::vector<AlgebraElement> kraus;
    kraus.emplace_back(m2, std::vector<Matrix>{Matrix::Identity(2, 2) / std::sqrt(2.0)});
    for (const auto& s : pauli_set())
      kraus.emplace_back(m2, std::vector<Matrix>{s / (2.0 * std::sqrt(2.0))});
    const Channel mixed(m2, std::move(kraus));

    const Matrix t = representing_matrix(mixed).matrix;
    const SplitParts parts = isometric_split(t);
    CHECK(parts.rank_one_dim == 1);
    CHECK(distance(parts.isometric, representing_matrix(depolarizing_pauli_channel()).matrix) <
          1e-12);
    Eigen::JacobiSVD<Matrix> svd(parts.strict);
    CHECK(svd.singularValues().maxCoeff() == doctest::Approx(0.5));

    // Support conditions: ran C in ran V^perp, ker C^perp in ker V.
    CHECK((parts.isometric.adjoint() * parts.strict).norm() < 1e-12);
    CHECK((parts.isometric * parts.strict.adjoint()).norm() < 1e-12);
    // V*V is a projection.
    const Matrix vv = parts.isometric.adjoint() * parts.isometric;
    CHECK(distance(vv * vv, vv) < 1e-12);
  }
}

TEST_CASE("singular values in the ambiguous band raise the gap warning") {
  Vector d(4);
  d << 1.0, 1.0 - 1e-7, 0.5, 0.1;
  const SplitParts parts = isometric_split(Matrix(d.asDiagonal()));
  CHECK(parts.gap_warning);
  CHECK(parts.rank_one_dim == 1);

  Vector clean(4);
  clean << 1.0, 0.9, 0.5, 0.1;
  CHECK_FALSE(isometric_split(Matrix(clean.asDiagonal())).gap_warning);
}

TEST_CASE("multiplicative domains: spectral and direct routes") {
  Rng rng(17);
  SUBCASE("automorphism: everything") {
    const auto mult = multiplicative_domain(automorphism_channel(rng.haar_unitary(2)));
    CHECK(mult.dim == 4);
    CHECK(mult.spectral_dim == 4);
  }
  SUBCASE("depolarizing: scalars only") {
    const auto mult = multiplicative_domain(depolarizing_pauli_channel());
    CHECK(mult.dim == 1);
    CHECK(mult.subspace_angle < 1e-6);
    CHECK(mult.closure_residual < 1e-10);
  }
  SUBCASE("dephasing: the diagonal subalgebra") {
    const auto mult = multiplicative_domain(dephasing_channel(2));
    CHECK(mult.dim == 2);
  }
  SUBCASE("uniform I/sigma_z mixture dephases, multiplicative domain diagonal") {
    const auto fact = random_unitary_channel({Matrix::Identity(2, 2), pauli_z()}, {0.5, 0.5});
    const auto mult = multiplicative_domain(fact.channel);
    CHECK(mult.dim == 2);
  }
}

TEST_CASE("stable multiplicative domains") {
  Rng rng(19);
  SUBCASE("automorphism stays full") {
    const auto rep = stable_multiplicative_domain(automorphism_channel(rng.haar_unitary(2)));
    CHECK(rep.dim == 4);
    CHECK(rep.converged);
    CHECK(rep.stabilized_at == 1);
    CHECK(rep.closed_form_agrees);
  }
  SUBCASE("depolarizing collapses to scalars immediately") {
    const auto rep = stable_multiplicative_domain(depolarizing_pauli_channel());
    CHECK(rep.dim == 1);
    CHECK(rep.converged);
    CHECK(rep.closed_form_agrees);
  }
  SUBCASE("I/sigma_z mixture stabilizes on the diagonal subalgebra") {
    const auto fact = random_unitary_channel({Matrix::Identity(2, 2), pauli_z()}, {0.5, 0.5});
    const auto rep = stable_multiplicative_domain(fact.channel);
    CHECK(rep.dim == 2);
    CHECK(rep.converged);
    CHECK(rep.stabilized_at <= fact.channel.domain().gns_dim());
    CHECK(rep.closed_form_agrees);
  }
}

TEST_CASE("defect indices") {
  Rng rng(23);
  CHECK(defect_indices(rng.haar_unitary(4)) == std::pair<Index, Index>{0, 0});
  CHECK(defect_indices(representing_matrix(depolarizing_pauli_channel()).matrix) ==
        std::pair<Index, Index>{3, 3});
  CHECK(defect_indices(representing_matrix(dephasing_channel(2)).matrix) ==
        std::pair<Index, Index>{2, 2});
}

TEST_CASE("kernels and co-kernels are self-adjoint") {
  const auto dep = kernel_selfadjointness_check(depolarizing_pauli_channel());
  CHECK(dep.kernel_dim == 3);
  CHECK(dep.pass);

  Rng rng(29);
  const auto autom = kernel_selfadjointness_check(automorphism_channel(rng.haar_unitary(2)));
  CHECK(autom.kernel_dim == 0);
  CHECK(autom.pass);

  const auto generic = kernel_selfadjointness_check(haar_block_channel(2, 2, rng));
  CHECK(generic.pass);
}

TEST_CASE("monoid structure of representing matrices") {
  Rng rng(31);
  const Channel q1 = haar_block_channel(2, 2, rng);
  const Channel q2 = haar_block_channel(2, 2, rng);
  const Matrix t1 = representing_matrix(q1).matrix;
  const Matrix t2 = representing_matrix(q2).matrix;

  CHECK(distance(representing_matrix(compose(q2, q1)).matrix, t2 * t1) < 1e-10);
  CHECK(distance(representing_matrix(dual(q1)).matrix, t1.adjoint()) < 1e-10);

  Eigen::JacobiSVD<Matrix> svd(t1);
  CHECK(svd.singularValues().maxCoeff() <= 1.0 + tol::contraction_slack);

  // The identity is a fixed vector of T and T*.
  const Vector vi = gns_coordinates(AlgebraElement::identity(q1.domain()));
  CHECK((t1 * vi - vi).norm() < 1e-10);
  CHECK((t1.adjoint() * vi - vi).norm() < 1e-10);

  // Convex mixtures of channels mix representing matrices linearly.
  const double lambda = 0.3;
  std::vector<AlgebraElement> kraus;
  for (const auto& k : q1.kraus()) kraus.push_back(std::sqrt(lambda) * k);
  for (const auto& k : q2.kraus()) kraus.push_back(std::sqrt(1.0 - lambda) * k);
  const Channel mixture(q1.domain(), std::move(kraus));
  CHECK(distance(representing_matrix(mixture).matrix, lambda * t1 + (1.0 - lambda) * t2) <
        1e-10);
}

TEST_CASE("representing matrices on direct-sum algebras") {
  // A channel on M_2 (+) C that swaps nothing but mixes the M_2 block: use
  // the dephasing of the first block embedded blockwise.
  const MatrixAlgebra a = make_algebra({{2, 0.5}, {1, 0.5}});
  std::vector<AlgebraElement> kraus;
  for (Index i = 0; i < 2; ++i) {
    AlgebraElement k = AlgebraElement::zero(a);
    k.block(0)(i, i) = 1.0;
    k.block(1)(0, 0) = (i == 0) ? 1.0 : 0.0;
    kraus.push_back(std::move(k));
  }
  const Channel q(a, std::move(kraus));
  const RepContraction rep = representing_matrix(q);
  CHECK(rep.matrix.rows() == a.gns_dim());
  Eigen::JacobiSVD<Matrix> svd(rep.matrix);
  CHECK(svd.singularValues().maxCoeff() <= 1.0 + tol::contraction_slack);
  const Vector vi = gns_coordinates(AlgebraElement::identity(a));
  CHECK((rep.matrix * vi - vi).norm() < 1e-10);
}
