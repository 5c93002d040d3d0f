#ifndef QDILATE_DILATION_HPP
#define QDILATE_DILATION_HPP

#include "qdilate/factorization.hpp"

namespace qdilate {

// The dilation automorphism on system (x) environment^(x N): a cyclic shift
// of the environment slots followed by conjugation with U (x) I. All
// concrete matrices live in the tensor coordinates
// C^{d_A} (x) (C^{d_B})^(x N).
struct NDilation {
  UnitaryFactorization base;
  Index steps = 0;                     // N
  MatrixAlgebra big_algebra;           // system (x) environment^(x N)
  std::vector<MatrixAlgebra> factors;  // {system, environment, ..., environment}
  Index dim = 0;                       // d_A * d_B^N
  Matrix big_unitary;                  // U (x) I in tensor coordinates
  std::vector<Index> shift;            // index permutation implementing the slot shift
  RealVector env_density;              // diagonal of rho_B^(x N)
};

NDilation build_n_dilation(const UnitaryFactorization& fact, Index steps,
                           Index dimension_cap = default_dimension_cap);

// One application of the automorphism: relabel coordinates by the shift
// permutation, then conjugate by the big unitary.
Matrix apply_alpha_concrete(const NDilation& dil, Matrix x, Index m);
AlgebraElement apply_alpha(const NDilation& dil, const AlgebraElement& x, Index m);

// Cyclic slot shift alone (as the same index relabeling).
Matrix shift_concrete(const NDilation& dil, const Matrix& x);

// Conditional expectation onto system (x) I, one-shot weighted partial trace.
Matrix phi_n_concrete(const NDilation& dil, const Matrix& x);
// Same map evaluated by N nested single-slot partial traces.
Matrix phi_n_nested_concrete(const NDilation& dil, const Matrix& x);
AlgebraElement phi_n(const NDilation& dil, const AlgebraElement& x);

// Partial trace over all environment slots, returning the system part.
Matrix trace_out_environment(const NDilation& dil, const Matrix& x);

struct NDilationReport {
  Index steps = 0;
  double max_residual = 0.0;
  Index worst_unit = 0;
  Index worst_power = 1;
  double tolerance = 0.0;
  bool pass = false;
};

// For every system matrix unit A and every 1 <= M <= N, compares
// Phi_N(alpha^(M)(A (x) I)) against q^(M)(A) (x) I in Frobenius norm.
NDilationReport verify_n_dilation(const NDilation& dil);

// Residual of ptr o (q (x) id) = q o ptr on random elements of the tensor
// algebra.
double commute_identity_check(const MatrixAlgebra& environment, const Channel& q, Rng& rng,
                              int trials = 50);

}  // namespace qdilate

#endif  // QDILATE_DILATION_HPP
