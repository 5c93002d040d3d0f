#ifndef QDILATE_GNS_HPP
#define QDILATE_GNS_HPP

#include <optional>
#include <vector>

#include "qdilate/channel.hpp"

namespace qdilate {

// Matrix of a channel on L^2(A). Coordinates are the matrix units in the
// module ordering (blocks in order, row-major within a block), scaled to
// unit GNS norm; for a single full block this coincides with the canonical
// row-major basis, where [T_q] = sum_k q_k (x) conj(q_k).
struct RepContraction {
  MatrixAlgebra algebra;
  Matrix matrix;
};

// Coordinates of an element in the orthonormal GNS basis, and back.
Vector gns_coordinates(const AlgebraElement& x);
AlgebraElement from_gns_coordinates(const MatrixAlgebra& a, const Vector& v);

// General construction: column-by-column evaluation of the channel on the
// orthonormal basis.
RepContraction representing_matrix(const Channel& ch);

// Matrix of an arbitrary linear map given by its action, same basis.
Matrix representing_matrix_of_map(const MatrixAlgebra& a,
                                  const std::function<AlgebraElement(const AlgebraElement&)>& action);

// Kronecker formula sum_k q_k (x) conj(q_k); domain must be a single full block.
Matrix representing_matrix_kron(const Channel& ch);

// Left/right multiplication operators on L^2 of a full block:
// [L_B] = B (x) I and [R_B] = I (x) B^T in the canonical row-major basis.
Matrix left_mult_matrix(const Matrix& b);
Matrix right_mult_matrix(const Matrix& b);

// Tensor swap on C^n (x) C^n; equals the representing matrix of the
// transpose map.
Matrix swap_matrix(Index n);

// The conjugation C = swap o entrywise-conjugation (anti-linear, applied
// as an action rather than stored as a matrix).
Vector conjugation_apply(Index n, const Vector& v);

// Residual of C T = T C for T on L^2(C^{n x n}); zero iff q(X*) = q(X)*.
double conjugation_commutant_residual(const Matrix& t);

enum class ContractionClass { Unitary, Projection, PartialIsometry, GenericContraction };

const char* to_string(ContractionClass c);

ContractionClass classify(const Matrix& t);

struct ChannelClassification {
  ContractionClass cls = ContractionClass::GenericContraction;
  // Channel-level predicates evaluated independently of the spectrum.
  bool multiplicative = false;        // q(XY) = q(X)q(Y) on basis pairs
  bool idempotent = false;            // q o q = q (Choi comparison)
  bool self_dual = false;             // q = q-dagger (Choi comparison)
  bool restricted_multiplicative = false;  // q = (q|_Mult) o Phi_Mult, multiplicative there
  bool predicate_agrees = false;
};

ChannelClassification classify_channel(const Channel& ch);

struct SplitParts {
  Matrix isometric;           // partial isometry V from the sigma = 1 triples
  Matrix strict;              // T - V, norm < 1
  Matrix unit_singular_basis; // right singular vectors with sigma = 1, as columns
  Index rank_one_dim = 0;
  bool gap_warning = false;   // some sigma in the ambiguous band
};

// Unique decomposition T = V + C with V a partial isometry and C a strict
// contraction supported on the complement.
SplitParts isometric_split(const Matrix& t);

struct MultiplicativeDomain {
  Matrix basis;             // orthonormal columns spanning Mult(q) in GNS coordinates
  Index dim = 0;
  Index spectral_dim = 0;   // dimension of ker V^perp from the split
  double subspace_angle = 0.0;
  double closure_residual = 0.0;  // closure under products and adjoints
};

// Two routes: the kernel of the Schwarz-defect form I - T*T (direct, the
// authority) and the sigma = 1 right singular space (spectral); throws
// MISMATCH if they disagree.
MultiplicativeDomain multiplicative_domain(const Channel& ch);

struct StableDomainReport {
  Matrix basis;
  Index dim = 0;
  Index stabilized_at = 1;   // smallest power after which the intersection is constant
  bool converged = false;
  Index closed_form_dim = 0; // dim(ker V^perp intersect ran V)
  double closed_form_angle = 0.0;
  bool closed_form_agrees = false;
};

// Iterative intersection of Mult(q^(k)); also reports the closed-form
// candidate ker V^perp intersect ran V without failing on disagreement.
StableDomainReport stable_multiplicative_domain(const Channel& ch, Index max_power = -1);

// (dim ker V, dim ran V^perp); equal in finite dimension.
std::pair<Index, Index> defect_indices(const Matrix& t);

struct KernelSelfAdjointness {
  Index kernel_dim = 0;
  double kernel_residual = 0.0;
  double cokernel_residual = 0.0;
  bool pass = false;
};

// The kernel and co-kernel of a representing contraction are closed under
// the adjoint.
KernelSelfAdjointness kernel_selfadjointness_check(const Channel& ch);

// Columns of an orthonormal basis for the span of the given vectors
// (singular vectors above the relative cutoff).
Matrix orthonormal_span(const Matrix& vectors, double rel_cutoff = tol::rank_relative);

// Largest principal angle between two subspaces given by orthonormal columns.
double subspace_angle(const Matrix& p, const Matrix& q);

// Orthonormal basis of the intersection of two subspaces.
Matrix subspace_intersection(const Matrix& p, const Matrix& q);

}  // namespace qdilate

#endif  // QDILATE_GNS_HPP
