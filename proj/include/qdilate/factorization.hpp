#ifndef QDILATE_FACTORIZATION_HPP
#define QDILATE_FACTORIZATION_HPP

#include <optional>
#include <vector>

#include "qdilate/channel.hpp"

namespace qdilate {

// A unitary U in system (x) environment together with the channel it
// realizes by partial trace. environment_elements holds the b_k matched to
// the channel's Kraus operators, so that U = sum_k kraus_k (x) b_k exactly.
struct UnitaryFactorization {
  MatrixAlgebra system;
  MatrixAlgebra environment;
  AlgebraElement unitary;
  std::vector<AlgebraElement> environment_elements;
  Channel channel;
};

struct OneDilationReport {
  double kraus_residual = 0.0;          // partial trace of Ad_U vs channel, on units
  double expectation_residual = 0.0;    // Phi o Ad_U o Phi vs (q o ptr) (x) I
  double reconstruction_residual = 0.0; // |U - sum kraus_k (x) b_k|
  double max_residual = 0.0;
  Index worst_unit = 0;
  double tolerance = 0.0;
  bool pass = false;
};

OneDilationReport verify_one_dilation(const UnitaryFactorization& fact);

// Extracts Kraus operators from the coefficient blocks of a unitary in
// system (x) environment against a trace-orthogonal basis of the
// environment (matrix units for a full block, diagonal units otherwise).
UnitaryFactorization factorization_from_unitary(const AlgebraElement& u,
                                                const MatrixAlgebra& system,
                                                const MatrixAlgebra& environment);

// N-point DFT matrix, N = n*m, tiled into m^2 blocks of size n x n; the
// tiles (scaled) are the Kraus operators of a channel on C^{n x n}.
UnitaryFactorization dft_channel(Index n, Index m);

// Convenience: the N-point DFT matrix itself.
Matrix dft_matrix(Index n);

// q(X) = sum p_k U_k X U_k* with diagonal environment weighted by probs.
UnitaryFactorization random_unitary_channel(const std::vector<Matrix>& unitaries,
                                            const std::vector<double>& probs);

// Completely depolarizing channel on M_n, factored by the tensor swap.
UnitaryFactorization depolarizing_channel(Index n);

// PSD with unit diagonal; throws NOT_CORRELATION otherwise.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(Matrix c);
  const Matrix& matrix() const { return c_; }
  Index size() const { return c_.rows(); }
  bool is_real() const;

 private:
  Matrix c_;
};

// Schur product channel X -> X o C with diagonal Kraus operators from the
// eigendecomposition of C.
Channel schur_channel(const CorrelationMatrix& c);

struct RandomUnitaryMixture {
  std::vector<Matrix> unitaries;
  std::vector<double> probs;
};

// Rank-one certificate: C = vv* forces |v_i| = 1, so the channel is the
// single unitary D_v. Returns nullopt (UNKNOWN) for rank >= 2; general hull
// membership is not decided here.
std::optional<RandomUnitaryMixture> rank_one_hull_member(const CorrelationMatrix& c);

// p self-adjoint, pairwise anti-commuting, trace-orthonormal unitaries of
// dimension 2^ceil(p/2), Jordan-Wigner ordering.
std::vector<Matrix> clifford_generators(Index p);

// Factorization of a real-entried Schur product channel by anti-commuting
// self-adjoint unitaries u_j with tr(u_i u_j) = c_ij.
UnitaryFactorization real_correlation_factorization(const CorrelationMatrix& c);

}  // namespace qdilate

#endif  // QDILATE_FACTORIZATION_HPP
