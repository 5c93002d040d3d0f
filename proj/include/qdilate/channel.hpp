#ifndef QDILATE_CHANNEL_HPP
#define QDILATE_CHANNEL_HPP

#include <functional>
#include <optional>
#include <vector>

#include "qdilate/algebra.hpp"

namespace qdilate {

struct ChannelValidation {
  double unital_residual = 0.0;   // |sum q_k q_k* - I|
  double tp_residual = 0.0;       // |sum q_k* q_k - I|
  double choi_min_eigenvalue = 0.0;
  bool unital = false;
  bool trace_preserving = false;
  bool completely_positive = false;

  bool ok() const { return unital && trace_preserving && completely_positive; }
};

// A unital quantum channel in Kraus form. Construction validates all three
// of unital / trace-preserving / completely positive and throws
// ValidationError (UNITAL_VIOLATION, TP_VIOLATION, CP_VIOLATION) otherwise.
class Channel {
 public:
  Channel(MatrixAlgebra domain, std::vector<AlgebraElement> kraus);

  const MatrixAlgebra& domain() const { return domain_; }
  const std::vector<AlgebraElement>& kraus() const { return kraus_; }
  Index kraus_count() const { return static_cast<Index>(kraus_.size()); }
  const ChannelValidation& validation() const { return validation_; }

 private:
  MatrixAlgebra domain_;
  std::vector<AlgebraElement> kraus_;
  ChannelValidation validation_;
};

ChannelValidation validate_kraus(const MatrixAlgebra& domain,
                                 const std::vector<AlgebraElement>& kraus);

inline Channel make_channel(MatrixAlgebra domain, std::vector<AlgebraElement> kraus) {
  return Channel(std::move(domain), std::move(kraus));
}

AlgebraElement apply(const Channel& ch, const AlgebraElement& x);
AlgebraElement apply_power(const Channel& ch, const AlgebraElement& x, Index m);

// Tracial dual, Kraus set {q_k*}.
Channel dual(const Channel& ch);

// Kraus products {q2_j q1_k}, reduced to a minimal set.
Channel compose(const Channel& second, const Channel& first);

// Choi matrix sum_ij E_ij (x) action(E_ij) of a linear map on C^{d x d}.
Matrix choi_of_linear_map(Index d, const std::function<Matrix(const Matrix&)>& action);

// Choi matrix of the channel on its enveloping d x d embedding; the
// canonical channel fingerprint.
Matrix choi_matrix(const Channel& ch);

inline double choi_residual(const Channel& a, const Channel& b) {
  return (choi_matrix(a) - choi_matrix(b)).norm();
}

// Two channels are equal iff their Choi matrices agree within tolerance.
bool same_channel(const Channel& a, const Channel& b);

// Kraus set of size rank(Choi) implementing the same channel.
Channel minimal_kraus(const Channel& ch);

struct KrausEquivalence {
  bool equivalent = false;
  Matrix mixing;                // m x m with m = max(p, p'), unitary when equivalent
  double choi_residual = 0.0;
  double unitarity_residual = 0.0;
  double mapping_residual = 0.0;  // |W . stack(set1) - stack(set2)|
};

// Unitary mixing matrix between two Kraus sets of the same channel,
// least squares on the trace-Gram system; NOT_EQUIVALENT (equivalent=false,
// with the Choi residual) when the channels differ.
KrausEquivalence kraus_equivalence(const MatrixAlgebra& domain,
                                   const std::vector<AlgebraElement>& set1,
                                   const std::vector<AlgebraElement>& set2);

// The transpose map on C^{n x n}; the canonical non-completely-positive
// fixture (a linear map, not a Channel).
Matrix apply_transpose_map(const Matrix& x);
Matrix transpose_map_choi(Index n);

}  // namespace qdilate

#endif  // QDILATE_CHANNEL_HPP
