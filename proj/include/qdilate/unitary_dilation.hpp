#ifndef QDILATE_UNITARY_DILATION_HPP
#define QDILATE_UNITARY_DILATION_HPP

#include "qdilate/dilation.hpp"
#include "qdilate/gns.hpp"

namespace qdilate {

// Positive square root of a Hermitian PSD matrix; eigenvalues within
// roundoff below zero are clamped.
Matrix hermitian_sqrt(const Matrix& h);

// Defect operators sqrt(I - T*T), sqrt(I - TT*).
Matrix defect_operator(const Matrix& t);
Matrix codefect_operator(const Matrix& t);

// The 2h x 2h block unitary [[T, -D_{T*}], [D_T, T*]]; throws
// NOT_CONTRACTION when |T| > 1.
Matrix julia(const Matrix& t);

struct ContractionDilation {
  Matrix contraction;  // h x h
  Index steps = 0;     // N
  Matrix unitary;      // (N+1)h x (N+1)h
  Index block_dim = 0; // h
};

// Block-companion unitary on H^{N+1}: first column (T, D_T, 0.., 0), last
// column (-D_{T*}, T*, 0.., 0), identity shift chain between. Reduces to
// the Julia operator at N = 1.
ContractionDilation egervary_n_dilation(const Matrix& t, Index steps);

struct CompressionReport {
  std::vector<double> residuals;    // |P U^k P - T^k| for k = 1..N+1
  double boundary_residual = 0.0;   // the k = N+1 entry
  double unitarity_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;                // compressions exact for k <= N
};

CompressionReport verify_compressions(const ContractionDilation& dil);

struct BridgeReport {
  Index steps = 0;
  Index gns_dim = 0;
  double unitary_residual = 0.0;    // T_alpha deviation from unitarity
  double max_residual = 0.0;        // worst |P T_alpha^M P - P T_{q (x) id}^M P|
  double tolerance = 0.0;
  bool pass = false;
};

// The representing matrix of the dilation automorphism is a unitary
// N-dilation of the channel's representing contraction: compressions of its
// powers by T_Phi match the representing matrix of q^(M) (x) id.
BridgeReport bridge_check(const NDilation& dil, Index dimension_cap = default_dimension_cap);

}  // namespace qdilate

#endif  // QDILATE_UNITARY_DILATION_HPP
