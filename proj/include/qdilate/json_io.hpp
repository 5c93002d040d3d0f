#ifndef QDILATE_JSON_IO_HPP
#define QDILATE_JSON_IO_HPP

#include <json.hpp>

#include "qdilate/factorization.hpp"
#include "qdilate/gns.hpp"

namespace qdilate {

using nlohmann::json;

// Matrices serialize as nested arrays of [re, im] pairs, row-major.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// {"blocks": [{"dim": n, "weight": w}, ...]}
json algebra_to_json(const MatrixAlgebra& a);
MatrixAlgebra algebra_from_json(const json& j);

// Elements as per-block arrays of matrices. A bare matrix is accepted on
// input and gathered onto the block structure.
json element_to_json(const AlgebraElement& x);
AlgebraElement element_from_json(const MatrixAlgebra& a, const json& j);

// {"algebra": ..., "kraus": [...]}
json channel_to_json(const Channel& ch);
Channel channel_from_json(const json& j);

// {"system": ..., "environment": ..., "unitary": ..., "kraus": [...]}
json factorization_to_json(const UnitaryFactorization& fact);

// Representing matrix with its basis metadata.
json rep_contraction_to_json(const RepContraction& rep);

}  // namespace qdilate

#endif  // QDILATE_JSON_IO_HPP
