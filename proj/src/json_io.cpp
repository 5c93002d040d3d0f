#include "qdilate/json_io.hpp"

namespace qdilate {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw ValidationError("CONFIG_ERROR", "matrix must be a non-empty array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<size_t>(i));
    if (static_cast<Index>(row.size()) != cols)
      throw ValidationError("CONFIG_ERROR", "ragged matrix rows");
    for (Index c = 0; c < cols; ++c) {
      const json& entry = row.at(static_cast<size_t>(c));
      if (!entry.is_array() || entry.size() != 2)
        throw ValidationError("CONFIG_ERROR", "matrix entries must be [re, im] pairs");
      m(i, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

json algebra_to_json(const MatrixAlgebra& a) {
  json blocks = json::array();
  for (Index i = 0; i < a.num_blocks(); ++i)
    blocks.push_back({{"dim", a.block(i).dim}, {"weight", a.block(i).weight}});
  return {{"blocks", std::move(blocks)}};
}

MatrixAlgebra algebra_from_json(const json& j) {
  if (!j.contains("blocks"))
    throw ValidationError("CONFIG_ERROR", "algebra needs a \"blocks\" array");
  std::vector<AlgebraBlock> blocks;
  for (const auto& b : j.at("blocks"))
    blocks.push_back({b.at("dim").get<Index>(), b.at("weight").get<double>()});
  return MatrixAlgebra(std::move(blocks));
}

json element_to_json(const AlgebraElement& x) {
  json blocks = json::array();
  for (Index i = 0; i < x.algebra().num_blocks(); ++i) blocks.push_back(matrix_to_json(x.block(i)));
  return blocks;
}

namespace {

bool looks_like_bare_matrix(const json& j) {
  // A matrix bottoms out in numbers at depth 3 ([row][col][re/im]); an
  // element list adds one more level.
  return j.is_array() && !j.empty() && j.at(0).is_array() && !j.at(0).empty() &&
         j.at(0).at(0).is_array() && !j.at(0).at(0).empty() && j.at(0).at(0).at(0).is_number();
}

}  // namespace

AlgebraElement element_from_json(const MatrixAlgebra& a, const json& j) {
  if (looks_like_bare_matrix(j)) {
    const Matrix m = matrix_from_json(j);
    double residual = 0.0;
    AlgebraElement x = AlgebraElement::from_concrete(a, m, &residual);
    if (residual > tol::matrix(a.concrete_dim()))
      throw ValidationError("CONFIG_ERROR", "matrix has entries outside the block structure");
    return x;
  }
  if (static_cast<Index>(j.size()) != a.num_blocks())
    throw ValidationError("CONFIG_ERROR", "element has wrong number of blocks");
  std::vector<Matrix> blocks;
  for (const auto& b : j) blocks.push_back(matrix_from_json(b));
  return AlgebraElement(a, std::move(blocks));
}

json channel_to_json(const Channel& ch) {
  json kraus = json::array();
  for (const auto& q : ch.kraus()) kraus.push_back(element_to_json(q));
  return {{"algebra", algebra_to_json(ch.domain())}, {"kraus", std::move(kraus)}};
}

Channel channel_from_json(const json& j) {
  const MatrixAlgebra domain = algebra_from_json(j.at("algebra"));
  std::vector<AlgebraElement> kraus;
  for (const auto& q : j.at("kraus")) kraus.push_back(element_from_json(domain, q));
  return Channel(domain, std::move(kraus));
}

json factorization_to_json(const UnitaryFactorization& fact) {
  json kraus = json::array();
  for (const auto& q : fact.channel.kraus()) kraus.push_back(element_to_json(q));
  return {{"system", algebra_to_json(fact.system)},
          {"environment", algebra_to_json(fact.environment)},
          {"unitary", element_to_json(fact.unitary)},
          {"kraus", std::move(kraus)}};
}

json rep_contraction_to_json(const RepContraction& rep) {
  return {{"basis", "canonical-row-major"},
          {"normalized", true},
          {"algebra", algebra_to_json(rep.algebra)},
          {"matrix", matrix_to_json(rep.matrix)}};
}

}  // namespace qdilate
