#include "qdilate/dilation.hpp"

namespace qdilate {

namespace {

Matrix permute_conjugate(const Matrix& x, const std::vector<Index>& perm) {
  const Index d = x.rows();
  Matrix out(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      out(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]) = x(i, j);
  return out;
}

}  // namespace

NDilation build_n_dilation(const UnitaryFactorization& fact, Index steps, Index dimension_cap) {
  if (steps < 1) throw ValidationError("INVALID_ARGUMENT", "need at least one step");
  const Index da = fact.system.concrete_dim();
  const Index db = fact.environment.concrete_dim();
  Index dim = da;
  for (Index k = 0; k < steps; ++k) {
    dim *= db;
    if (dim > dimension_cap)
      throw ValidationError("DIMENSION_CAP_EXCEEDED",
                            "concrete dimension exceeds cap " + std::to_string(dimension_cap));
  }

  std::vector<MatrixAlgebra> factors;
  factors.push_back(fact.system);
  for (Index k = 0; k < steps; ++k) factors.push_back(fact.environment);
  MatrixAlgebra big = fact.system;
  for (Index k = 0; k < steps; ++k) big = tensor_algebra(big, fact.environment);

  NDilation dil{fact, steps, std::move(big), std::move(factors), dim, {}, {}, {}};

  const Matrix u2 = tensor_concrete({fact.system, fact.environment}, fact.unitary);
  Index tail = 1;
  for (Index k = 1; k < steps; ++k) tail *= db;
  dil.big_unitary = kron(u2, Matrix::Identity(tail, tail));

  // Coordinate relabeling for the cyclic slot shift: digits (a, b_1..b_N)
  // map to (a, b_N, b_1..b_{N-1}), sending slot s content to slot s+1.
  dil.shift.resize(static_cast<size_t>(dim));
  const Index env_total = dim / da;
  for (Index i = 0; i < dim; ++i) {
    const Index a = i / env_total;
    Index rem = i % env_total;
    const Index last = rem % db;            // digit b_N
    const Index leading = rem / db;         // digits b_1..b_{N-1}
    dil.shift[static_cast<size_t>(i)] = a * env_total + last * (env_total / db) + leading;
  }

  const RealVector rho_env = TraceDensity::of(fact.environment).diagonal();
  dil.env_density = RealVector::Ones(1);
  for (Index k = 0; k < steps; ++k) {
    RealVector next(dil.env_density.size() * db);
    for (Index i = 0; i < dil.env_density.size(); ++i)
      next.segment(i * db, db) = dil.env_density(i) * rho_env;
    dil.env_density = next;
  }
  return dil;
}

Matrix shift_concrete(const NDilation& dil, const Matrix& x) {
  return permute_conjugate(x, dil.shift);
}

Matrix apply_alpha_concrete(const NDilation& dil, Matrix x, Index m) {
  if (m < 0) throw ValidationError("INVALID_ARGUMENT", "power must be >= 0");
  for (Index k = 0; k < m; ++k)
    x = dil.big_unitary * permute_conjugate(x, dil.shift) * dil.big_unitary.adjoint();
  return x;
}

AlgebraElement apply_alpha(const NDilation& dil, const AlgebraElement& x, Index m) {
  const Matrix out = apply_alpha_concrete(dil, tensor_concrete(dil.factors, x), m);
  return from_tensor_concrete(dil.factors, out);
}

Matrix trace_out_environment(const NDilation& dil, const Matrix& x) {
  const Index da = dil.factors.front().concrete_dim();
  const Index env_total = dil.dim / da;
  Matrix out = Matrix::Zero(da, da);
  for (Index p = 0; p < da; ++p)
    for (Index q = 0; q < da; ++q) {
      Complex s = 0.0;
      for (Index b = 0; b < env_total; ++b)
        s += dil.env_density(b) * x(p * env_total + b, q * env_total + b);
      out(p, q) = s;
    }
  return out;
}

Matrix phi_n_concrete(const NDilation& dil, const Matrix& x) {
  const Index env_total = dil.dim / dil.factors.front().concrete_dim();
  return kron(trace_out_environment(dil, x), Matrix::Identity(env_total, env_total));
}

Matrix phi_n_nested_concrete(const NDilation& dil, const Matrix& x) {
  // Trace out the first environment slot N times; each pass contracts the
  // slot right after the system factor.
  const Index da = dil.factors.front().concrete_dim();
  const Index db = dil.base.environment.concrete_dim();
  const RealVector rho = TraceDensity::of(dil.base.environment).diagonal();

  Matrix cur = x;
  for (Index step = 0; step < dil.steps; ++step) {
    const Index rows = cur.rows();
    const Index tail = rows / (da * db);  // remaining environment slots
    Matrix next = Matrix::Zero(rows / db, rows / db);
    for (Index p = 0; p < rows / db; ++p) {
      const Index pa = p / tail, pt = p % tail;
      for (Index q = 0; q < rows / db; ++q) {
        const Index qa = q / tail, qt = q % tail;
        Complex s = 0.0;
        for (Index b = 0; b < db; ++b)
          s += rho(b) * cur((pa * db + b) * tail + pt, (qa * db + b) * tail + qt);
        next(p, q) = s;
      }
    }
    cur = next;
  }
  const Index env_total = dil.dim / da;
  return kron(cur, Matrix::Identity(env_total, env_total));
}

AlgebraElement phi_n(const NDilation& dil, const AlgebraElement& x) {
  const Matrix out = phi_n_concrete(dil, tensor_concrete(dil.factors, x));
  return from_tensor_concrete(dil.factors, out);
}

NDilationReport verify_n_dilation(const NDilation& dil) {
  NDilationReport report;
  report.steps = dil.steps;
  report.tolerance = tol::matrix(dil.dim);

  const Index da = dil.factors.front().concrete_dim();
  const Index env_total = dil.dim / da;
  const Matrix env_identity = Matrix::Identity(env_total, env_total);
  const auto units = matrix_units(dil.base.system);

  for (size_t k = 0; k < units.size(); ++k) {
    Matrix evolved = kron(units[k].concrete(), env_identity);
    AlgebraElement compressed = units[k];
    for (Index m = 1; m <= dil.steps; ++m) {
      evolved = apply_alpha_concrete(dil, std::move(evolved), 1);
      compressed = apply(dil.base.channel, compressed);
      const double r =
          (phi_n_concrete(dil, evolved) - kron(compressed.concrete(), env_identity)).norm();
      if (r > report.max_residual) {
        report.max_residual = r;
        report.worst_unit = static_cast<Index>(k);
        report.worst_power = m;
      }
    }
  }
  report.pass = report.max_residual <= report.tolerance;
  return report;
}

double commute_identity_check(const MatrixAlgebra& environment, const Channel& q, Rng& rng,
                              int trials) {
  const MatrixAlgebra& a = q.domain();
  const MatrixAlgebra product = tensor_algebra(a, environment);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const AlgebraElement x = random_element(product, rng);

    // (q (x) id)(x), blockwise Kraus application on the first factor.
    AlgebraElement mapped = AlgebraElement::zero(product);
    for (const auto& kraus : q.kraus())
      for (Index i = 0; i < a.num_blocks(); ++i)
        for (Index j = 0; j < environment.num_blocks(); ++j) {
          const Index blk = i * environment.num_blocks() + j;
          const Matrix big_kraus =
              kron(kraus.block(i), Matrix::Identity(environment.block(j).dim,
                                                    environment.block(j).dim));
          mapped.block(blk) += big_kraus * x.block(blk) * big_kraus.adjoint();
        }

    const AlgebraElement lhs = partial_trace(a, environment, mapped);
    const AlgebraElement rhs = apply(q, partial_trace(a, environment, x));
    worst = std::max(worst, (lhs - rhs).frobenius_norm());
  }
  return worst;
}

}  // namespace qdilate
