#include "qcflab/opnorms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace qcflab {

std::string to_string(OpNormMethod method) {
  switch (method) {
    case OpNormMethod::matrix_pnorm: return "MATRIX_PNORM";
    case OpNormMethod::conjugate_bracket: return "CONJUGATE_BRACKET";
    case OpNormMethod::gen_eig: return "GEN_EIG";
    case OpNormMethod::similarity_transform: return "SIMILARITY_TRANSFORM";
  }
  return "?";
}

namespace {

// X = L^qcf L1^{-1} via one columnwise tridiagonal solve layer:
// X^T = L1^{-1} (L^qcf)^T.
Matrix qcf_times_inv_laplacian(const ModelParams& params) {
  const Matrix qcf = assemble(params, OperatorKind::qcf).m;
  const int n = params.dofs();
  Matrix xt(n, n);
  Vector col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = qcf(j, i);  // row j of L^qcf
    const Vector x = solve_laplacian(params, col);
    for (int i = 0; i < n; ++i) xt(i, j) = x[i];
  }
  return transpose(xt);
}

// L1 G L1^{-1} assembled by solves; for the QCL preconditioner this
// simplifies to I - (alpha/A_F) L^qcf L1^{-1}, which avoids stacking two
// solve layers.
Matrix laplacian_conjugated(const IterationMatrix& g) {
  const ModelParams& p = g.params;
  const int n = p.dofs();
  if (g.precond == PreconditionerKind::qcl) {
    Matrix c = qcf_times_inv_laplacian(p);
    const double s = g.alpha / p.a_F();
    for (double& v : c.data()) v *= -s;
    for (int i = 0; i < n; ++i) c(i, i) += 1.0;
    return c;
  }
  // General path: Y = G L1^{-1} columnwise, then C = L1 Y.
  Matrix yt(n, n);
  Vector col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = g.m(j, i);
    const Vector x = solve_laplacian(p, col);
    for (int i = 0; i < n; ++i) yt(i, j) = x[i];
  }
  const Matrix y = transpose(yt);
  Matrix c(n, n);
  const double w2 = static_cast<double>(p.N) * p.N;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 2.0 * y(i, j);
      if (i > 0) s -= y(i - 1, j);
      if (i + 1 < n) s -= y(i + 1, j);
      c(i, j) = w2 * s;
    }
  return c;
}

// Conjugate of G on strain vectors: the identity part is kept as the strain
// identity and only the update term is pushed through the columnwise
// conjugate, matching the way the norm computation treats G = I - alpha C.
Matrix strain_conjugate_of_iteration(const IterationMatrix& g) {
  const ModelParams& p = g.params;
  const int n = p.dofs();
  Matrix update = g.m;  // alpha * P^{-1} L^qcf = I - G
  for (double& v : update.data()) v = -v;
  for (int i = 0; i < n; ++i) update(i, i) += 1.0;
  Matrix conj = strain_conjugate_of(p, update);
  for (double& v : conj.data()) v = -v;
  for (int i = 0; i < conj.rows(); ++i) conj(i, i) += 1.0;
  return conj;
}

double largest_gen_eig_u12(const ModelParams& params, const Matrix& g) {
  const int n = params.dofs();
  if (n <= 600) {
    const Matrix lap = assemble(params, OperatorKind::laplacian).m;
    Matrix a = matmul(transpose(g), matmul(lap, g));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double s = 0.5 * (a(i, j) + a(j, i));
        a(i, j) = a(j, i) = s;
      }
    const EigenDecomposition e = gen_sym_eigen(a, lap);
    return e.eigenvalues.back();
  }
  // Large systems: power iteration on L1^{-1} G^T L1 G, whose spectrum is the
  // generalized one; each apply costs two dense matvecs and one solve.
  auto apply = [&](const Vector& v) {
    Vector w = matvec(g, v);
    w = apply_laplacian(params, w);
    w = matvec_transposed(g, w);
    return solve_laplacian(params, w);
  };
  const PowerResult r = power_largest_eigenvalue(n, apply, 1e-10, 20000);
  if (!r.converged) fail(Errc::no_convergence, "U^{1,2} norm: power iteration stalled");
  return r.value;
}

}  // namespace

IterationMatrix iteration_matrix(const ModelParams& params, PreconditionerKind precond, double alpha) {
  const int n = params.dofs();
  const Matrix qcf = assemble(params, OperatorKind::qcf).m;
  Matrix m(n, n);
  switch (precond) {
    case PreconditionerKind::identity:
      m = qcf;
      for (double& v : m.data()) v *= -alpha;
      break;
    case PreconditionerKind::qcl: {
      const double s = alpha / params.a_F();
      Vector col(n);
      Matrix xt(n, n);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[i] = qcf(i, j);
        const Vector x = solve_laplacian(params, col);
        for (int i = 0; i < n; ++i) xt(j, i) = x[i];
      }
      m = transpose(xt);
      for (double& v : m.data()) v *= -s;
      break;
    }
    case PreconditionerKind::qce: {
      std::unique_ptr<LuFactorization> lu;
      try {
        lu = std::make_unique<LuFactorization>(assemble(params, OperatorKind::qce).m);
      } catch (const Error&) {
        fail(Errc::singular_preconditioner, "iteration_matrix: QCE preconditioner is singular");
      }
      Vector col(n);
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[i] = qcf(i, j);
        const Vector x = lu->solve(col);
        for (int i = 0; i < n; ++i) m(i, j) = -alpha * x[i];
      }
      break;
    }
  }
  for (int i = 0; i < n; ++i) m(i, i) += 1.0;
  return {params, precond, alpha, std::move(m)};
}

OpNormResult opnorm(const IterationMatrix& g, const NormKind& kind) {
  OpNormResult out;
  out.kind = kind;
  if (kind.k == 0) {
    out.value = matrix_pnorm(g.m, kind.p);
    out.method = OpNormMethod::matrix_pnorm;
    out.bracket_low = out.bracket_high = out.value;
    return out;
  }
  if (kind.k == 2) {
    const Matrix c = laplacian_conjugated(g);
    out.value = matrix_pnorm(c, kind.p);
    out.method = OpNormMethod::matrix_pnorm;
    out.bracket_low = out.bracket_high = out.value;
    return out;
  }
  if (kind.p == P::two) {
    out.value = std::sqrt(std::max(0.0, largest_gen_eig_u12(g.params, g.m)));
    out.method = OpNormMethod::gen_eig;
    out.bracket_low = out.bracket_high = out.value;
    return out;
  }
  const Matrix conj = strain_conjugate_of_iteration(g);
  out.value = matrix_pnorm(conj, kind.p);
  out.method = OpNormMethod::conjugate_bracket;
  out.bracket_low = 0.5 * out.value;
  out.bracket_high = out.value;
  return out;
}

OpNormResult qcf_dual_opnorm(const ModelParams& params, P p) {
  OpNormResult out;
  out.kind = NormKind{1, p};
  if (p == P::two) {
    const LaplacianSpectralFactors f(params);
    const Matrix qcf = assemble(params, OperatorKind::qcf).m;
    const int n = params.dofs();
    auto apply = [&](const Vector& v) {
      Vector w = f.apply_inv_sqrt(v);
      w = matvec(qcf, w);
      w = f.apply_inv_sqrt(w);
      // second factor: transpose of the (symmetric) sandwich applied again
      Vector z = f.apply_inv_sqrt(w);
      z = matvec_transposed(qcf, z);
      return f.apply_inv_sqrt(z);
    };
    const PowerResult r = power_largest_eigenvalue(n, apply, 1e-10, 20000);
    if (!r.converged) fail(Errc::no_convergence, "qcf_dual_opnorm: power iteration stalled");
    out.value = std::sqrt(std::max(0.0, r.value));
    out.method = OpNormMethod::similarity_transform;
    out.bracket_low = out.bracket_high = out.value;
    return out;
  }
  const StrainOperator conj =
      conjugate_strain_operator(params, ConjugateKind::qcf_precon_laplacian);
  out.value = matrix_pnorm(conj.m, p);
  out.method = OpNormMethod::conjugate_bracket;
  out.bracket_low = 0.5 * out.value;
  out.bracket_high = out.value;
  return out;
}

double inv_qcf_02inf_to_2inf(const ModelParams& params) {
  if (!(params.a_F() > 0.0)) fail(Errc::singular, "inv_qcf_02inf_to_2inf: A_F must be positive");
  const ModelParams& p = params;
  const int n = p.dofs();
  const Matrix qcf = assemble(p, OperatorKind::qcf).m;
  const LuFactorization lu(transpose(qcf));
  // L1 (L^qcf)^{-1} row-wise: row i equals (L^qcf)^{-T} applied to L1 e_i.
  Matrix m(n, n);
  Vector rhs(n, 0.0);
  const double w2 = static_cast<double>(p.N) * p.N;
  for (int i = 0; i < n; ++i) {
    std::fill(rhs.begin(), rhs.end(), 0.0);
    rhs[i] = 2.0 * w2;
    if (i > 0) rhs[i - 1] = -w2;
    if (i + 1 < n) rhs[i + 1] = -w2;
    const Vector row = lu.solve(rhs);
    for (int j = 0; j < n; ++j) m(i, j) = row[j];
  }
  return matrix_pnorm(m, P::inf);
}

int sweep_k_for(const SweepSpec& spec, int N) {
  switch (spec.k_rule) {
    case KRule::sqrt_rule: return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(N)))) - 1;
    case KRule::fixed: return spec.fixed_K;
    case KRule::quarter: return N / 4;
  }
  return spec.fixed_K;
}

SweepResult scaling_sweep(const SweepSpec& spec) {
  SweepResult result;
  for (int N : spec.Ns) {
    const int K = sweep_k_for(spec, N);
    ModelParams params;
    IterationMatrix g;
    bool have_g = false;
    std::string build_error;
    try {
      params = make_params(N, K, 1.0, (spec.af_ratio - 1.0) / 4.0);
      const double alpha = spec.alpha ? *spec.alpha : step_size(params, spec.alpha_rule);
      g = iteration_matrix(params, spec.precond, alpha);
      have_g = true;
    } catch (const Error& e) {
      build_error = e.what();
    }
    for (const NormKind& kind : spec.kinds) {
      SweepCell cell;
      cell.N = N;
      cell.K = K;
      cell.kind = kind;
      if (!have_g) {
        cell.failed = true;
        cell.error = build_error;
      } else {
        try {
          const OpNormResult r = opnorm(g, kind);
          cell.value = r.value;
          cell.bracket_low = r.bracket_low;
          cell.bracket_high = r.bracket_high;
          cell.method = r.method;
        } catch (const Error& e) {
          cell.failed = true;
          cell.error = e.what();
        }
      }
      result.cells.push_back(std::move(cell));
    }
  }

  // Least-squares slope per kind on (ln N, ln value); the smallest N in each
  // sweep is pre-asymptotic and excluded from the fit.
  const int n_min = *std::min_element(spec.Ns.begin(), spec.Ns.end());
  for (const NormKind& kind : spec.kinds) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const SweepCell& cell : result.cells) {
      if (cell.kind != kind || cell.failed || cell.N == n_min || cell.value <= 0.0) continue;
      const double x = std::log(static_cast<double>(cell.N));
      const double y = std::log(cell.value);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++count;
    }
    if (count >= 2) {
      const double denom = count * sxx - sx * sx;
      result.slopes.emplace_back(kind, (count * sxy - sx * sy) / denom);
    }
  }
  return result;
}

}  // namespace qcflab
