#include "qcflab/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "qcflab/io.hpp"

namespace qcflab {

std::string to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::identity: return "id";
    case PreconditionerKind::qcl: return "qcl";
    case PreconditionerKind::qce: return "qce";
  }
  return "?";
}

PreconditionerKind parse_preconditioner(std::string_view text) {
  if (text == "id" || text == "identity") return PreconditionerKind::identity;
  if (text == "qcl") return PreconditionerKind::qcl;
  if (text == "qce") return PreconditionerKind::qce;
  fail(Errc::invalid_kind, "unknown preconditioner");
}

std::string to_string(StepRule rule) {
  switch (rule) {
    case StepRule::rich_max: return "rich-max";
    case StepRule::rich_opt: return "rich-opt";
    case StepRule::qcl_opt_2inf: return "qcl-opt-2inf";
    case StepRule::qcl_max_2inf: return "qcl-max-2inf";
    case StepRule::qcl_opt_1inf: return "qcl-opt-1inf";
    case StepRule::qcl_max_1inf: return "qcl-max-1inf";
    case StepRule::qcl_opt_12: return "qcl-opt-12";
    case StepRule::qcl_max_12: return "qcl-max-12";
    case StepRule::gfc_unit: return "gfc-unit";
  }
  return "?";
}

StepRule parse_step_rule(std::string_view text) {
  if (text == "rich-max") return StepRule::rich_max;
  if (text == "rich-opt") return StepRule::rich_opt;
  if (text == "qcl-opt-2inf") return StepRule::qcl_opt_2inf;
  if (text == "qcl-max-2inf") return StepRule::qcl_max_2inf;
  if (text == "qcl-opt-1inf") return StepRule::qcl_opt_1inf;
  if (text == "qcl-max-1inf") return StepRule::qcl_max_1inf;
  if (text == "qcl-opt-12") return StepRule::qcl_opt_12;
  if (text == "qcl-max-12") return StepRule::qcl_max_12;
  if (text == "gfc-unit") return StepRule::gfc_unit;
  fail(Errc::invalid_kind, "unknown step rule");
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::converged: return "CONVERGED";
    case Verdict::diverged: return "DIVERGED";
    case Verdict::maxiter: return "MAXITER";
  }
  return "?";
}

double step_size(const ModelParams& params, StepRule rule) {
  if (rule == StepRule::gfc_unit) return 1.0;
  const double a_F = params.a_F();
  if (!(a_F > 0.0)) fail(Errc::unstable_params, "step_size: A_F must be positive");
  const double eps = params.eps();
  const double q = std::fabs(params.phi2_2F / a_F);
  switch (rule) {
    case StepRule::rich_max:
    case StepRule::rich_opt: {
      const EigenDecomposition e = sym_eigen(assemble(params, OperatorKind::qnl).m);
      const double lo = e.eigenvalues.front(), hi = e.eigenvalues.back();
      return rule == StepRule::rich_max ? 2.0 / hi : 2.0 / (lo + hi);
    }
    case StepRule::qcl_opt_2inf:
      return 2.0 * a_F / (params.phi2_F + a_F);
    case StepRule::qcl_max_2inf:
      return 2.0 * a_F / params.phi2_F;
    case StepRule::qcl_opt_1inf:
      return 1.0 / (1.0 + (2.0 + eps - 2.0 * eps * params.K) * q);
    case StepRule::qcl_max_1inf:
      return 2.0 * a_F / (a_F + (8.0 + 2.0 * eps - 4.0 * eps * params.K) * std::fabs(params.phi2_2F));
    case StepRule::qcl_opt_12:
    case StepRule::qcl_max_12: {
      const Vector mu = qnl_u12_spectrum(params);
      const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
      return rule == StepRule::qcl_max_12 ? 2.0 * a_F / *hi : 2.0 * a_F / (*lo + *hi);
    }
    default:
      fail(Errc::invalid_kind, "step_size: rule not supported");
  }
}

std::optional<double> predicted_rate(const ModelParams& params, PreconditionerKind precond,
                                     double alpha, const NormKind& kind) {
  if (precond == PreconditionerKind::identity) {
    if (kind.k != 0 || kind.p != P::two) return std::nullopt;
    const EigenDecomposition e = sym_eigen(assemble(params, OperatorKind::qnl).m);
    double worst = 0.0;
    for (double lam : e.eigenvalues) worst = std::max(worst, std::fabs(1.0 - alpha * lam));
    return worst;
  }
  if (precond != PreconditionerKind::qcl) return std::nullopt;

  const double a_F = params.a_F();
  const double q = params.phi2_2F / a_F;
  if (kind.k == 2 && kind.p == P::inf)
    return std::fabs(1.0 - alpha * (1.0 - 2.0 * q)) + alpha * std::fabs(2.0 * q);
  if (kind.k == 1 && kind.p == P::inf) {
    const double breakpoint = step_size(params, StepRule::qcl_opt_1inf);
    const double eps = params.eps();
    if (alpha <= breakpoint) return std::fabs(1.0 - alpha) + 4.0 * alpha * std::fabs(q);
    return std::fabs(1.0 - alpha * (1.0 - 2.0 * q)) +
           alpha * (6.0 + 2.0 * eps - 4.0 * eps * params.K) * std::fabs(q);
  }
  if (kind.k == 1 && kind.p == P::two) {
    double worst = 0.0;
    for (double mu : qnl_u12_spectrum(params)) worst = std::max(worst, std::fabs(1.0 - alpha / a_F * mu));
    return worst;
  }
  return std::nullopt;
}

namespace {

std::vector<NormKind> trace_kinds(const IterationControls& controls) {
  std::vector<NormKind> kinds = {{0, P::two}, {1, P::two}, {1, P::inf}, {2, P::inf}};
  for (const NormKind& extra : controls.norms)
    if (std::find(kinds.begin(), kinds.end(), extra) == kinds.end()) kinds.push_back(extra);
  return kinds;
}

}  // namespace

IterationTrace run_iteration(const ModelParams& params, PreconditionerKind precond, double alpha,
                             const Displacement& f, const Displacement& u0,
                             const IterationControls& controls) {
  if (params.a_F() == 0.0)
    fail(Errc::unstable_params, "run_iteration: A_F = 0 makes the QCF operator singular");
  if (!(alpha > 0.0)) fail(Errc::reject, "run_iteration: alpha must be positive");

  const int n = params.dofs();
  const Matrix qcf = assemble(params, OperatorKind::qcf).m;

  const LuFactorization ref_lu(qcf);
  const Vector reference = ref_lu.solve(f.values());
  {
    Vector check = matvec(qcf, reference);
    double resid = 0.0;
    for (int i = 0; i < n; ++i) resid = std::max(resid, std::fabs(check[i] - f.values()[i]));
    if (resid > 1e-10 * std::max(1.0, norm_inf(f.values())))
      fail(Errc::singular, "run_iteration: reference solve residual too large");
  }

  // Stationary preconditioner: factored (or prepared) once per run.
  std::unique_ptr<LuFactorization> qce_lu;
  if (precond == PreconditionerKind::qce) {
    try {
      qce_lu = std::make_unique<LuFactorization>(assemble(params, OperatorKind::qce).m);
    } catch (const Error&) {
      fail(Errc::singular_preconditioner, "run_iteration: QCE preconditioner is singular");
    }
  }
  const double a_F = params.a_F();
  auto apply_precond_inverse = [&](const Vector& r) -> Vector {
    switch (precond) {
      case PreconditionerKind::identity:
        return r;
      case PreconditionerKind::qcl: {
        Vector x = solve_laplacian(params, r);
        for (double& v : x) v /= a_F;
        return x;
      }
      case PreconditionerKind::qce:
        return qce_lu->solve(r);
    }
    return r;
  };

  IterationTrace trace;
  trace.kinds = trace_kinds(controls);
  trace.precond = precond;
  trace.alpha = alpha;
  trace.reference = reference;

  const int stop_idx = static_cast<int>(
      std::find(trace.kinds.begin(), trace.kinds.end(), controls.stop_norm) - trace.kinds.begin());
  if (stop_idx == static_cast<int>(trace.kinds.size()))
    fail(Errc::invalid_kind, "run_iteration: stop norm must be among the recorded kinds");
  const double f_norm = vector_norm(params, f, controls.stop_norm);

  Vector u = u0.values();
  double initial_error = -1.0;
  trace.verdict = Verdict::maxiter;
  for (int step = 0; step <= controls.max_iter; ++step) {
    const Vector lu_of_u = matvec(qcf, u);
    Vector r(n), e(n);
    for (int i = 0; i < n; ++i) {
      r[i] = f.values()[i] - lu_of_u[i];
      e[i] = reference[i] - u[i];
    }
    Vector res_norms(trace.kinds.size()), err_norms(trace.kinds.size());
    for (size_t k = 0; k < trace.kinds.size(); ++k) {
      res_norms[k] = vector_norm(params, r, trace.kinds[k]);
      err_norms[k] = vector_norm(params, e, trace.kinds[k]);
    }
    trace.steps.push_back(step);
    trace.residual_norms.push_back(res_norms);
    trace.error_norms.push_back(err_norms);
    if (controls.record_iterates) trace.iterates.push_back(u);

    if (initial_error < 0.0) initial_error = err_norms[stop_idx];
    if (res_norms[stop_idx] < controls.tol * f_norm) {
      trace.verdict = Verdict::converged;
      break;
    }
    if (initial_error > 0.0 && err_norms[stop_idx] > 1e12 * initial_error) {
      trace.verdict = Verdict::diverged;
      break;
    }
    if (step == controls.max_iter) break;

    const Vector d = apply_precond_inverse(r);
    for (int i = 0; i < n; ++i) u[i] += alpha * d[i];
  }
  return trace;
}

MeasuredRate measured_rate(const IterationTrace& trace, const NormKind& kind) {
  const auto it = std::find(trace.kinds.begin(), trace.kinds.end(), kind);
  if (it == trace.kinds.end())
    fail(Errc::insufficient_data, "measured_rate: norm kind was not recorded");
  const size_t col = it - trace.kinds.begin();
  const size_t steps = trace.steps.size();
  if (steps < 20) fail(Errc::insufficient_data, "measured_rate: needs at least 20 recorded steps");

  MeasuredRate out;
  const size_t last = steps - 1;
  const double head = trace.error_norms[last - 10][col];
  const double tail = trace.error_norms[last][col];
  if (head <= 0.0) fail(Errc::insufficient_data, "measured_rate: zero error in the window");
  for (size_t i = last - 9; i <= last; ++i) {
    const double prev = trace.error_norms[i - 1][col];
    const double cur = trace.error_norms[i][col];
    if (prev > 0.0 && cur > prev) out.nonmonotone = true;
  }
  out.rate = std::pow(tail / head, 0.1);
  return out;
}

std::string trace_to_csv(const IterationTrace& trace) {
  Table t;
  t.columns.push_back("n");
  for (const NormKind& k : trace.kinds) t.columns.push_back("res_" + std::to_string(k.k) + "_" + to_string(k.p));
  for (const NormKind& k : trace.kinds) t.columns.push_back("err_" + std::to_string(k.k) + "_" + to_string(k.p));
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    std::vector<Cell> row;
    row.emplace_back(static_cast<long long>(trace.steps[i]));
    for (double v : trace.residual_norms[i]) row.emplace_back(v);
    for (double v : trace.error_norms[i]) row.emplace_back(v);
    t.rows.push_back(std::move(row));
  }
  return to_csv(t);
}

}  // namespace qcflab
