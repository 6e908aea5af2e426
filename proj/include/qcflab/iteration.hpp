#pragma once

#include <optional>

#include "qcflab/spectral.hpp"

namespace qcflab {

enum class PreconditionerKind { identity, qcl, qce };

std::string to_string(PreconditionerKind kind);
PreconditionerKind parse_preconditioner(std::string_view text);

enum class StepRule {
  rich_max,
  rich_opt,
  qcl_opt_2inf,
  qcl_max_2inf,
  qcl_opt_1inf,
  qcl_max_1inf,
  qcl_opt_12,
  qcl_max_12,
  gfc_unit,
};

std::string to_string(StepRule rule);
StepRule parse_step_rule(std::string_view text);

// Closed-form step sizes. The Richardson rules diagonalize L^qnl; the QCL
// rules are the optimal/maximal choices in U^{2,inf}, U^{1,inf} and U^{1,2}.
double step_size(const ModelParams& params, StepRule rule);

// Closed-form contraction rates where the theory provides one; nullopt for
// every other (preconditioner, norm) combination.
std::optional<double> predicted_rate(const ModelParams& params, PreconditionerKind precond,
                                     double alpha, const NormKind& kind);

enum class Verdict { converged, diverged, maxiter };
std::string to_string(Verdict verdict);

struct IterationControls {
  int max_iter = 500;
  double tol = 1e-10;
  std::vector<NormKind> norms;          // extra norms beyond the four defaults
  NormKind stop_norm{0, P::two};
  bool record_iterates = false;         // keep u^(n) snapshots (tests only)
};

// Per-step residual/error norms of the stationary iteration. Residuals are
// recomputed from f - L^qcf u^(n) at every step, never accumulated.
struct IterationTrace {
  std::vector<NormKind> kinds;
  std::vector<int> steps;
  std::vector<Vector> residual_norms;  // one row per step, indexed like kinds
  std::vector<Vector> error_norms;
  std::vector<Vector> iterates;        // only when record_iterates is set
  PreconditionerKind precond;
  double alpha = 0.0;
  Verdict verdict = Verdict::maxiter;
  Vector reference;  // dense-LU solution of the QCF system
};

IterationTrace run_iteration(const ModelParams& params, PreconditionerKind precond, double alpha,
                             const Displacement& f, const Displacement& u0,
                             const IterationControls& controls);

struct MeasuredRate {
  double rate = 0.0;
  bool nonmonotone = false;
};

// Geometric-mean ratio of the last 10 error-norm ratios; needs >= 20 steps.
MeasuredRate measured_rate(const IterationTrace& trace, const NormKind& kind);

std::string trace_to_csv(const IterationTrace& trace);

}  // namespace qcflab
