#pragma once

#include "qcflab/iteration.hpp"

namespace qcflab {

enum class OpNormMethod { matrix_pnorm, conjugate_bracket, gen_eig, similarity_transform };
std::string to_string(OpNormMethod method);

// Operator norm with a two-sided bracket. Exact methods collapse the bracket
// onto the value; the conjugate route reports the full-space conjugate norm
// with the factor-1/2 lower end.
struct OpNormResult {
  double value = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  OpNormMethod method = OpNormMethod::matrix_pnorm;
  NormKind kind;
};

// G = I - alpha P^{-1} L^qcf with its provenance, so norm routes can exploit
// the preconditioner structure.
struct IterationMatrix {
  ModelParams params;
  PreconditionerKind precond;
  double alpha = 0.0;
  Matrix m;
};

IterationMatrix iteration_matrix(const ModelParams& params, PreconditionerKind precond, double alpha);

OpNormResult opnorm(const IterationMatrix& g, const NormKind& kind);

// ||L^qcf||_{L(U^{1,p}, U^{-1,p})}: exact for p = 2 through the L1^{-1/2}
// similarity; bracketed through the conjugate of L1^{-1} L^qcf otherwise.
OpNormResult qcf_dual_opnorm(const ModelParams& params, P p);

// ||(L^qcf)^{-1}||_{L(U^{0,inf}, U^{2,inf})} = ||L1 (L^qcf)^{-1}||_inf.
double inv_qcf_02inf_to_2inf(const ModelParams& params);

enum class KRule { sqrt_rule, fixed, quarter };

struct SweepSpec {
  std::vector<NormKind> kinds;
  std::vector<int> Ns;
  KRule k_rule = KRule::sqrt_rule;
  int fixed_K = 0;            // used by KRule::fixed
  double af_ratio = 0.8;      // A_F / phi''_F, with phi''_F = 1
  PreconditionerKind precond = PreconditionerKind::qce;
  std::optional<double> alpha;          // fixed step size, if set
  StepRule alpha_rule = StepRule::gfc_unit;
};

struct SweepCell {
  int N = 0;
  int K = 0;
  NormKind kind;
  double value = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  OpNormMethod method = OpNormMethod::matrix_pnorm;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<std::pair<NormKind, double>> slopes;  // log-log fit, smallest N excluded
};

int sweep_k_for(const SweepSpec& spec, int N);
SweepResult scaling_sweep(const SweepSpec& spec);

}  // namespace qcflab
