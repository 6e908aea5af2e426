#include "qcflab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"

namespace qcflab {

Displacement rhs_vector(const ModelParams& params) {
  const double pi = std::numbers::pi;
  Vector f(params.dofs());
  for (int j = -params.N + 1; j <= params.N - 1; ++j) {
    const double x = j * params.eps();
    const double h = x >= 0.0 ? 1.0 : -1.0;
    f[j + params.N - 1] = h * std::cos(3.0 * pi * x);
  }
  return Displacement(params, std::move(f));
}

namespace {

FigureOutput figure1() {
  FigureOutput out;
  out.table.columns = {"K", "n", "err_0_2", "err_0_2_normalized"};
  out.summary.columns = {"K", "alpha", "measured_rate_0_2", "predicted_rate_0_2"};
  const NormKind l2{0, P::two};
  for (int K : {8, 32}) {
    const ModelParams params = make_params(200, K, 1.0, -0.125);
    const double alpha = step_size(params, StepRule::rich_opt);
    IterationControls controls;
    controls.max_iter = 500;
    controls.tol = 0.0;  // run the full history
    const IterationTrace trace = run_iteration(params, PreconditionerKind::identity, alpha,
                                               rhs_vector(params), Displacement::zero(params), controls);
    const double e0 = trace.error_norms.front()[0];
    for (size_t i = 0; i < trace.steps.size(); ++i) {
      const double e = trace.error_norms[i][0];
      out.table.rows.push_back(
          {static_cast<long long>(K), static_cast<long long>(trace.steps[i]), e, e / e0});
    }
    out.summary.rows.push_back({static_cast<long long>(K), alpha,
                                measured_rate(trace, l2).rate,
                                *predicted_rate(params, PreconditionerKind::identity, alpha, l2)});
  }
  return out;
}

FigureOutput figure2() {
  FigureOutput out;
  const ModelParams params = make_params(800, 32, 1.0, -0.2);
  const double alpha = step_size(params, StepRule::qcl_opt_2inf);
  IterationControls controls;
  controls.max_iter = 500;
  controls.tol = 1e-10;
  const IterationTrace trace = run_iteration(params, PreconditionerKind::qcl, alpha,
                                             rhs_vector(params), Displacement::zero(params), controls);
  const NormKind kinds[] = {{1, P::two}, {1, P::inf}, {2, P::inf}};
  out.table.columns = {"n", "err_1_2", "err_1_inf", "err_2_inf"};
  auto col = [&](const NormKind& k) {
    return std::find(trace.kinds.begin(), trace.kinds.end(), k) - trace.kinds.begin();
  };
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    std::vector<Cell> row{static_cast<long long>(trace.steps[i])};
    for (const NormKind& k : kinds) row.emplace_back(trace.error_norms[i][col(k)]);
    out.table.rows.push_back(std::move(row));
  }
  out.summary.columns = {"alpha", "predicted_rate_2_inf", "measured_rate_1_2", "measured_rate_1_inf",
                         "measured_rate_2_inf"};
  out.summary.rows.push_back({alpha, *predicted_rate(params, PreconditionerKind::qcl, alpha, {2, P::inf}),
                              measured_rate(trace, {1, P::two}).rate,
                              measured_rate(trace, {1, P::inf}).rate,
                              measured_rate(trace, {2, P::inf}).rate});
  return out;
}

void append_sweep_rows(Table& table, const SweepResult& result) {
  for (const SweepCell& cell : result.cells) {
    table.rows.push_back({static_cast<long long>(cell.N), static_cast<long long>(cell.K),
                          static_cast<long long>(cell.kind.k), to_string(cell.kind.p),
                          cell.failed ? Cell{std::string("FAILED")} : Cell{cell.value},
                          cell.bracket_low, cell.bracket_high,
                          cell.failed ? Cell{cell.error} : Cell{to_string(cell.method)}});
  }
}

FigureOutput figure3() {
  SweepSpec spec;
  for (int k = 0; k <= 2; ++k)
    for (P p : {P::one, P::two, P::inf}) spec.kinds.push_back({k, p});
  spec.Ns = {64, 128, 256, 512, 1024};
  spec.k_rule = KRule::sqrt_rule;
  spec.af_ratio = 0.8;
  spec.precond = PreconditionerKind::qce;
  spec.alpha = 1.0;
  const SweepResult result = scaling_sweep(spec);

  FigureOutput out;
  out.table.columns = {"N", "K", "k", "p", "value", "bracket_low", "bracket_high", "method"};
  append_sweep_rows(out.table, result);
  out.summary.columns = {"k", "p", "slope"};
  for (const auto& [kind, slope] : result.slopes)
    out.summary.rows.push_back({static_cast<long long>(kind.k), to_string(kind.p), slope});
  return out;
}

FigureOutput figure4() {
  FigureOutput out;
  out.table.columns = {"a_F", "k", "p", "value", "bracket_low", "bracket_high", "method"};
  const NormKind kinds[] = {{1, P::inf}, {2, P::one}};
  double crossing = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i <= 60; ++i) {
    const double a_F = 0.05 + 0.0125 * i;
    const ModelParams params = make_params(256, 15, 1.0, (a_F - 1.0) / 4.0);
    std::optional<IterationMatrix> g;
    std::string build_error;
    try {
      g = iteration_matrix(params, PreconditionerKind::qce, 1.0);
    } catch (const Error& e) {
      build_error = e.what();
    }
    for (const NormKind& kind : kinds) {
      try {
        if (!g) fail(Errc::singular_preconditioner, build_error);
        const OpNormResult r = opnorm(*g, kind);
        out.table.rows.push_back({a_F, static_cast<long long>(kind.k), to_string(kind.p), r.value,
                                  r.bracket_low, r.bracket_high, to_string(r.method)});
        if (kind.k == 1 && kind.p == P::inf && r.bracket_low > 1.0) crossing = a_F;
      } catch (const Error& e) {
        out.table.rows.push_back({a_F, static_cast<long long>(kind.k), to_string(kind.p),
                                  std::string("FAILED"), 0.0, 0.0, std::string(e.what())});
      }
    }
  }
  out.summary.columns = {"crossing_a_F"};
  out.summary.rows.push_back({crossing});
  return out;
}

}  // namespace

FigureOutput figure(int n) {
  switch (n) {
    case 1: return figure1();
    case 2: return figure2();
    case 3: return figure3();
    case 4: return figure4();
    default: fail(Errc::invalid_kind, "figure: n must be 1..4");
  }
}

using nlohmann::json;

namespace {

template <typename T>
void set_if(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

template <typename T>
void set_if(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::reject, std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  set_if(j, "command", c.command);
  set_if(j, "n", c.n);
  set_if(j, "k", c.k);
  set_if(j, "phi2", c.phi2);
  set_if(j, "phi22", c.phi22);
  set_if(j, "af", c.af);
  set_if(j, "precond", c.precond);
  set_if(j, "alpha", c.alpha);
  set_if(j, "alpha_rule", c.alpha_rule);
  set_if(j, "norms", c.norms);
  set_if(j, "tol", c.tol);
  set_if(j, "max_iter", c.max_iter);
  set_if(j, "out", c.out);
  set_if(j, "format", c.format);
  set_if(j, "kind", c.kind);
  set_if(j, "potential", c.potential);
  set_if(j, "space", c.space);
  set_if(j, "n_list", c.n_list);
  set_if(j, "k_rule", c.k_rule);
  set_if(j, "fig", c.fig);
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  j["n"] = c.n;
  j["k"] = c.k;
  j["phi2"] = c.phi2;
  j["phi22"] = c.phi22 ? json(*c.phi22) : json(nullptr);
  j["af"] = c.af ? json(*c.af) : json(nullptr);
  j["precond"] = c.precond;
  j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
  j["alpha_rule"] = c.alpha_rule ? json(*c.alpha_rule) : json(nullptr);
  j["norms"] = c.norms;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["out"] = c.out;
  j["format"] = c.format;
  j["kind"] = c.kind;
  j["potential"] = c.potential;
  j["space"] = c.space;
  j["n_list"] = c.n_list;
  j["k_rule"] = c.k_rule;
  j["fig"] = c.fig;
  return j.dump(2) + "\n";
}

ModelParams params_from(const ExperimentConfig& c) {
  if (c.phi22 && c.af) fail(Errc::reject, "give either phi22 or af, not both");
  const double phi22 = c.phi22 ? *c.phi22 : (c.af ? (*c.af - c.phi2) / 4.0 : -0.125 * c.phi2);
  return make_params(c.n, c.k, c.phi2, phi22);
}

}  // namespace qcflab
