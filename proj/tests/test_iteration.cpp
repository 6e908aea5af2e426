#include <cmath>
#include <random>

#include "doctest.h"
#include "qcflab/experiments.hpp"
#include "qcflab/iteration.hpp"
#include "qcflab/opnorms.hpp"

using namespace qcflab;

TEST_CASE("step sizes") {
  const ModelParams half = make_params(16, 4, 1.0, -0.125);  // A_F = 0.5
  CHECK(step_size(half, StepRule::qcl_opt_2inf) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(step_size(half, StepRule::qcl_max_2inf) == doctest::Approx(1.0).epsilon(1e-14));

  const ModelParams fifth = make_params(16, 4, 1.0, -0.2);  // A_F = 0.2, the Fig. 2 ratio
  CHECK(step_size(fifth, StepRule::qcl_opt_2inf) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const ModelParams nn{16, 4, 1.0, 0.0};  // phi''_2F = 0: alpha_opt = 1, alpha_max = 2
  CHECK(step_size(nn, StepRule::qcl_opt_2inf) == doctest::Approx(1.0));
  CHECK(step_size(nn, StepRule::qcl_max_2inf) == doctest::Approx(2.0));
  CHECK(step_size(nn, StepRule::qcl_opt_1inf) == doctest::Approx(1.0));

  CHECK(step_size(half, StepRule::gfc_unit) == 1.0);

  // Richardson rules come from the l2 spectrum of L^qnl.
  const EigenDecomposition e = sym_eigen(assemble(half, OperatorKind::qnl).m);
  CHECK(step_size(half, StepRule::rich_max) ==
        doctest::Approx(2.0 / e.eigenvalues.back()).epsilon(1e-12));
  CHECK(step_size(half, StepRule::rich_opt) ==
        doctest::Approx(2.0 / (e.eigenvalues.front() + e.eigenvalues.back())).epsilon(1e-12));

  // U^{1,2} rules from the closed-form spectrum.
  const Vector mu = qnl_u12_spectrum(half);
  const double mu_max = *std::max_element(mu.begin(), mu.end());
  CHECK(step_size(half, StepRule::qcl_max_12) == doctest::Approx(2.0 * 0.5 / mu_max).epsilon(1e-13));

  // The breakpoint sits between the U^{2,inf} optimum and one.
  const double a1 = step_size(half, StepRule::qcl_opt_1inf);
  CHECK(a1 >= step_size(half, StepRule::qcl_opt_2inf) - 1e-14);
  CHECK(a1 <= 1.0 + 1e-14);

  ModelParams bad = half;
  bad.phi2_F = 0.5;
  bad.phi2_2F = -0.125;  // A_F = 0
  CHECK_THROWS_AS(step_size(bad, StepRule::qcl_opt_2inf), Error);
}

TEST_CASE("predicted rates") {
  const ModelParams p = make_params(16, 4, 1.0, -0.125);  // A_F/phi2_F = 0.5
  const double a_opt = step_size(p, StepRule::qcl_opt_2inf);
  CHECK(*predicted_rate(p, PreconditionerKind::qcl, a_opt, {2, P::inf}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(*predicted_rate(p, PreconditionerKind::qcl, 1e-300, {2, P::inf}) ==
        doctest::Approx(1.0));

  // (1,inf) optimum: 1 - (phi2_F + 8 phi2_2F) / (phi2_F + (2 - eps + 2 eps K) phi2_2F)
  const double a1 = step_size(p, StepRule::qcl_opt_1inf);
  const double eps = p.eps();
  const double expect =
      1.0 - (p.phi2_F + 8.0 * p.phi2_2F) / (p.phi2_F + (2.0 - eps + 2.0 * eps * p.K) * p.phi2_2F);
  CHECK(*predicted_rate(p, PreconditionerKind::qcl, a1, {1, P::inf}) ==
        doctest::Approx(expect).epsilon(1e-12));

  CHECK(!predicted_rate(p, PreconditionerKind::qcl, a_opt, {0, P::two}).has_value());
  CHECK(!predicted_rate(p, PreconditionerKind::qce, 1.0, {1, P::two}).has_value());
  CHECK(!predicted_rate(p, PreconditionerKind::identity, 0.1, {1, P::inf}).has_value());

  // U^{1,2} rate at its optimal step equals (mu_max - mu_min)/(mu_max + mu_min).
  const Vector mu = qnl_u12_spectrum(p);
  const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
  const double a12 = step_size(p, StepRule::qcl_opt_12);
  CHECK(*predicted_rate(p, PreconditionerKind::qcl, a12, {1, P::two}) ==
        doctest::Approx((*hi - *lo) / (*hi + *lo)).epsilon(1e-12));
}

TEST_CASE("run_iteration fixed point and convergence") {
  const ModelParams p = make_params(16, 4, 1.0, -0.125);
  const Displacement f = rhs_vector(p);
  const Matrix qcf = assemble(p, OperatorKind::qcf).m;
  const Displacement exact(p, lu_solve(qcf, f.values()));

  IterationControls controls;
  controls.max_iter = 50;
  const IterationTrace t =
      run_iteration(p, PreconditionerKind::qcl, 0.5, f, exact, controls);
  CHECK(t.verdict == Verdict::converged);
  CHECK(t.steps.size() == 1);
  CHECK(t.residual_norms[0][0] <= 1e-12);
}

TEST_CASE("run_iteration diverges beyond the Richardson stability limit") {
  const ModelParams p = make_params(16, 4, 1.0, -0.125);
  const double alpha = 1.05 * step_size(p, StepRule::rich_max);
  IterationControls controls;
  controls.max_iter = 5000;
  const IterationTrace t = run_iteration(p, PreconditionerKind::identity, alpha, rhs_vector(p),
                                         Displacement::zero(p), controls);
  CHECK(t.verdict == Verdict::diverged);
}

TEST_CASE("run_iteration rejects unusable inputs") {
  ModelParams singular = make_params(8, 2, 1.0, -0.125);
  singular.phi2_F = 0.5;  // A_F = 0
  CHECK_THROWS_AS(run_iteration(singular, PreconditionerKind::identity, 0.1,
                                Displacement::zero(singular), Displacement::zero(singular), {}),
                  Error);
  const ModelParams p = make_params(8, 2, 1.0, -0.125);
  CHECK_THROWS_AS(
      run_iteration(p, PreconditionerKind::qcl, 0.0, rhs_vector(p), Displacement::zero(p), {}),
      Error);
}

TEST_CASE("measured rate on synthetic traces") {
  IterationTrace t;
  t.kinds = {{0, P::two}};
  const double q = 0.8371;
  for (int n = 0; n < 40; ++n) {
    t.steps.push_back(n);
    t.residual_norms.push_back({0.0});
    t.error_norms.push_back({3.0 * std::pow(q, n)});
  }
  const MeasuredRate r = measured_rate(t, {0, P::two});
  CHECK(r.rate == doctest::Approx(q).epsilon(1e-12));
  CHECK(!r.nonmonotone);

  IterationTrace flat = t;
  for (auto& row : flat.error_norms) row[0] = 2.0;
  CHECK(measured_rate(flat, {0, P::two}).rate == doctest::Approx(1.0).epsilon(1e-12));

  IterationTrace shortt = t;
  shortt.steps.resize(10);
  shortt.error_norms.resize(10);
  shortt.residual_norms.resize(10);
  CHECK_THROWS_AS(measured_rate(shortt, {0, P::two}), Error);
}

TEST_CASE("error recursion matches the iteration matrix") {
  const ModelParams p = make_params(12, 3, 1.0, -0.125);
  IterationControls controls;
  controls.max_iter = 40;
  controls.tol = 0.0;
  controls.record_iterates = true;
  const double alpha = step_size(p, StepRule::qcl_opt_2inf);
  const IterationTrace t = run_iteration(p, PreconditionerKind::qcl, alpha, rhs_vector(p),
                                         Displacement::zero(p), controls);
  const IterationMatrix g = iteration_matrix(p, PreconditionerKind::qcl, alpha);
  // e is computed by subtraction from u*, and the residual feeding the next
  // step carries ~eps * ||L|| ||u|| of absolute noise; the 1e-10-relative
  // recursion check is meaningful while e stays above ~1e-4 ||u*||.
  const double floor = 1e-4 * norm_inf(t.reference);
  for (size_t n = 1; n < t.iterates.size(); ++n) {
    Vector prev(p.dofs()), cur(p.dofs());
    for (int i = 0; i < p.dofs(); ++i) {
      prev[i] = t.reference[i] - t.iterates[n - 1][i];
      cur[i] = t.reference[i] - t.iterates[n][i];
    }
    if (norm_inf(prev) <= floor) break;
    const Vector expect = matvec(g.m, prev);
    double diff = 0.0;
    for (int i = 0; i < p.dofs(); ++i) diff = std::max(diff, std::fabs(cur[i] - expect[i]));
    CHECK(diff <= 1e-10 * norm_inf(prev));
  }
}

TEST_CASE("contraction envelope in U^{2,inf}") {
  const ModelParams p = make_params(24, 6, 1.0, -0.125);
  const double a_max = step_size(p, StepRule::qcl_max_2inf);
  for (double alpha : {0.3 * a_max, 0.6 * a_max, 0.95 * a_max}) {
    IterationControls controls;
    controls.max_iter = 60;
    controls.tol = 0.0;
    const IterationTrace t = run_iteration(p, PreconditionerKind::qcl, alpha, rhs_vector(p),
                                           Displacement::zero(p), controls);
    const double q = *predicted_rate(p, PreconditionerKind::qcl, alpha, {2, P::inf});
    const size_t col = 3;  // (2,inf) is the fourth default column
    REQUIRE(t.kinds[col] == NormKind{2, P::inf});
    const double e0 = t.error_norms[0][col];
    // Four decades of decay; past that the reference-solve noise (~cond *
    // eps of the solution) is no longer negligible against the envelope.
    for (size_t n = 0; n < t.steps.size() && std::pow(q, n) > 1e-4; ++n)
      CHECK(t.error_norms[n][col] <= std::pow(q, n) * e0 * (1.0 + 1e-8));
  }
}

TEST_CASE("Richardson l2 error stays within the eigenbasis-conditioned envelope") {
  const ModelParams p = make_params(16, 4, 1.0, -0.125);
  const double alpha = step_size(p, StepRule::rich_opt);
  const double rho = *predicted_rate(p, PreconditionerKind::identity, alpha, {0, P::two});
  const double cond_v = qcf_eigenbasis_cond(p).cond_V;
  IterationControls controls;
  controls.max_iter = 200;
  controls.tol = 0.0;
  const IterationTrace t = run_iteration(p, PreconditionerKind::identity, alpha, rhs_vector(p),
                                         Displacement::zero(p), controls);
  const double e0 = t.error_norms[0][0];
  for (size_t n = 0; n < t.steps.size(); ++n)
    CHECK(t.error_norms[n][0] <= cond_v * std::pow(rho, n) * e0 * (1.0 + 1e-8));
}

TEST_CASE("measured U^{1,2} rate stays below the predicted one") {
  const ModelParams p = make_params(100, 8, 1.0, -0.2);
  const double alpha = step_size(p, StepRule::qcl_opt_2inf);
  IterationControls controls;
  controls.max_iter = 60;  // (2/3)^60 ~ 3e-11 keeps the tail above roundoff
  controls.tol = 0.0;
  const IterationTrace t = run_iteration(p, PreconditionerKind::qcl, alpha, rhs_vector(p),
                                         Displacement::zero(p), controls);
  const double measured = measured_rate(t, {1, P::two}).rate;
  const double predicted = *predicted_rate(p, PreconditionerKind::qcl, alpha, {1, P::two});
  CHECK(measured <= predicted + 0.02);
}

TEST_CASE("trace CSV shape") {
  const ModelParams p = make_params(8, 2, 1.0, -0.125);
  IterationControls controls;
  controls.max_iter = 3;
  controls.tol = 0.0;
  controls.norms = {{0, P::one}};
  const IterationTrace t = run_iteration(p, PreconditionerKind::qcl, 0.5, rhs_vector(p),
                                         Displacement::zero(p), controls);
  const std::string csv = trace_to_csv(t);
  CHECK(csv.rfind("n,res_0_2,res_1_2,res_1_inf,res_2_inf,res_0_1,"
                  "err_0_2,err_1_2,err_1_inf,err_2_inf,err_0_1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 steps
}
