#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qcflab/spectral.hpp"

using namespace qcflab;

namespace {
Vector random_vector(int n, uint64_t seed) {
  std::mt19937_64 rng(0xfeedf00d5eedull ^ seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}
}  // namespace

TEST_CASE("spectral factors: closed-form eigenvalues and inverse pair") {
  const ModelParams tiny{2, 1, 1.0, 0.0};
  const LaplacianSpectralFactors f2(tiny);
  for (int j = 1; j <= 3; ++j)
    CHECK(f2.eigenvalues()[j - 1] ==
          doctest::Approx(16.0 * std::pow(std::sin(j * std::numbers::pi / 8.0), 2)).epsilon(1e-13));

  const ModelParams p = make_params(8, 2, 1.0, -0.125);
  const LaplacianSpectralFactors f(p);
  const Vector v = random_vector(p.dofs(), 1);
  const Vector roundtrip = f.apply_inv_sqrt(f.apply_sqrt(v));
  for (int i = 0; i < p.dofs(); ++i) CHECK(roundtrip[i] == doctest::Approx(v[i]).epsilon(1e-11));

  const Vector lap_v = apply_laplacian(p, v);
  const Vector sq = f.apply_sqrt(f.apply_sqrt(v));
  for (int i = 0; i < p.dofs(); ++i)
    CHECK(sq[i] == doctest::Approx(lap_v[i]).epsilon(1e-10).scale(norm_inf(lap_v)));

  const Vector zeros(p.dofs(), 0.0);
  for (double x : f.apply_sqrt(zeros)) CHECK(x == 0.0);
}

TEST_CASE("QNL U^{1,2} spectrum closed form") {
  const ModelParams nn{8, 2, 1.3, 0.0};
  for (double mu : qnl_u12_spectrum(nn)) CHECK(mu == doctest::Approx(1.3));

  const ModelParams p = make_params(4, 1, 1.0, -0.125);
  const Vector mu = qnl_u12_spectrum(p);
  CHECK(mu[0] == doctest::Approx(0.5 + 0.5 * std::pow(std::sin(std::numbers::pi / 8), 2)).epsilon(1e-9));
  CHECK(mu[0] == doctest::Approx(0.573223).epsilon(1e-5));
  CHECK(mu[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(mu[2] == doctest::Approx(0.926777).epsilon(1e-5));
  for (int j = 3; j < 7; ++j) CHECK(mu[j] == doctest::Approx(0.5));
}

TEST_CASE("QNL U^{1,2} spectrum matches the generalized eigensolve") {
  for (int N : {4, 8, 16}) {
    for (int K = 1; K <= N - 2; K += 2) {
      const ModelParams p = make_params(N, K, 1.0, -0.125);
      Vector mu = qnl_u12_spectrum(p);
      std::sort(mu.begin(), mu.end());
      const EigenDecomposition e = gen_sym_eigen(assemble(p, OperatorKind::qnl).m,
                                                 assemble(p, OperatorKind::laplacian).m);
      for (int i = 0; i < p.dofs(); ++i) CHECK(std::fabs(e.eigenvalues[i] - mu[i]) <= 1e-10);
    }
  }
}

TEST_CASE("QNL spectrum max/min ratio approaches phi2_F / A_F") {
  const double a_ratio = 0.5;  // A_F / phi2_F
  for (int K : {8, 16, 32}) {
    const ModelParams p = make_params(2 * K + 2, K, 1.0, (a_ratio - 1.0) / 4.0);
    const Vector mu = qnl_u12_spectrum(p);
    const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
    const double ratio = *hi / *lo;
    CHECK(std::fabs(ratio - 1.0 / a_ratio) <= 10.0 / (K * K));
  }
}

TEST_CASE("similarity identity between QCF and QNL") {
  const ModelParams nn{8, 2, 1.0, 0.0};
  CHECK(similarity_residual(nn) == 0.0);
  CHECK(similarity_residual(make_params(8, 2, 1.0, -0.125)) <= 1e-13);
  CHECK(similarity_residual(make_params(32, 8, 1.0, -0.125)) <= 1e-13);
  CHECK(similarity_residual(make_params(16, 14, 1.0, -0.2)) <= 1e-13);  // K = N-2 edge
  CHECK(similarity_residual(make_params(16, 1, 0.7, -0.05)) <= 1e-13);  // K = 1 edge
}

TEST_CASE("QCF eigenbasis conditioning") {
  const ModelParams nn{16, 4, 1.0, 0.0};
  const EigenbasisCond c0 = qcf_eigenbasis_cond(nn);
  CHECK(c0.cond_V == doctest::Approx(1.0).epsilon(1e-8));

  // cond_V stays bounded while cond_W grows ~ N^2.
  Vector cond_v, cond_w, logn;
  for (int N : {16, 32, 64}) {
    const ModelParams p = make_params(N, N / 4, 1.0, -0.125);
    const EigenbasisCond c = qcf_eigenbasis_cond(p);
    cond_v.push_back(c.cond_V);
    cond_w.push_back(c.cond_W);
    logn.push_back(std::log(static_cast<double>(N)));
  }
  const double vmax = *std::max_element(cond_v.begin(), cond_v.end());
  const double vmin = *std::min_element(cond_v.begin(), cond_v.end());
  CHECK(vmax / vmin <= 2.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < cond_w.size(); ++i) {
    sx += logn[i]; sy += std::log(cond_w[i]); sxx += logn[i] * logn[i]; sxy += logn[i] * std::log(cond_w[i]);
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  CHECK(std::fabs(slope - 2.0) <= 0.3);
}

TEST_CASE("stability constants") {
  SUBCASE("QNL infimum equals the continuum modulus") {
    for (int N : {8, 16}) {
      const ModelParams p = make_params(N, N / 4, 1.0, -0.2);
      const StabilityReport r = stability_constants(p, StabilityKind::qnl);
      CHECK(r.inf_u12 == doctest::Approx(p.a_F()).epsilon(1e-9));
      CHECK(!r.lambda_K.has_value());
      CHECK(r.nu_eps > 0.0);
    }
  }
  SUBCASE("QCE interface constant at K=15") {
    const ModelParams p = make_params(64, 15, 1.0, -0.125);
    const StabilityReport r = stability_constants(p, StabilityKind::qce);
    REQUIRE(r.lambda_K.has_value());
    CHECK(std::fabs(*r.lambda_K - 0.6595) <= 1e-3);
  }
  SUBCASE("symmetrized QCF is indefinite") {
    const ModelParams p = make_params(32, 8, 1.0, -0.125);
    const StabilityReport r = stability_constants(p, StabilityKind::qcf_sym);
    CHECK(r.inf_u12 < 0.0);
  }
}

TEST_CASE("interface constants from the quintic") {
  const InterfaceConstants c = lambda_star_constants();
  CHECK(std::fabs(c.z_hat - 2.206272296) <= 1e-8);
  CHECK(std::fabs(c.lambda_hat - 4.659525505897) <= 1e-9);
  CHECK(std::fabs(c.lambda_star - 0.6595) <= 1e-4);
  CHECK(std::fabs(c.c - 1.5826) <= 1e-4);
}

TEST_CASE("interface eigenvalue: direct matrix route") {
  const InterfaceConstants c = lambda_star_constants();
  CHECK(std::fabs((interface_eigen_direct(15) - 4.0) - c.lambda_star) <= 1e-6);
  for (int K = 1; K <= 20; ++K) {
    const double lam = interface_eigen_direct(K) - 4.0;
    CHECK(lam >= 0.5);
    CHECK(lam <= 1.0);
  }
  // |lambda_K - lambda_{K+1}| decays like e^{-cK}.
  for (int K = 6; K <= 12; ++K) {
    const double d1 = std::fabs(interface_eigen_direct(K) - interface_eigen_direct(K + 1));
    const double d2 = std::fabs(interface_eigen_direct(K + 1) - interface_eigen_direct(K + 2));
    CHECK(std::fabs(std::log(d2 / d1) + c.c) <= 0.1 * c.c);
  }
}

TEST_CASE("stability constants agree with the direct interface route") {
  for (int K : {2, 5, 8}) {
    const ModelParams p = make_params(K + 10, K, 1.0, -0.125);
    const StabilityReport r = stability_constants(p, StabilityKind::qce);
    REQUIRE(r.lambda_K.has_value());
    CHECK(std::fabs(*r.lambda_K - (interface_eigen_direct(K) - 4.0)) <= 1e-8);
  }
}

TEST_CASE("critical strain") {
  const double f_star = critical_strain(lennard_jones_potential());
  const double oracle =
      std::pow((156.0 + 624.0 * std::pow(2.0, -14.0)) / (84.0 + 336.0 * std::pow(2.0, -8.0)), 1.0 / 6.0);
  CHECK(std::fabs(f_star - oracle) <= 1e-10);

  const PotentialSpec constant{[](double) { return 1.0; }, 1.0};
  CHECK_THROWS_AS(critical_strain(constant), Error);

  const PotentialSpec unstable{[](double) { return -1.0; }, 1.0};
  CHECK_THROWS_AS(critical_strain(unstable), Error);
}

TEST_CASE("QNL l2 spectrum bounds") {
  // Upper bound: the next-nearest part of the QNL form is negative
  // semidefinite, so lambda_max <= phi2_F * lambda_max(L1) <= 4 phi2_F eps^-2.
  for (int N : {8, 16, 32}) {
    const ModelParams p = make_params(N, N / 4, 1.0, -0.125);
    const EigenDecomposition e = sym_eigen(assemble(p, OperatorKind::qnl).m);
    const double inv_eps2 = static_cast<double>(N) * N;
    CHECK(e.eigenvalues.front() >= 2.0 * p.a_F() - 1e-9);
    CHECK(e.eigenvalues.back() <= 4.0 * p.phi2_F * inv_eps2 * (1.0 + 1e-9));
    CHECK(e.eigenvalues.back() / e.eigenvalues.front() <=
          (2.0 * p.phi2_F / p.a_F()) * inv_eps2 * (1.0 + 1e-9));
  }
}

TEST_CASE("coefficient scaling leaves normalized quantities invariant") {
  const ModelParams p = make_params(12, 3, 1.0, -0.15);
  const double c = 2.75;
  const ModelParams scaled = make_params(12, 3, c * 1.0, c * -0.15);

  Vector mu1 = qnl_u12_spectrum(p);
  Vector mu2 = qnl_u12_spectrum(scaled);
  for (int i = 0; i < p.dofs(); ++i) CHECK(mu2[i] == doctest::Approx(c * mu1[i]).epsilon(1e-10));

  const StabilityReport r1 = stability_constants(p, StabilityKind::qce);
  const StabilityReport r2 = stability_constants(scaled, StabilityKind::qce);
  CHECK(r2.inf_u12 == doctest::Approx(c * r1.inf_u12).epsilon(1e-10));
  CHECK(*r2.lambda_K == doctest::Approx(*r1.lambda_K).epsilon(1e-10));
  CHECK(r2.nu_eps == doctest::Approx(r1.nu_eps).epsilon(1e-10));

  const EigenbasisCond c1 = qcf_eigenbasis_cond(p);
  const EigenbasisCond c2 = qcf_eigenbasis_cond(scaled);
  CHECK(c2.cond_V == doctest::Approx(c1.cond_V).epsilon(1e-8));
}

TEST_CASE("nu_eps stays within a stable band across sizes") {
  Vector nus;
  for (int N : {16, 64}) {
    const ModelParams p = make_params(N, 2, 1.0, -0.125);
    nus.push_back(stability_constants(p, StabilityKind::atom).nu_eps);
    CHECK(nus.back() > 0.0);
  }
  CHECK(std::fabs(nus[1] - nus[0]) <= 0.2 * std::max(nus[0], nus[1]));
}
