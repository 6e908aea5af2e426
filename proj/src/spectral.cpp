#include "qcflab/spectral.hpp"

#include <cmath>
#include <numbers>

namespace qcflab {

LaplacianSpectralFactors::LaplacianSpectralFactors(const ModelParams& params) : params_(params) {
  const int n = params.dofs();
  const double pi = std::numbers::pi;
  eigenvalues_.resize(n);
  for (int j = 1; j <= n; ++j)
    eigenvalues_[j - 1] = 4.0 * params.N * params.N * std::pow(std::sin(j * pi / (4.0 * params.N)), 2);
  sine_ = Matrix(n, n);
  for (int m = 1; m <= n; ++m)
    for (int j = 1; j <= n; ++j) sine_(m - 1, j - 1) = std::sin(j * m * pi / (2.0 * params.N));
}

Vector LaplacianSpectralFactors::apply_power(std::span<const double> v, double exponent) const {
  const int n = params_.dofs();
  if (static_cast<int>(v.size()) != n) fail(Errc::dimension_mismatch, "apply_power size");
  Vector coeff = matvec_transposed(sine_, v);  // <q_j, v> up to the eps weight
  const double eps = params_.eps();
  for (int j = 0; j < n; ++j) coeff[j] *= eps * std::pow(eigenvalues_[j], exponent);
  return matvec(sine_, coeff);
}

Matrix LaplacianSpectralFactors::power_matrix(double exponent) const {
  const int n = params_.dofs();
  const double eps = params_.eps();
  Matrix scaled(n, n);  // sine_ * diag(eps * lambda^s)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      scaled(i, j) = sine_(i, j) * eps * std::pow(eigenvalues_[j], exponent);
  Matrix st = transpose(sine_);
  return matmul(scaled, st);
}

LaplacianSpectralFactors laplacian_spectral_factors(const ModelParams& params) {
  return LaplacianSpectralFactors(params);
}

Vector qnl_u12_spectrum(const ModelParams& params) {
  const int n = params.dofs();
  const double pi = std::numbers::pi;
  Vector mu(n, params.a_F());
  for (int j = 1; j <= 2 * params.K + 1; ++j)
    mu[j - 1] = params.a_F() -
                4.0 * params.phi2_2F * std::pow(std::sin(j * pi / (4.0 * params.K + 4.0)), 2);
  return mu;
}

double similarity_residual(const ModelParams& params) {
  const Matrix lap = assemble(params, OperatorKind::laplacian).m;
  const Matrix qcf = assemble(params, OperatorKind::qcf).m;
  const Matrix qnl = assemble(params, OperatorKind::qnl).m;
  const Matrix lhs = matmul(lap, qcf);
  const Matrix rhs = matmul(qnl, lap);
  Matrix diff = lhs;
  for (size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= rhs.data()[i];
  return frobenius_norm(diff) / frobenius_norm(rhs);
}

EigenbasisCond qcf_eigenbasis_cond(const ModelParams& params) {
  if (!(params.a_F() > 0.0)) fail(Errc::singular, "qcf_eigenbasis_cond: A_F must be positive");
  const int n = params.dofs();
  const double eps = params.eps();

  const Matrix qnl = assemble(params, OperatorKind::qnl).m;
  const EigenDecomposition e = sym_eigen(qnl);
  Matrix v(n, n);
  Vector col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = e.eigenvectors(i, j);
    Vector x = solve_laplacian(params, col);
    const double s = std::sqrt(eps) * norm2(x);
    for (int i = 0; i < n; ++i) v(i, j) = x[i] / s;
  }

  const LaplacianSpectralFactors f(params);
  const Matrix inv_sqrt = f.power_matrix(-0.5);
  Matrix c = matmul(inv_sqrt, matmul(qnl, inv_sqrt));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double s = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = c(j, i) = s;
    }
  const EigenDecomposition et = sym_eigen(c);
  const Matrix lap = assemble(params, OperatorKind::laplacian).m;
  const Matrix w = matmul(transpose(et.eigenvectors), lap);

  return {cond2(v), cond2(w)};
}

std::string to_string(StabilityKind kind) {
  switch (kind) {
    case StabilityKind::atom: return "atom";
    case StabilityKind::qnl: return "qnl";
    case StabilityKind::qce: return "qce";
    case StabilityKind::qcf_sym: return "qcf-sym";
  }
  return "?";
}

StabilityKind parse_stability_kind(std::string_view text) {
  if (text == "atom") return StabilityKind::atom;
  if (text == "qnl") return StabilityKind::qnl;
  if (text == "qce") return StabilityKind::qce;
  if (text == "qcf-sym" || text == "qcf_sym") return StabilityKind::qcf_sym;
  fail(Errc::invalid_kind, "unknown stability kind");
}

namespace {

// min ||u''||^2 / ||u'||^2 over the chain with ghost-zero second differences
// at l = +-N, as a generalized eigenvalue problem on the interior DOFs.
double compute_nu_eps(const ModelParams& params) {
  const int n = params.dofs();
  const int rows2 = 2 * params.N + 1;
  const double inv_eps2 = static_cast<double>(params.N) * params.N;
  Matrix d2(rows2, n);
  for (int e = 0; e < rows2; ++e) {
    const int i = e - 1;  // row l = e - N touches interior indices i-1, i, i+1
    if (i - 1 >= 0 && i - 1 < n) d2(e, i - 1) += inv_eps2;
    if (i >= 0 && i < n) d2(e, i) -= 2.0 * inv_eps2;
    if (i + 1 >= 0 && i + 1 < n) d2(e, i + 1) += inv_eps2;
  }
  Matrix a = matmul(transpose(d2), d2);
  const Matrix b = assemble(params, OperatorKind::laplacian).m;  // D1^T D1
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double s = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = a(j, i) = s;
    }
  const EigenDecomposition e = gen_sym_eigen(a, b);
  return e.eigenvalues.front();
}

}  // namespace

StabilityReport stability_constants(const ModelParams& params, StabilityKind kind) {
  OperatorKind op;
  switch (kind) {
    case StabilityKind::atom: op = OperatorKind::atom; break;
    case StabilityKind::qnl: op = OperatorKind::qnl; break;
    case StabilityKind::qce: op = OperatorKind::qce; break;
    case StabilityKind::qcf_sym: op = OperatorKind::qcf; break;
  }
  Matrix m = assemble(params, op).m;
  if (kind == StabilityKind::qcf_sym) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = i + 1; j < m.cols(); ++j) {
        const double s = 0.5 * (m(i, j) + m(j, i));
        m(i, j) = m(j, i) = s;
      }
  }
  const Matrix lap = assemble(params, OperatorKind::laplacian).m;
  const EigenDecomposition e = gen_sym_eigen(m, lap);

  StabilityReport report{kind, params, e.eigenvalues.front(), std::nullopt, compute_nu_eps(params)};
  if (kind == StabilityKind::qce && params.phi2_2F < 0.0)
    report.lambda_K = (params.a_F() - report.inf_u12) / (-params.phi2_2F);
  return report;
}

InterfaceConstants lambda_star_constants() {
  const double quintic[] = {4.0, -12.0, 9.0, -3.0, -4.0, 2.0};
  const double z = largest_real_root(quintic, 2.0, 3.0);
  const double lambda_hat = z + 1.0 / z + 2.0;
  return {z, lambda_hat, lambda_hat - 4.0, 2.0 * std::log(z)};
}

double interface_eigen_direct(int K) {
  if (K < 1) fail(Errc::reject, "interface_eigen_direct: K must be >= 1");
  const int n = 2 * K + 4;  // strain indices -K-1 .. K+2
  Matrix h(n, n);
  // assembled below; the eigenvalue is taken over skew-symmetric vectors,
  // the parity that embeds into mean-zero chain strains (the symmetric
  // branch has a nonzero strain sum and is inadmissible).
  auto idx = [&](int l) { return l + K + 1; };
  auto set = [&](int r, int c, double v) { h(idx(r), idx(c)) = v; };
  set(-K - 1, -K - 1, 4.5);
  set(-K - 1, -K, 0.5);
  set(-K, -K - 1, 0.5);
  set(-K, -K, 3.0);
  set(-K, -K + 1, 0.5);
  set(-K + 1, -K, 0.5);
  set(-K + 1, -K + 1, 1.5);
  set(-K + 1, -K + 2, 1.0);
  for (int l = -K + 2; l <= K - 1; ++l) {
    set(l, l - 1, 1.0);
    set(l, l, 2.0);
    set(l, l + 1, 1.0);
  }
  set(K, K - 1, 1.0);
  set(K, K, 1.5);
  set(K, K + 1, 0.5);
  set(K + 1, K, 0.5);
  set(K + 1, K + 1, 3.0);
  set(K + 1, K + 2, 0.5);
  set(K + 2, K + 1, 0.5);
  set(K + 2, K + 2, 4.5);
  // Restrict to the skew subspace: basis b_i = (e_i - e_{n-1-i}) / sqrt(2),
  // i = 0..n/2-1, giving (B^T H B)_{ij} = H(i,j) - H(i, n-1-j).
  const int half = n / 2;
  Matrix hs(half, half);
  for (int i = 0; i < half; ++i)
    for (int j = 0; j < half; ++j) hs(i, j) = h(i, j) - h(i, n - 1 - j);
  const EigenDecomposition e = sym_eigen(hs);
  return e.eigenvalues.back();
}

PotentialSpec lennard_jones_potential() {
  return {[](double r) { return 156.0 * std::pow(r, -14.0) - 84.0 * std::pow(r, -8.0); }, 1.0};
}

double critical_strain(const PotentialSpec& potential) {
  const double f0 = potential.ground_state_strain;
  auto a = [&](double f) {
    return potential.second_derivative(f) + 4.0 * potential.second_derivative(2.0 * f);
  };
  if (!(a(f0) > 0.0)) fail(Errc::reject, "critical_strain: A_F must be positive at the ground state");
  const double step = 1e-3;
  double lo = f0, hi = f0;
  bool found = false;
  for (double f = f0 + step; f <= 10.0 * f0; f += step) {
    if (a(f) <= 0.0) {
      hi = f;
      lo = f - step;
      found = true;
      break;
    }
  }
  if (!found) fail(Errc::no_root, "critical_strain: no sign change up to 10 F0");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (a(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qcflab
