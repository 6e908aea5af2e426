#include "qcflab/operators.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace qcflab {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::atom: return "atom";
    case OperatorKind::laplacian: return "laplacian";
    case OperatorKind::qcl: return "qcl";
    case OperatorKind::qnl: return "qnl";
    case OperatorKind::qce: return "qce";
    case OperatorKind::qcf: return "qcf";
  }
  return "?";
}

OperatorKind parse_operator_kind(std::string_view text) {
  if (text == "atom") return OperatorKind::atom;
  if (text == "laplacian") return OperatorKind::laplacian;
  if (text == "qcl") return OperatorKind::qcl;
  if (text == "qnl") return OperatorKind::qnl;
  if (text == "qce") return OperatorKind::qce;
  if (text == "qcf") return OperatorKind::qcf;
  fail(Errc::invalid_kind, "unknown operator kind");
}

namespace {

// Stencil entry at chain offset `off` from the row atom; entries referencing
// the clamped/ghost atoms |j| >= N are dropped (their displacement is zero).
struct Entry {
  int off;
  double coeff;
};

void add_row(Matrix& m, int N, int j, std::span<const Entry> entries, double scale, bool mirrored) {
  const int i = j + N - 1;
  for (const Entry& e : entries) {
    const int col_j = mirrored ? j - e.off : j + e.off;
    if (std::abs(col_j) >= N) continue;
    m(i, col_j + N - 1) += scale * e.coeff;
  }
}

// Rows of the phi''_2F part of QNL for j >= 0, as displayed stencils.
std::vector<Entry> qnl_next_nearest_row(int j, int K) {
  if (j <= K - 1) return {{-2, -1.0}, {0, 2.0}, {2, -1.0}};
  if (j == K) return {{-2, -1.0}, {0, 3.0}, {1, -2.0}};
  if (j == K + 1) return {{-2, -1.0}, {-1, -2.0}, {0, 7.0}, {1, -4.0}};
  return {{-1, -4.0}, {0, 8.0}, {1, -4.0}};
}

// Rows of the phi''_2F part of QCE for j >= 0, as displayed stencils. The
// j = 0 row at K = 1 comes from the energy Hessian, where the interface
// stencils overlap and each next-nearest bond is half-owned by atom 0.
std::vector<Entry> qce_next_nearest_row(int j, int K) {
  if (K == 1 && j == 0) return {{-2, -0.5}, {0, 1.0}, {2, -0.5}};
  if (j <= K - 2) return {{-2, -1.0}, {0, 2.0}, {2, -1.0}};
  if (j == K - 1) return {{-2, -1.0}, {0, 1.5}, {2, -0.5}};
  if (j == K) return {{-2, -1.0}, {0, 3.5}, {1, -2.0}, {2, -0.5}};
  if (j == K + 1) return {{-1, -2.0}, {0, 6.5}, {1, -4.0}, {-2, -0.5}};
  if (j == K + 2) return {{-2, -0.5}, {-1, -4.0}, {0, 8.5}, {1, -4.0}};
  return {{-1, -4.0}, {0, 8.0}, {1, -4.0}};
}

Matrix assemble_atom(const ModelParams& p) {
  const int n = p.dofs();
  const double w2 = static_cast<double>(p.N) * p.N;
  Matrix m(n, n);
  const Entry nearest[] = {{-1, -1.0}, {0, 2.0}, {1, -1.0}};
  const Entry next[] = {{-2, -1.0}, {0, 2.0}, {2, -1.0}};
  for (int j = -p.N + 1; j <= p.N - 1; ++j) {
    add_row(m, p.N, j, nearest, p.phi2_F * w2, false);
    add_row(m, p.N, j, next, p.phi2_2F * w2, false);
  }
  return m;
}

Matrix assemble_laplacian(const ModelParams& p, double scale) {
  const int n = p.dofs();
  const double w2 = scale * p.N * p.N;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0 * w2;
    if (i > 0) m(i, i - 1) = -w2;
    if (i + 1 < n) m(i, i + 1) = -w2;
  }
  return m;
}

template <typename RowFn>
Matrix assemble_interface_operator(const ModelParams& p, RowFn&& next_nearest_row) {
  const int n = p.dofs();
  const double w2 = static_cast<double>(p.N) * p.N;
  Matrix m(n, n);
  const Entry nearest[] = {{-1, -1.0}, {0, 2.0}, {1, -1.0}};
  for (int j = 0; j <= p.N - 1; ++j) {
    const std::vector<Entry> row = next_nearest_row(j, p.K);
    add_row(m, p.N, j, nearest, p.phi2_F * w2, false);
    add_row(m, p.N, j, row, p.phi2_2F * w2, false);
    if (j > 0) {  // negative rows by index reflection with stencil reversal
      add_row(m, p.N, -j, nearest, p.phi2_F * w2, true);
      add_row(m, p.N, -j, row, p.phi2_2F * w2, true);
    }
  }
  return m;
}

}  // namespace

Operator assemble(const ModelParams& params, OperatorKind kind) {
  switch (kind) {
    case OperatorKind::atom:
      return {kind, params, assemble_atom(params)};
    case OperatorKind::laplacian:
      return {kind, params, assemble_laplacian(params, 1.0)};
    case OperatorKind::qcl:
      return {kind, params, assemble_laplacian(params, params.a_F())};
    case OperatorKind::qnl:
      return {kind, params, assemble_interface_operator(params, qnl_next_nearest_row)};
    case OperatorKind::qce:
      return {kind, params, assemble_interface_operator(params, qce_next_nearest_row)};
    case OperatorKind::qcf: {
      const Matrix atom = assemble_atom(params);
      Matrix m = assemble_laplacian(params, params.a_F());
      for (int j = -params.K; j <= params.K; ++j) {
        const int i = j + params.N - 1;
        for (int c = 0; c < m.cols(); ++c) m(i, c) = atom(i, c);
      }
      return {kind, params, std::move(m)};
    }
  }
  fail(Errc::invalid_kind, "assemble: unknown operator kind");
}

GhostForceVector ghost_forces(const ModelParams& params, double phi1_2F) {
  if (params.K + 2 > params.N - 1)
    fail(Errc::reject, "ghost_forces: interface band K-1..K+2 must stay interior");
  GhostForceVector g{Vector(params.dofs(), 0.0), phi1_2F};
  const double s = phi1_2F / (2.0 * params.eps());
  const int Nm1 = params.N - 1;
  auto set = [&](int j, double val) {
    if (j > 0) {
      g.values[j + Nm1] = val;
      g.values[-j + Nm1] = -val;
    }
    // j = 0 only occurs for K = 1, where mirror symmetry forces a zero entry.
  };
  set(params.K - 1, -s);
  set(params.K, s);
  set(params.K + 1, s);
  set(params.K + 2, -s);
  return g;
}

Vector laplacian_diag(const ModelParams& params) {
  return Vector(params.dofs(), 2.0 * params.N * params.N);
}

Vector laplacian_off_diag(const ModelParams& params) {
  return Vector(params.dofs() - 1, -1.0 * params.N * params.N);
}

Vector solve_laplacian(const ModelParams& params, std::span<const double> rhs) {
  return solve_tridiagonal(laplacian_diag(params), laplacian_off_diag(params), rhs);
}

Vector apply_laplacian(const ModelParams& params, std::span<const double> u) {
  const int n = params.dofs();
  if (static_cast<int>(u.size()) != n) fail(Errc::dimension_mismatch, "apply_laplacian size");
  const double w2 = static_cast<double>(params.N) * params.N;
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    double s = 2.0 * u[i];
    if (i > 0) s -= u[i - 1];
    if (i + 1 < n) s -= u[i + 1];
    y[i] = w2 * s;
  }
  return y;
}

namespace {

// Strain-space representation of L^qcf: sigma(w), its mean, the interface
// second differences, and the discrete delta profiles h_{+-K}.
struct QcfStrainRep {
  const ModelParams& p;
  int sN;  // strain vector length 2N

  explicit QcfStrainRep(const ModelParams& params) : p(params), sN(2 * params.N) {}

  int idx(int l) const { return l + p.N - 1; }  // strain index l = -N+1..N

  Vector sigma(std::span<const double> w) const {
    Vector s(sN);
    for (int l = -p.N + 1; l <= p.N; ++l) {
      const int i = idx(l);
      if (l >= -p.K + 1 && l <= p.K) {
        s[i] = p.phi2_F * w[i] + p.phi2_2F * (w[i - 1] + 2.0 * w[i] + w[i + 1]);
      } else {
        s[i] = p.a_F() * w[i];
      }
    }
    return s;
  }

  double sigma_mean(std::span<const double> w) const {
    return 0.5 * p.eps() * p.phi2_2F *
           (w[idx(p.K + 1)] - w[idx(p.K)] - w[idx(-p.K + 1)] + w[idx(-p.K)]);
  }

  double alpha_minus(std::span<const double> w) const {
    return w[idx(-p.K + 1)] - 2.0 * w[idx(-p.K)] + w[idx(-p.K - 1)];
  }
  double alpha_plus(std::span<const double> w) const {
    return w[idx(p.K + 2)] - 2.0 * w[idx(p.K + 1)] + w[idx(p.K)];
  }

  double h(int sign_k, int l) const {  // h_{+-K, l}
    const double ek = p.eps() * p.K;
    if (sign_k > 0) return l <= p.K ? 0.5 * (1.0 - ek) : 0.5 * (-1.0 - ek);
    return l <= -p.K ? 0.5 * (1.0 + ek) : 0.5 * (-1.0 + ek);
  }

  // z' for z = (L1)^{-1} L^qcf u, evaluated on an arbitrary strain vector.
  Vector apply(std::span<const double> w) const {
    Vector z = sigma(w);
    const double mean = sigma_mean(w);
    const double am = p.phi2_2F * alpha_minus(w);
    const double ap = p.phi2_2F * alpha_plus(w);
    for (int l = -p.N + 1; l <= p.N; ++l)
      z[idx(l)] += -mean + am * h(-1, l) - ap * h(+1, l);
    return z;
  }
};

}  // namespace

Displacement apply_inv_lap_qcf(const ModelParams& params, const Displacement& u) {
  const QcfStrainRep rep(params);
  const Vector w = strain_of(params, u.values());
  const Vector zp = rep.apply(w);
  return Displacement(params, integrate_strain(params, zp));
}

Matrix strain_conjugate_of(const ModelParams& params, const Matrix& interior_op) {
  const int n = params.dofs();
  if (interior_op.rows() != n || interior_op.cols() != n)
    fail(Errc::dimension_mismatch, "strain_conjugate_of: operator dimension");
  const int sN = 2 * params.N;
  Matrix conj(sN, sN);
  Vector w(sN);
  for (int col = 0; col < sN; ++col) {
    std::fill(w.begin(), w.end(), -1.0 / sN);
    w[col] += 1.0;  // mean-zero projection of the basis strain
    const Vector u = integrate_strain(params, w);
    const Vector y = matvec(interior_op, u);
    const Vector s = strain_of(params, y);
    for (int r = 0; r < sN; ++r) conj(r, col) = s[r];
  }
  return conj;
}

StrainOperator conjugate_strain_operator(const ModelParams& params, ConjugateKind kind) {
  switch (kind) {
    case ConjugateKind::qcf_precon_laplacian: {
      const QcfStrainRep rep(params);
      const int sN = 2 * params.N;
      Matrix m(sN, sN);
      Vector e(sN, 0.0);
      for (int col = 0; col < sN; ++col) {
        e[col] = 1.0;
        const Vector z = rep.apply(e);
        e[col] = 0.0;
        for (int r = 0; r < sN; ++r) m(r, col) = z[r];
      }
      return {kind, std::move(m), true};
    }
    case ConjugateKind::qce_op:
      return {kind, strain_conjugate_of(params, assemble(params, OperatorKind::qce).m), true};
    case ConjugateKind::qcf_op:
      return {kind, strain_conjugate_of(params, assemble(params, OperatorKind::qcf).m), true};
    case ConjugateKind::qnl_op:
      return {kind, strain_conjugate_of(params, assemble(params, OperatorKind::qnl).m), true};
  }
  fail(Errc::invalid_kind, "conjugate_strain_operator: unknown kind");
}

double form_oracle(const ModelParams& params, FormKind kind, const Displacement& u) {
  const double eps = params.eps();
  const double a_F = params.a_F();
  const FiniteDifferences fd = finite_differences(params, u);
  if (kind == FormKind::atom) {
    double s2 = 0.0, c2 = 0.0;
    for (double w : fd.strain) s2 += w * w;
    for (double c : fd.extended_curvature) c2 += c * c;
    return a_F * eps * s2 - eps * eps * params.phi2_2F * eps * c2;
  }
  if (kind != FormKind::qce) fail(Errc::invalid_kind, "form_oracle: unknown kind");
  if (params.K < 2) fail(Errc::invalid_kind, "form_oracle: the QCE decomposition requires K >= 2");

  const int N = params.N, K = params.K;
  auto ws = [&](int l) { return fd.strain[l + N - 1]; };
  auto cv = [&](int l) { return fd.curvature[l + N - 1]; };
  double brace1 = 0.0;
  for (int l = -N + 1; l <= -K - 2; ++l) brace1 += a_F * ws(l) * ws(l);
  for (int l = K + 3; l <= N; ++l) brace1 += a_F * ws(l) * ws(l);
  // Strain terms run over -K+2..K-1; the curvature sum needs the extra
  // l = -K+1 term to keep the decomposition reflection-symmetric (it must
  // reproduce the interface strain matrix exactly).
  double brace2 = 0.0;
  for (int l = -K + 2; l <= K - 1; ++l) brace2 += a_F * ws(l) * ws(l);
  for (int l = -K + 1; l <= K - 1; ++l) brace2 -= eps * eps * params.phi2_2F * cv(l) * cv(l);
  const double g = params.phi2_2F;
  double brace3 = (a_F - g) * (ws(-K + 1) * ws(-K + 1) + ws(K) * ws(K)) +
                  a_F * (ws(-K) * ws(-K) + ws(K + 1) * ws(K + 1)) +
                  (a_F + g) * (ws(-K - 1) * ws(-K - 1) + ws(K + 2) * ws(K + 2)) -
                  0.5 * eps * eps * g *
                      (cv(-K) * cv(-K) + cv(-K - 1) * cv(-K - 1) + cv(K) * cv(K) +
                       cv(K + 1) * cv(K + 1));
  return eps * (brace1 + brace2 + brace3);
}

}  // namespace qcflab
