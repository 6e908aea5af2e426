#include "qcflab/model.hpp"

#include <cmath>

namespace qcflab {

ModelParams make_params(int N, int K, double phi2_F, double phi2_2F) {
  if (N < 4) fail(Errc::reject, "make_params: N must be >= 4");
  if (K < 1) fail(Errc::reject, "make_params: K must be >= 1");
  if (K > N - 2) fail(Errc::reject, "make_params: K must be <= N-2");
  if (!(phi2_F > 0.0)) fail(Errc::reject, "make_params: phi2_F must be > 0");
  if (phi2_2F > 0.0) fail(Errc::reject, "make_params: phi2_2F must be <= 0");
  return ModelParams{N, K, phi2_F, phi2_2F};
}

std::string to_string(P p) {
  switch (p) {
    case P::one: return "1";
    case P::two: return "2";
    case P::inf: return "inf";
  }
  return "?";
}

std::string to_string(const NormKind& kind) { return std::to_string(kind.k) + "," + to_string(kind.p); }

NormKind parse_norm_kind(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) fail(Errc::invalid_kind, "norm kind must look like \"k,p\"");
  const std::string_view ks = text.substr(0, comma);
  const std::string_view ps = text.substr(comma + 1);
  NormKind kind;
  if (ks == "0") kind.k = 0;
  else if (ks == "1") kind.k = 1;
  else if (ks == "2") kind.k = 2;
  else fail(Errc::invalid_kind, "norm order must be 0, 1 or 2");
  if (ps == "1") kind.p = P::one;
  else if (ps == "2") kind.p = P::two;
  else if (ps == "inf") kind.p = P::inf;
  else fail(Errc::invalid_kind, "norm exponent must be 1, 2 or inf");
  return kind;
}

Displacement::Displacement(const ModelParams& params, Vector values) : v_(std::move(values)) {
  if (static_cast<int>(v_.size()) != params.dofs())
    fail(Errc::dimension_mismatch, "Displacement: expected 2N-1 interior values");
}

Displacement Displacement::zero(const ModelParams& params) {
  return Displacement(params, Vector(params.dofs(), 0.0));
}

namespace {
// Interior value with the clamped boundary (and ghost) zeros outside.
inline double at(std::span<const double> u, int i) {
  return (i >= 0 && i < static_cast<int>(u.size())) ? u[i] : 0.0;
}
}  // namespace

Vector strain_of(const ModelParams& params, std::span<const double> interior) {
  const int n = params.dofs();
  if (static_cast<int>(interior.size()) != n) fail(Errc::dimension_mismatch, "strain_of size");
  const double inv_eps = static_cast<double>(params.N);
  Vector w(2 * params.N);
  for (int s = 0; s < 2 * params.N; ++s) w[s] = inv_eps * (at(interior, s) - at(interior, s - 1));
  return w;
}

Vector integrate_strain(const ModelParams& params, std::span<const double> strain) {
  if (static_cast<int>(strain.size()) != 2 * params.N)
    fail(Errc::dimension_mismatch, "integrate_strain size");
  const double eps = params.eps();
  Vector u(params.dofs());
  double acc = 0.0;
  for (int i = 0; i < params.dofs(); ++i) {
    acc += eps * strain[i];
    u[i] = acc;
  }
  return u;
}

FiniteDifferences finite_differences(const ModelParams& params, const Displacement& v) {
  const auto& u = v.values();
  if (static_cast<int>(u.size()) != params.dofs())
    fail(Errc::dimension_mismatch, "finite_differences: displacement does not conform");
  const double inv_eps = static_cast<double>(params.N);
  const double inv_eps2 = inv_eps * inv_eps;
  FiniteDifferences fd;
  fd.strain = strain_of(params, u);
  fd.curvature.resize(params.dofs());
  for (int i = 0; i < params.dofs(); ++i)
    fd.curvature[i] = inv_eps2 * (at(u, i + 1) - 2.0 * at(u, i) + at(u, i - 1));
  fd.extended_curvature.resize(2 * params.N + 1);
  for (int e = 0; e <= 2 * params.N; ++e) {
    const int i = e - 1;  // extended index l = e-N maps to interior index l+N-1
    fd.extended_curvature[e] = inv_eps2 * (at(u, i + 1) - 2.0 * at(u, i) + at(u, i - 1));
  }
  return fd;
}

double lp_eps_norm(double eps, std::span<const double> values, P p) {
  switch (p) {
    case P::one: {
      double s = 0.0;
      for (double v : values) s += std::fabs(v);
      return eps * s;
    }
    case P::two: {
      double s = 0.0;
      for (double v : values) s += v * v;
      return std::sqrt(eps * s);
    }
    case P::inf:
      return norm_inf(values);
  }
  return 0.0;
}

double vector_norm(const ModelParams& params, std::span<const double> interior, const NormKind& kind) {
  Displacement d(params, Vector(interior.begin(), interior.end()));
  return vector_norm(params, d, kind);
}

double vector_norm(const ModelParams& params, const Displacement& v, const NormKind& kind) {
  const double eps = params.eps();
  if (kind.k == 0) return lp_eps_norm(eps, v.values(), kind.p);
  const FiniteDifferences fd = finite_differences(params, v);
  if (kind.k == 1) return lp_eps_norm(eps, fd.strain, kind.p);
  return lp_eps_norm(eps, fd.curvature, kind.p);
}

double inner_product(const ModelParams& params, std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size() || static_cast<int>(v.size()) != params.dofs())
    fail(Errc::dimension_mismatch, "inner_product size");
  return params.eps() * dot(v, w);
}

double inner_product(const ModelParams& params, const Displacement& v, const Displacement& w) {
  return inner_product(params, std::span<const double>(v.values()), std::span<const double>(w.values()));
}

double weighted_norm(const ModelParams& params, const Displacement& v, const Matrix& m) {
  if (m.rows() != params.dofs() || m.cols() != params.dofs())
    fail(Errc::dimension_mismatch, "weighted_norm: matrix dimension");
  const Vector mv = matvec(m, v.values());
  const double q = params.eps() * dot(mv, v.values());
  if (q < 0.0 || (q == 0.0 && norm2(v.values()) > 0.0))
    fail(Errc::not_spd, "weighted_norm: quadratic form is not positive on this vector");
  return std::sqrt(q);
}

}  // namespace qcflab
