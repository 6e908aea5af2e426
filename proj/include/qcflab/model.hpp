#pragma once

#include <string>
#include <string_view>

#include "qcflab/linalg.hpp"

namespace qcflab {

// Discretization and material coefficients of the constrained chain.
// Interior degrees of freedom: u_j, j = -N+1..N-1, stored at index j+N-1.
// The chain carries the clamped boundary values u_{+-N} = u_{+-(N+1)} = 0.
struct ModelParams {
  int N = 0;
  int K = 0;
  double phi2_F = 0.0;   // phi''(F)
  double phi2_2F = 0.0;  // phi''(2F)

  double eps() const { return 1.0 / N; }
  double a_F() const { return phi2_F + 4.0 * phi2_2F; }  // continuum elastic modulus
  int dofs() const { return 2 * N - 1; }
};

// Validates N >= 4, 1 <= K <= N-2, phi2_F > 0, phi2_2F <= 0.
ModelParams make_params(int N, int K, double phi2_F, double phi2_2F);

struct NormKind {
  int k = 0;  // difference order, 0..2
  P p = P::two;
  friend bool operator==(const NormKind&, const NormKind&) = default;
};

std::string to_string(P p);
std::string to_string(const NormKind& kind);
NormKind parse_norm_kind(std::string_view text);  // "k,p" with p in {1,2,inf}

// Interior displacement values; conforms to a ModelParams via its length.
class Displacement {
 public:
  Displacement(const ModelParams& params, Vector values);
  static Displacement zero(const ModelParams& params);

  const Vector& values() const { return v_; }
  Vector& values() { return v_; }
  int size() const { return static_cast<int>(v_.size()); }

 private:
  Vector v_;
};

struct FiniteDifferences {
  Vector strain;              // u'_l, l = -N+1..N   (length 2N)
  Vector curvature;           // u''_l, l = -N+1..N-1 (length 2N-1)
  Vector extended_curvature;  // u''_l, l = -N..N, ghost zeros at +-(N+1) (length 2N+1)
};

FiniteDifferences finite_differences(const ModelParams& params, const Displacement& v);

// Building blocks shared with adjacent modules; all are eps-weighted.
Vector strain_of(const ModelParams& params, std::span<const double> interior);
Vector integrate_strain(const ModelParams& params, std::span<const double> strain);
double lp_eps_norm(double eps, std::span<const double> values, P p);

double vector_norm(const ModelParams& params, const Displacement& v, const NormKind& kind);
double vector_norm(const ModelParams& params, std::span<const double> interior, const NormKind& kind);

double inner_product(const ModelParams& params, const Displacement& v, const Displacement& w);
double inner_product(const ModelParams& params, std::span<const double> v, std::span<const double> w);

// sqrt(<Mv, v>) in the eps-weighted inner product; M must act on interior DOFs.
double weighted_norm(const ModelParams& params, const Displacement& v, const Matrix& m);

}  // namespace qcflab
