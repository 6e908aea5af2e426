#pragma once

#include <functional>
#include <optional>

#include "qcflab/operators.hpp"

namespace qcflab {

// Closed-form Dirichlet spectrum of L1 together with sine-basis appliers for
// fractional powers. Eigenvalues are 4 eps^{-2} sin^2(j pi / 4N), j=1..2N-1.
class LaplacianSpectralFactors {
 public:
  explicit LaplacianSpectralFactors(const ModelParams& params);

  const Vector& eigenvalues() const { return eigenvalues_; }
  Vector apply_power(std::span<const double> v, double exponent) const;
  Vector apply_sqrt(std::span<const double> v) const { return apply_power(v, 0.5); }
  Vector apply_inv_sqrt(std::span<const double> v) const { return apply_power(v, -0.5); }
  Matrix power_matrix(double exponent) const;

 private:
  ModelParams params_;
  Vector eigenvalues_;
  Matrix sine_;  // sine_(m, j) = sin((j+1)(m+1) pi / 2N); columns eps-orthonormal
};

LaplacianSpectralFactors laplacian_spectral_factors(const ModelParams& params);

// U^{1,2}-spectrum of L^qnl (and, by similarity, of L1^{-1} L^qcf):
// mu_j = A_F - 4 phi''_2F sin^2(j pi / (4K+4)) for j = 1..2K+1, else A_F.
Vector qnl_u12_spectrum(const ModelParams& params);

// Relative Frobenius residual of the identity L1 L^qcf = L^qnl L1.
double similarity_residual(const ModelParams& params);

struct EigenbasisCond {
  double cond_V = 0.0;  // eigenbasis of L^qcf, columns unit in l2_eps
  double cond_W = 0.0;  // eigenbasis of the L1^{-1/2}-preconditioned problem
};
EigenbasisCond qcf_eigenbasis_cond(const ModelParams& params);

enum class StabilityKind { atom, qnl, qce, qcf_sym };

std::string to_string(StabilityKind kind);
StabilityKind parse_stability_kind(std::string_view text);

struct StabilityReport {
  StabilityKind kind;
  ModelParams params;
  double inf_u12 = 0.0;                // inf <L u, u> / ||u'||^2
  std::optional<double> lambda_K;      // QCE interface constant, needs phi''_2F < 0
  double nu_eps = 0.0;                 // min ||u''||^2 / ||u'||^2 with ghost-zero rows
};
StabilityReport stability_constants(const ModelParams& params, StabilityKind kind);

struct InterfaceConstants {
  double z_hat;        // largest real root of the interface quintic
  double lambda_hat;   // z + 1/z + 2
  double lambda_star;  // lambda_hat - 4
  double c;            // 2 ln z, the interface decay rate
};
InterfaceConstants lambda_star_constants();

// Largest eigenvalue of the (2K+4)-point interface strain matrix; the QCE
// interface constant is this value minus 4.
double interface_eigen_direct(int K);

struct PotentialSpec {
  std::function<double(double)> second_derivative;
  double ground_state_strain = 1.0;
};

PotentialSpec lennard_jones_potential();  // normalized: phi(r) = r^-12 - 2 r^-6

// Smallest F > F0 with phi''(F) + 4 phi''(2F) = 0, by outward scan (step
// 1e-3) followed by bisection to 1e-12. Requires A_{F0} > 0.
double critical_strain(const PotentialSpec& potential);

}  // namespace qcflab
