#pragma once

#include "qcflab/model.hpp"

namespace qcflab {

enum class OperatorKind { atom, laplacian, qcl, qnl, qce, qcf };

std::string to_string(OperatorKind kind);
OperatorKind parse_operator_kind(std::string_view text);

// Dense square operator over the interior DOFs, tagged by kind.
struct Operator {
  OperatorKind kind;
  ModelParams params;
  Matrix m;
};

// Assembles the linearized operator for the given kind. All kinds except QCF
// produce a matrix that is symmetric to the last bit; QCF rows with |j| <= K
// are copied from the atomistic assembly and the rest from the local one.
Operator assemble(const ModelParams& params, OperatorKind kind);

// Ghost forces at the interface, supported on j in {+-(K-1), +-K, +-(K+1),
// +-(K+2)}; the negative side carries the antisymmetric values g_{-j} = -g_j.
struct GhostForceVector {
  Vector values;  // length 2N-1
  double phi1_2F; // phi'(2F) used to scale
};
GhostForceVector ghost_forces(const ModelParams& params, double phi1_2F);

// z = (L1)^{-1} L^qcf u evaluated in O(N) through the strain representation,
// without assembling either matrix.
Displacement apply_inv_lap_qcf(const ModelParams& params, const Displacement& u);

enum class ConjugateKind { qcf_precon_laplacian, qce_op, qcf_op, qnl_op };

// Operator induced on strain vectors by a displacement-space operator.
// Contractually exact on mean-zero strains; the full-space values follow the
// strain-representation formulas (qcf_precon_laplacian) or the columnwise
// integrate/apply/re-difference construction (the force operators).
struct StrainOperator {
  ConjugateKind kind;
  Matrix m;  // 2N x 2N
  bool exact_on_mean_zero = true;
};
StrainOperator conjugate_strain_operator(const ModelParams& params, ConjugateKind kind);

// Columnwise strain conjugate of an arbitrary interior operator: each strain
// basis vector is first projected onto mean zero, integrated to a
// displacement, pushed through the operator, and re-differenced.
Matrix strain_conjugate_of(const ModelParams& params, const Matrix& interior_op);

enum class FormKind { atom, qce };

// Quadratic form <L u, u> evaluated through the strain/curvature
// decomposition rather than the matrix. The QCE decomposition needs K >= 2;
// at K = 1 the interface braces overlap and the formula does not apply.
double form_oracle(const ModelParams& params, FormKind kind, const Displacement& u);

// Tridiagonal pieces of the discrete Laplacian L1 and a Thomas solve with it.
Vector laplacian_diag(const ModelParams& params);
Vector laplacian_off_diag(const ModelParams& params);
Vector solve_laplacian(const ModelParams& params, std::span<const double> rhs);
Vector apply_laplacian(const ModelParams& params, std::span<const double> u);

}  // namespace qcflab
