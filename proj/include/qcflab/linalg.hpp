#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qcflab/error.hpp"

namespace qcflab {

using Vector = std::vector<double>;

// Dense row-major matrix. Sized for desk-scale chains (dim <= ~2049).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double* row(int i) { return a_.data() + static_cast<size_t>(i) * cols_; }
  const double* row(int i) const { return a_.data() + static_cast<size_t>(i) * cols_; }
  std::vector<double>& data() { return a_; }
  const std::vector<double>& data() const { return a_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

enum class P { one, two, inf };

Vector matvec(const Matrix& m, std::span<const double> x);
Vector matvec_transposed(const Matrix& m, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
double max_abs_asymmetry(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

// Thomas algorithm for a symmetric tridiagonal system (diag, off-diagonal).
Vector solve_tridiagonal(std::span<const double> diag, std::span<const double> off,
                         std::span<const double> b);

// LU with partial pivoting; factor once, solve many right-hand sides.
class LuFactorization {
 public:
  explicit LuFactorization(Matrix m);
  Vector solve(std::span<const double> b) const;
  int dim() const { return lu_.rows(); }

 private:
  Matrix lu_;
  std::vector<int> perm_;
};

Vector lu_solve(const Matrix& m, std::span<const double> b);

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // columns, orthonormal (B-orthonormal for the generalized problem)
};

// Cyclic Jacobi for dense symmetric matrices.
EigenDecomposition sym_eigen(const Matrix& m);

// B = R^T R (upper Cholesky); throws b_not_spd on pivot breakdown.
Matrix cholesky_upper(const Matrix& b);

// Eigenpairs of B^{-1}A via Cholesky reduction; vectors satisfy V^T B V = I.
EigenDecomposition gen_sym_eigen(const Matrix& a, const Matrix& b);

// Operator p-norms: p=1 max column sum, p=inf max row sum, p=2 via power
// iteration on M^T M with the deterministic start vector.
double matrix_pnorm(const Matrix& m, P p);

double cond2(const Matrix& m);

struct SpectralRadiusEstimate {
  double value = 0.0;
  bool converged = false;
};
SpectralRadiusEstimate power_spectral_radius(const Matrix& m);

// Deterministic power-iteration start: normalized (1, 1+1e-3, 1+2e-3, ...).
Vector deterministic_start(int n);

// Largest eigenvalue of a positive semidefinite operator given as a callback.
// Used where matrices are too large (or never formed) for the dense path.
struct PowerResult {
  double value = 0.0;
  bool converged = false;
};
PowerResult power_largest_eigenvalue(int dim, const std::function<Vector(const Vector&)>& apply,
                                     double tol = 1e-11, int max_iter = 50000);

// Bisection for a real root of a polynomial (coefficients highest degree
// first) inside [lo, hi]; requires a sign change on the bracket.
double largest_real_root(std::span<const double> coefficients, double lo, double hi);
double polynomial_eval(std::span<const double> coefficients, double x);

}  // namespace qcflab
