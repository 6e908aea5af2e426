#include "qcflab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcflab {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector matvec(const Matrix& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.cols()) fail(Errc::dimension_mismatch, "matvec size");
  Vector y(m.rows(), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    const double* r = m.row(i);
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vector matvec_transposed(const Matrix& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.rows()) fail(Errc::dimension_mismatch, "matvec_transposed size");
  Vector y(m.cols(), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    const double* r = m.row(i);
    const double xi = x[i];
    for (int j = 0; j < m.cols(); ++j) y[j] += r[j] * xi;
  }
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(Errc::dimension_mismatch, "matmul size");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    const double* ar = a.row(i);
    double* cr = c.row(i);
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = ar[k];
      if (aik == 0.0) continue;
      const double* br = b.row(k);
      for (int j = 0; j < b.cols(); ++j) cr[j] += aik * br[j];
    }
  }
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s = std::max(s, std::fabs(v));
  return s;
}

double max_abs_asymmetry(const Matrix& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j) s = std::max(s, std::fabs(m(i, j) - m(j, i)));
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::fabs(v));
  return s;
}

Vector solve_tridiagonal(std::span<const double> diag, std::span<const double> off,
                         std::span<const double> b) {
  const int n = static_cast<int>(diag.size());
  if (static_cast<int>(off.size()) != n - 1 || static_cast<int>(b.size()) != n)
    fail(Errc::dimension_mismatch, "solve_tridiagonal size");
  Vector c(n - 1 > 0 ? n - 1 : 0), d(n), x(n);
  double piv = diag[0];
  if (std::fabs(piv) < 1e-300) fail(Errc::zero_pivot, "tridiagonal pivot underflow");
  if (n > 1) c[0] = off[0] / piv;
  d[0] = b[0] / piv;
  for (int i = 1; i < n; ++i) {
    piv = diag[i] - off[i - 1] * c[i - 1];
    if (std::fabs(piv) < 1e-300) fail(Errc::zero_pivot, "tridiagonal pivot underflow");
    if (i < n - 1) c[i] = off[i] / piv;
    d[i] = (b[i] - off[i - 1] * d[i - 1]) / piv;
  }
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

LuFactorization::LuFactorization(Matrix m) : lu_(std::move(m)), perm_(lu_.rows()) {
  const int n = lu_.rows();
  if (lu_.cols() != n) fail(Errc::dimension_mismatch, "LU requires a square matrix");
  std::iota(perm_.begin(), perm_.end(), 0);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::fabs(lu_(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(lu_(i, k));
      if (v > best) { best = v; p = i; }
    }
    if (best < 1e-300) fail(Errc::singular, "LU pivot underflow");
    if (p != k) {
      std::swap(perm_[p], perm_[k]);
      for (int j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(k, j));
    }
    const double pivot = lu_(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / pivot;
      lu_(i, k) = f;
      if (f == 0.0) continue;
      const double* rk = lu_.row(k);
      double* ri = lu_.row(i);
      for (int j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
    }
  }
}

Vector LuFactorization::solve(std::span<const double> b) const {
  const int n = lu_.rows();
  if (static_cast<int>(b.size()) != n) fail(Errc::dimension_mismatch, "LU solve size");
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    const double* ri = lu_.row(i);
    for (int j = 0; j < i; ++j) s -= ri[j] * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    const double* ri = lu_.row(i);
    for (int j = i + 1; j < n; ++j) s -= ri[j] * x[j];
    x[i] = s / ri[i];
  }
  return x;
}

Vector lu_solve(const Matrix& m, std::span<const double> b) { return LuFactorization(m).solve(b); }

EigenDecomposition sym_eigen(const Matrix& m) {
  const int n = m.rows();
  if (m.cols() != n) fail(Errc::dimension_mismatch, "sym_eigen requires a square matrix");
  const double scale = max_abs(m);
  if (max_abs_asymmetry(m) > 1e-12 * (scale > 0 ? scale : 1.0))
    fail(Errc::not_symmetric, "sym_eigen: matrix is not symmetric");

  Matrix a = m;
  Matrix v = Matrix::identity(n);
  const double total = frobenius_norm(a);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const int max_sweeps = 30;
  bool done = (total == 0.0) || (off_norm() <= 1e-12 * total);
  for (int sweep = 0; sweep < max_sweeps && !done; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Rotate rows/columns p and q of a, and columns p, q of v.
        for (int j = 0; j < n; ++j) {
          const double ajp = a(j, p), ajq = a(j, q);
          a(j, p) = c * ajp - s * ajq;
          a(j, q) = s * ajp + c * ajq;
        }
        for (int j = 0; j < n; ++j) {
          const double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (int j = 0; j < n; ++j) {
          const double vjp = v(j, p), vjq = v(j, q);
          v(j, p) = c * vjp - s * vjq;
          v(j, q) = s * vjp + c * vjq;
        }
      }
    }
    done = off_norm() <= 1e-12 * total;
  }
  if (!done) fail(Errc::no_convergence, "sym_eigen: Jacobi did not converge in 30 sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix cholesky_upper(const Matrix& b) {
  const int n = b.rows();
  Matrix r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = b(i, j);
      for (int k = 0; k < i; ++k) s -= r(k, i) * r(k, j);
      if (i == j) {
        if (s <= 0.0) fail(Errc::b_not_spd, "Cholesky pivot not positive");
        r(i, i) = std::sqrt(s);
      } else {
        r(i, j) = s / r(i, i);
      }
    }
  }
  return r;
}

EigenDecomposition gen_sym_eigen(const Matrix& a, const Matrix& b) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n)
    fail(Errc::dimension_mismatch, "gen_sym_eigen size");
  const Matrix r = cholesky_upper(b);

  // C = R^{-T} A R^{-1} by triangular solves.
  Matrix c = a;
  for (int j = 0; j < n; ++j) {  // forward solve R^T X = A, column j
    for (int i = 0; i < n; ++i) {
      double s = c(i, j);
      for (int k = 0; k < i; ++k) s -= r(k, i) * c(k, j);
      c(i, j) = s / r(i, i);
    }
  }
  for (int i = 0; i < n; ++i) {  // solve row-wise: C R = X  =>  C = X R^{-1}
    for (int j = 0; j < n; ++j) {
      double s = c(i, j);
      for (int k = 0; k < j; ++k) s -= c(i, k) * r(k, j);
      c(i, j) = s / r(j, j);
    }
  }
  // Symmetrize against roundoff before Jacobi.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = c(j, i) = v;
    }

  EigenDecomposition e = sym_eigen(c);
  // Back-transform: V = R^{-1} Q, giving V^T B V = I.
  Matrix vec(n, n);
  for (int col = 0; col < n; ++col) {
    for (int i = n - 1; i >= 0; --i) {
      double s = e.eigenvectors(i, col);
      for (int k = i + 1; k < n; ++k) s -= r(i, k) * vec(k, col);
      vec(i, col) = s / r(i, i);
    }
  }
  e.eigenvectors = std::move(vec);
  return e;
}

Vector deterministic_start(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * i;
  const double s = norm2(v);
  for (double& x : v) x /= s;
  return v;
}

PowerResult power_largest_eigenvalue(int dim, const std::function<Vector(const Vector&)>& apply,
                                     double tol, int max_iter) {
  Vector v = deterministic_start(dim);
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = apply(v);
    const double nw = norm2(w);
    if (nw == 0.0) return {0.0, true};
    const double next = dot(v, w);  // Rayleigh quotient, ||v|| = 1
    for (size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
    if (it > 0 && std::fabs(next - lambda) <= tol * std::max(1.0, std::fabs(next))) {
      lambda = next;
      converged = true;
      break;
    }
    lambda = next;
  }
  return {lambda, converged};
}

double matrix_pnorm(const Matrix& m, P p) {
  switch (p) {
    case P::one: {
      double best = 0.0;
      for (int j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < m.rows(); ++i) s += std::fabs(m(i, j));
        best = std::max(best, s);
      }
      return best;
    }
    case P::inf: {
      double best = 0.0;
      for (int i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        const double* r = m.row(i);
        for (int j = 0; j < m.cols(); ++j) s += std::fabs(r[j]);
        best = std::max(best, s);
      }
      return best;
    }
    case P::two: {
      if (m.rows() == 0) return 0.0;
      auto apply = [&](const Vector& x) { return matvec_transposed(m, matvec(m, x)); };
      PowerResult r = power_largest_eigenvalue(m.cols(), apply, 1e-11, 50000);
      if (!r.converged) fail(Errc::no_convergence, "matrix_pnorm(2): power iteration stalled");
      return std::sqrt(std::max(0.0, r.value));
    }
  }
  fail(Errc::invalid_kind, "matrix_pnorm: bad p");
}

double cond2(const Matrix& m) {
  const int n = m.rows();
  LuFactorization lu(m);  // throws singular on pivot breakdown
  Matrix inv(n, n);
  Vector e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    Vector col = lu.solve(e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return matrix_pnorm(m, P::two) * matrix_pnorm(inv, P::two);
}

SpectralRadiusEstimate power_spectral_radius(const Matrix& m) {
  const int n = m.rows();
  Vector v = deterministic_start(n);
  double est = 0.0;
  int stable = 0;
  for (int it = 0; it < 50000; ++it) {
    Vector w = matvec(m, v);
    const double nw = norm2(w);
    if (nw == 0.0) return {0.0, true};  // reached the kernel; rho = 0 for nilpotent inputs
    if (std::fabs(nw - est) <= 1e-9 * std::max(1.0, nw)) {
      if (++stable >= 100) return {nw, true};
    } else {
      stable = 0;
    }
    est = nw;
    for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
  }
  return {est, false};
}

double polynomial_eval(std::span<const double> coefficients, double x) {
  double s = 0.0;
  for (double c : coefficients) s = s * x + c;
  return s;
}

double largest_real_root(std::span<const double> coefficients, double lo, double hi) {
  double flo = polynomial_eval(coefficients, lo);
  double fhi = polynomial_eval(coefficients, hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) fail(Errc::no_sign_change, "largest_real_root: no sign change on bracket");
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = polynomial_eval(coefficients, mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0) == (flo > 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qcflab
