#include "sfhf/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sfhf/errors.hpp"
#include "sfhf/kernels.hpp"

namespace sfhf {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector DenseMatrix::multiply(const Vector& x) const {
  if (x.dim() != cols_) throw DimensionError("DenseMatrix::multiply: dimension mismatch");
  const auto& k = kernels::active();
  Vector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = k.dot(row(i), x.data(), cols_);
  require_finite(y, "DenseMatrix::multiply");
  return y;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
  if (cols_ != other.rows_) throw DimensionError("DenseMatrix::multiply: shape mismatch");
  const auto& k = kernels::active();
  DenseMatrix c(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t l = 0; l < cols_; ++l)
      k.axpy((*this)(i, l), other.row(l), c.row(i), other.cols_);
  return c;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const {
  return std::sqrt(kernels::active().dot(a_.data(), a_.data(), a_.size()));
}

DenseSymMatrix::DenseSymMatrix(DenseMatrix m) : m_(std::move(m)) {
  const std::size_t n = m_.rows();
  if (n == 0 || m_.cols() != n) throw DimensionError("DenseSymMatrix: matrix must be square");
  if (n > kDenseMaxDim)
    throw DimensionError("DenseSymMatrix: dimension " + std::to_string(n) + " exceeds the cap of " +
                         std::to_string(kDenseMaxDim));
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(m_(i, j))) throw NonFiniteError("DenseSymMatrix: non-finite entry");
      scale = std::max(scale, std::abs(m_(i, j)));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(m_(i, j) - m_(j, i)) > 1e-12 * std::max(1.0, scale))
        throw Error("DenseSymMatrix: input is not symmetric");
      const double avg = 0.5 * (m_(i, j) + m_(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
}

DenseSymMatrix DenseSymMatrix::diagonal(const Vector& d) {
  DenseMatrix m(d.dim(), d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) m(i, i) = d[i];
  return DenseSymMatrix(std::move(m));
}

EigenDecomposition eig_sym(const DenseSymMatrix& input) {
  const std::size_t n = input.dim();
  DenseMatrix a = input.matrix();
  DenseMatrix v = DenseMatrix::identity(n);

  const double total = a.frobenius_norm();
  constexpr int kMaxSweeps = 100;
  bool done = (n == 1) || total == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !done; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= 1e-15 * total) {
      done = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle from the 2x2 symmetric Schur decomposition.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!done) throw ConvergenceError("eig_sym: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenDecomposition out{Vector(n), DenseMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, j) = v(k, order[j]);
  }
  return out;
}

DenseSymMatrix spectral_function(const EigenDecomposition& eig,
                                 const std::function<double(double)>& f) {
  const std::size_t n = eig.eigenvalues.dim();
  const DenseMatrix& u = eig.eigenvectors;
  // U diag(f) U' accumulated as a sum of rank-one terms, row by row.
  DenseMatrix scaled_ut(n, n);  // row j = f(lambda_j) * (column j of U)'
  for (std::size_t j = 0; j < n; ++j) {
    const double fj = f(eig.eigenvalues[j]);
    for (std::size_t k = 0; k < n; ++k) scaled_ut(j, k) = fj * u(k, j);
  }
  DenseMatrix r = u.multiply(scaled_ut);
  // Exact symmetry; the product is symmetric only to rounding.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (r(i, j) + r(j, i));
      r(i, j) = avg;
      r(j, i) = avg;
    }
  return DenseSymMatrix(std::move(r));
}

DenseSymMatrix matrix_abs(const DenseSymMatrix& m) {
  return spectral_function(eig_sym(m), [](double x) { return std::abs(x); });
}

DenseSymMatrix matrix_sqrt_psd(const DenseSymMatrix& m) {
  const EigenDecomposition eig = eig_sym(m);
  for (double x : eig.eigenvalues.values())
    if (x < -1e-8) {
      std::ostringstream msg;
      msg << "matrix_sqrt_psd: matrix is not positive semi-definite (eigenvalue " << x << ")";
      throw Error(msg.str());
    }
  return spectral_function(eig, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

SymmetricOperator dense_operator(const DenseSymMatrix& m) {
  return SymmetricOperator(m.dim(), [m](const Vector& in, Vector& out) {
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < m.dim(); ++i) out[i] = k.dot(m.matrix().row(i), in.data(), in.dim());
  });
}

DenseSymMatrix materialize_hessian(const Objective& obj, const Vector& theta) {
  const std::size_t n = obj.dim();
  if (n > kDenseMaxDim)
    throw DimensionError("materialize_hessian: dimension " + std::to_string(n) +
                         " exceeds the dense cap of " + std::to_string(kDenseMaxDim));
  DenseMatrix h(n, n);
  Vector e(n), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    obj.hvp(theta, e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) h(i, j) = col[i];
  }
  // Analytic Hessians are symmetric to rounding only; average the halves.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (h(i, j) + h(j, i));
      h(i, j) = avg;
      h(j, i) = avg;
    }
  return DenseSymMatrix(std::move(h));
}

namespace {

Vector spectral_step(const Objective& obj, const Vector& theta, double alpha, bool absolute,
                     const char* what) {
  const EigenDecomposition eig = eig_sym(materialize_hessian(obj, theta));
  std::vector<double> tiny;
  for (double x : eig.eigenvalues.values())
    if (std::abs(x) <= kSingularThreshold) tiny.push_back(x);
  if (!tiny.empty()) {
    std::ostringstream msg;
    msg << what << ": Hessian is singular; near-zero eigenvalues:";
    for (double x : tiny) msg << ' ' << x;
    throw SingularError(msg.str());
  }
  const Vector g = obj.grad(theta);
  const std::size_t n = g.dim();
  const DenseMatrix& u = eig.eigenvectors;
  // z = diag(1/f(lambda)) U' g, then step = -alpha U z.
  Vector z(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += u(k, j) * g[k];
    const double lam = eig.eigenvalues[j];
    z[j] = s / (absolute ? std::abs(lam) : lam);
  }
  Vector step = u.multiply(z);
  step.scale(-alpha);
  return step;
}

}  // namespace

Vector sfn_dense_step(const Objective& obj, const Vector& theta, double alpha) {
  return spectral_step(obj, theta, alpha, true, "sfn_dense_step");
}

Vector newton_dense_step(const Objective& obj, const Vector& theta, double alpha) {
  return spectral_step(obj, theta, alpha, false, "newton_dense_step");
}

}  // namespace sfhf
