#pragma once
//
// Dense symmetric linear algebra for small dimensions: the ground truth the
// matrix-free path is checked against, plus the dense Newton and saddle-free
// Newton baselines.
//
#include <cstddef>
#include <functional>
#include <vector>

#include "sfhf/objectives.hpp"
#include "sfhf/operator.hpp"
#include "sfhf/vector.hpp"

namespace sfhf {

inline constexpr std::size_t kDenseMaxDim = 512;
/// Eigenvalues with |lambda| at or below this are treated as zero.
inline constexpr double kSingularThreshold = 1e-10;

/// Row-major rows x cols matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * cols_ + j]; }
  const double* row(std::size_t i) const noexcept { return a_.data() + i * cols_; }
  double* row(std::size_t i) noexcept { return a_.data() + i * cols_; }

  Vector multiply(const Vector& x) const;
  DenseMatrix multiply(const DenseMatrix& other) const;
  DenseMatrix transpose() const;
  double frobenius_norm() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

/// Square symmetric matrix, dim <= 512. Symmetrized ((M + M')/2) on
/// construction; rejects input asymmetric beyond 1e-12 relative.
class DenseSymMatrix {
 public:
  explicit DenseSymMatrix(DenseMatrix m);
  static DenseSymMatrix diagonal(const Vector& d);

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  const DenseMatrix& matrix() const noexcept { return m_; }

  Vector multiply(const Vector& x) const { return m_.multiply(x); }

 private:
  DenseMatrix m_;
};

struct EigenDecomposition {
  Vector eigenvalues;       // ascending
  DenseMatrix eigenvectors;  // column j pairs with eigenvalues[j]
};

/// Cyclic Jacobi eigensolver. Throws ConvergenceError if the off-diagonal
/// mass fails to vanish within the sweep budget.
EigenDecomposition eig_sym(const DenseSymMatrix& m);

/// U diag(f(lambda)) U'.
DenseSymMatrix spectral_function(const EigenDecomposition& eig,
                                 const std::function<double(double)>& f);

/// |M|: eigenvalues replaced by their absolute values.
DenseSymMatrix matrix_abs(const DenseSymMatrix& m);

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-8, 0) are
/// clamped to zero; anything more negative raises Error.
DenseSymMatrix matrix_sqrt_psd(const DenseSymMatrix& m);

SymmetricOperator dense_operator(const DenseSymMatrix& m);

/// H(theta) built column by column from dim() Hessian-vector products.
DenseSymMatrix materialize_hessian(const Objective& obj, const Vector& theta);

/// -alpha |H|^-1 grad f. Throws SingularError when some |lambda| <= 1e-10.
Vector sfn_dense_step(const Objective& obj, const Vector& theta, double alpha);

/// -alpha H^-1 grad f. Throws SingularError when some |lambda| <= 1e-10.
Vector newton_dense_step(const Objective& obj, const Vector& theta, double alpha);

}  // namespace sfhf
