#include "sfhf/kernels.hpp"

#include <cmath>

namespace sfhf::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

bool axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += a * x[i];
    ok &= std::isfinite(y[i]);
  }
  return ok;
}

bool scal_scalar(double a, double* x, std::size_t n) {
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] *= a;
    ok &= std::isfinite(x[i]);
  }
  return ok;
}

bool lincomb_scalar(double a, const double* x, double b, const double* y, double* w,
                    std::size_t n) {
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = a * x[i] + b * y[i];
    ok &= std::isfinite(w[i]);
  }
  return ok;
}

bool hadamard_scalar(const double* x, const double* y, double* w, std::size_t n) {
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = x[i] * y[i];
    ok &= std::isfinite(w[i]);
  }
  return ok;
}

bool all_finite_scalar(const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

constexpr KernelTable kScalar{Backend::Scalar, "scalar",      &dot_scalar,
                              &axpy_scalar,    &scal_scalar,  &lincomb_scalar,
                              &hadamard_scalar, &all_finite_scalar};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace sfhf::kernels
