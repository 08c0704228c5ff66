#pragma once
//
// Data-parallel inner loops shared by every module.
//
// Each backend provides the same table of kernels. The scalar table is the
// reference; SIMD tables must produce bit-identical results for elementwise
// kernels and agree to rounding for reductions (dot, sum of squares), where
// the summation order differs.
//
#include <cstddef>
#include <string_view>

namespace sfhf::kernels {

enum class Backend { Scalar, Avx2, Neon };

// Elementwise kernels return true iff every value they wrote is finite, so
// callers need no second pass over the output.
struct KernelTable {
  Backend backend;
  std::string_view name;

  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  bool (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= a
  bool (*scal)(double a, double* x, std::size_t n);
  // w[i] = a * x[i] + b * y[i]   (w may alias x or y)
  bool (*lincomb)(double a, const double* x, double b, const double* y, double* w,
                  std::size_t n);
  // w[i] = x[i] * y[i]   (w may alias x or y)
  bool (*hadamard)(const double* x, const double* y, double* w, std::size_t n);
  // true iff no entry is NaN or +-Inf
  bool (*all_finite)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the backend was not compiled in or the CPU lacks it.
const KernelTable* table(Backend backend);

// Best table for this CPU; chosen once per process.
const KernelTable& active();

}  // namespace sfhf::kernels
