// AArch64 only. NEON is part of the base ISA there, so no feature check.
#include "kernels_impl.hpp"

#include <arm_neon.h>

#include <cmath>

namespace sfhf::kernels {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  acc0 = vaddq_f64(acc0, acc1);
  double s = vgetq_lane_f64(acc0, 0) + vgetq_lane_f64(acc0, 1);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

// Exponent bits all set <=> NaN or Inf. Accumulates into `bad`.
inline uint64x2_t flag_nonfinite(uint64x2_t bad, float64x2_t v) {
  const uint64x2_t exp_mask = vdupq_n_u64(0x7ff0000000000000ULL);
  return vorrq_u64(bad, vceqq_u64(vandq_u64(vreinterpretq_u64_f64(v), exp_mask), exp_mask));
}

inline bool none_flagged(uint64x2_t bad) { return (vgetq_lane_u64(bad, 0) | vgetq_lane_u64(bad, 1)) == 0; }

bool axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  uint64x2_t bad = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i)));
    vst1q_f64(y + i, v);
    bad = flag_nonfinite(bad, v);
  }
  bool ok = none_flagged(bad);
  for (; i < n; ++i) {
    y[i] += a * x[i];
    ok &= std::isfinite(y[i]);
  }
  return ok;
}

bool scal_neon(double a, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  uint64x2_t bad = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(x + i, v);
    bad = flag_nonfinite(bad, v);
  }
  bool ok = none_flagged(bad);
  for (; i < n; ++i) {
    x[i] *= a;
    ok &= std::isfinite(x[i]);
  }
  return ok;
}

bool lincomb_neon(double a, const double* x, double b, const double* y, double* w,
                  std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  uint64x2_t bad = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vaddq_f64(vmulq_f64(va, vld1q_f64(x + i)), vmulq_f64(vb, vld1q_f64(y + i)));
    vst1q_f64(w + i, v);
    bad = flag_nonfinite(bad, v);
  }
  bool ok = none_flagged(bad);
  for (; i < n; ++i) {
    w[i] = a * x[i] + b * y[i];
    ok &= std::isfinite(w[i]);
  }
  return ok;
}

bool hadamard_neon(const double* x, const double* y, double* w, std::size_t n) {
  uint64x2_t bad = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    vst1q_f64(w + i, v);
    bad = flag_nonfinite(bad, v);
  }
  bool ok = none_flagged(bad);
  for (; i < n; ++i) {
    w[i] = x[i] * y[i];
    ok &= std::isfinite(w[i]);
  }
  return ok;
}

bool all_finite_neon(const double* x, std::size_t n) {
  uint64x2_t bad = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) bad = flag_nonfinite(bad, vld1q_f64(x + i));
  if (!none_flagged(bad)) return false;
  for (; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

constexpr KernelTable kNeon{Backend::Neon, "neon",      &dot_neon,     &axpy_neon,
                            &scal_neon,    &lincomb_neon, &hadamard_neon, &all_finite_neon};

}  // namespace

const KernelTable& neon_table() { return kNeon; }

}  // namespace sfhf::kernels
