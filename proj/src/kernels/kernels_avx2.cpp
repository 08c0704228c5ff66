// Compiled with -mavx2 on x86-64 only; reached through the dispatcher after a
// CPU feature check. No FMA: elementwise results must match the scalar table
// bit for bit.
#include "kernels_impl.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace sfhf::kernels {
namespace {

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

// Exponent bits all set <=> NaN or Inf. Accumulates into `bad`.
inline __m256i flag_nonfinite(__m256i bad, __m256d v) {
  const __m256i exp_mask = _mm256_set1_epi64x(0x7ff0000000000000LL);
  const __m256i bits = _mm256_castpd_si256(v);
  return _mm256_or_si256(bad, _mm256_cmpeq_epi64(_mm256_and_si256(bits, exp_mask), exp_mask));
}

inline bool none_flagged(__m256i bad) { return _mm256_testz_si256(bad, bad) != 0; }

bool axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  __m256i bad = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, vy);
    bad = flag_nonfinite(bad, vy);
  }
  bool ok = none_flagged(bad);
  for (; i < n; ++i) {
    y[i] += a * x[i];
    ok &= std::isfinite(y[i]);
  }
  return ok;
}

bool scal_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  __m256i bad = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(x + i, v);
    bad = flag_nonfinite(bad, v);
  }
  bool ok = none_flagged(bad);
  for (; i < n; ++i) {
    x[i] *= a;
    ok &= std::isfinite(x[i]);
  }
  return ok;
}

bool lincomb_avx2(double a, const double* x, double b, const double* y, double* w,
                  std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  __m256i bad = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    const __m256d v = _mm256_add_pd(ax, by);
    _mm256_storeu_pd(w + i, v);
    bad = flag_nonfinite(bad, v);
  }
  bool ok = none_flagged(bad);
  for (; i < n; ++i) {
    w[i] = a * x[i] + b * y[i];
    ok &= std::isfinite(w[i]);
  }
  return ok;
}

bool hadamard_avx2(const double* x, const double* y, double* w, std::size_t n) {
  __m256i bad = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(w + i, v);
    bad = flag_nonfinite(bad, v);
  }
  bool ok = none_flagged(bad);
  for (; i < n; ++i) {
    w[i] = x[i] * y[i];
    ok &= std::isfinite(w[i]);
  }
  return ok;
}

bool all_finite_avx2(const double* x, std::size_t n) {
  __m256i bad = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) bad = flag_nonfinite(bad, _mm256_loadu_pd(x + i));
  if (!none_flagged(bad)) return false;
  for (; i < n; ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

constexpr KernelTable kAvx2{Backend::Avx2, "avx2",      &dot_avx2,     &axpy_avx2,
                            &scal_avx2,    &lincomb_avx2, &hadamard_avx2, &all_finite_avx2};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace sfhf::kernels
