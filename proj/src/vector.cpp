#include "sfhf/vector.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "sfhf/errors.hpp"
#include "sfhf/kernels.hpp"

namespace sfhf {
namespace {

std::atomic<std::int64_t> g_live{0};
std::atomic<std::int64_t> g_peak{0};

}  // namespace

void Vector::track_acquire() noexcept {
  const std::int64_t now = g_live.fetch_add(1, std::memory_order_relaxed) + 1;
  std::int64_t peak = g_peak.load(std::memory_order_relaxed);
  while (now > peak && !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
  }
}

void Vector::track_release() noexcept { g_live.fetch_sub(1, std::memory_order_relaxed); }

std::int64_t Vector::live_count() noexcept { return g_live.load(std::memory_order_relaxed); }
std::int64_t Vector::peak_live_count() noexcept { return g_peak.load(std::memory_order_relaxed); }
void Vector::reset_peak() noexcept {
  g_peak.store(g_live.load(std::memory_order_relaxed), std::memory_order_relaxed);
}

Vector::Vector(std::size_t dim) : Vector(dim, 0.0) {}

Vector::Vector(std::size_t dim, double fill) {
  if (dim == 0) throw DimensionError("Vector: dimension must be positive");
  if (!std::isfinite(fill)) throw NonFiniteError("Vector: non-finite fill value");
  data_.assign(dim, fill);
  track_acquire();
}

Vector::Vector(std::initializer_list<double> values)
    : Vector(std::span<const double>(values.begin(), values.size())) {}

Vector::Vector(std::span<const double> values) {
  if (values.empty()) throw DimensionError("Vector: dimension must be positive");
  data_.assign(values.begin(), values.end());
  track_acquire();
  check_finite("Vector construction");
}

Vector::Vector(const Vector& other) : data_(other.data_) {
  if (!data_.empty()) track_acquire();
}

Vector::Vector(Vector&& other) noexcept : data_(std::move(other.data_)) { other.data_.clear(); }

Vector& Vector::operator=(const Vector& other) {
  if (this == &other) return *this;
  const bool had = !data_.empty();
  data_ = other.data_;
  if (had && data_.empty()) track_release();
  if (!had && !data_.empty()) track_acquire();
  return *this;
}

Vector& Vector::operator=(Vector&& other) noexcept {
  if (this == &other) return *this;
  if (!data_.empty()) track_release();
  data_ = std::move(other.data_);
  other.data_.clear();
  return *this;
}

Vector::~Vector() {
  if (!data_.empty()) track_release();
}

void Vector::check_finite(const char* what) const {
  if (!kernels::active().all_finite(data_.data(), data_.size()))
    throw NonFiniteError(std::string(what) + ": non-finite entry");
}

Vector& Vector::add_scaled(double a, const Vector& x) {
  require_same_dim(*this, x, "add_scaled");
  if (!kernels::active().axpy(a, x.data(), data(), dim()))
    throw NonFiniteError("add_scaled: non-finite entry");
  return *this;
}

Vector& Vector::scale(double a) {
  if (!kernels::active().scal(a, data(), dim())) throw NonFiniteError("scale: non-finite entry");
  return *this;
}

Vector& Vector::assign_lincomb(double a, const Vector& x, double b, const Vector& y) {
  require_same_dim(x, y, "assign_lincomb");
  require_same_dim(*this, x, "assign_lincomb");
  if (!kernels::active().lincomb(a, x.data(), b, y.data(), data(), dim()))
    throw NonFiniteError("assign_lincomb: non-finite entry");
  return *this;
}

Vector& Vector::assign(const Vector& x) {
  require_same_dim(*this, x, "assign");
  std::copy(x.data_.begin(), x.data_.end(), data_.begin());
  return *this;
}

Vector& Vector::fill(double value) {
  if (!std::isfinite(value)) throw NonFiniteError("fill: non-finite value");
  std::fill(data_.begin(), data_.end(), value);
  return *this;
}

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.dim() != b.dim())
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
}

void require_finite(const Vector& v, const char* what) {
  if (!kernels::active().all_finite(v.data(), v.dim()))
    throw NonFiniteError(std::string(what) + ": non-finite entry");
}

double dot(const Vector& u, const Vector& w) {
  require_same_dim(u, w, "dot");
  const double s = kernels::active().dot(u.data(), w.data(), u.dim());
  if (!std::isfinite(s)) throw NonFiniteError("dot: non-finite result");
  return s;
}

double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

Vector axpy(double a, const Vector& x, const Vector& y) {
  require_same_dim(x, y, "axpy");
  Vector out(y);
  out.add_scaled(a, x);
  return out;
}

}  // namespace sfhf
