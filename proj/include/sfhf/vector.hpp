#pragma once
//
// Dense float64 vector with finite-entry checking and a process-wide live
// instance tally (used to verify the O(m) memory footprint of the solvers).
//
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace sfhf {

class Vector {
 public:
  Vector() = default;
  /// Zero vector of dimension dim (dim >= 1).
  explicit Vector(std::size_t dim);
  Vector(std::size_t dim, double fill);
  Vector(std::initializer_list<double> values);
  /// Throws NonFiniteError if any value is NaN/Inf.
  explicit Vector(std::span<const double> values);

  Vector(const Vector& other);
  Vector(Vector&& other) noexcept;
  Vector& operator=(const Vector& other);
  Vector& operator=(Vector&& other) noexcept;
  ~Vector();

  std::size_t dim() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double operator[](std::size_t i) const noexcept { return data_[i]; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }
  const double* data() const noexcept { return data_.data(); }
  double* data() noexcept { return data_.data(); }

  // In-place arithmetic. All of these verify the result is finite.
  Vector& add_scaled(double a, const Vector& x);         // this += a*x
  Vector& scale(double a);                               // this *= a
  Vector& assign_lincomb(double a, const Vector& x, double b, const Vector& y);
  Vector& assign(const Vector& x);                       // copy without reallocating
  Vector& fill(double value);

  bool operator==(const Vector& other) const noexcept { return data_ == other.data_; }

  /// Number of Vector instances currently holding storage.
  static std::int64_t live_count() noexcept;
  /// High-water mark of live_count() since the last reset_peak().
  static std::int64_t peak_live_count() noexcept;
  static void reset_peak() noexcept;

 private:
  void track_acquire() noexcept;
  void track_release() noexcept;
  void check_finite(const char* what) const;

  std::vector<double> data_;
};

double dot(const Vector& u, const Vector& w);
double norm(const Vector& v);
/// Returns a*x + y.
Vector axpy(double a, const Vector& x, const Vector& y);
void require_same_dim(const Vector& a, const Vector& b, const char* what);
void require_finite(const Vector& v, const char* what);

}  // namespace sfhf
