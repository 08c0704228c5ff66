#pragma once
//
// Test-only reference computations. Deliberately plain loops over
// std::vector so they share no code path with the library kernels.
//
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sfhf/objectives.hpp"
#include "sfhf/operator.hpp"
#include "sfhf/vector.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat zeros(std::size_t n) { return Mat(n, std::vector<double>(n, 0.0)); }

inline Mat matmul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b[0].size();
  Mat c(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

inline Mat transpose(const Mat& a) {
  Mat t(a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline std::vector<double> matvec(const Mat& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline double frob(const Mat& a) {
  double s = 0.0;
  for (const auto& r : a)
    for (double x : r) s += x * x;
  return std::sqrt(s);
}

inline Mat sub(const Mat& a, const Mat& b) {
  Mat c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) c[i][j] -= b[i][j];
  return c;
}

inline double norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double rel_err(const std::vector<double>& got, const std::vector<double>& want) {
  std::vector<double> d(got.size());
  for (std::size_t i = 0; i < got.size(); ++i) d[i] = got[i] - want[i];
  return norm(d) / norm(want);
}

inline std::vector<double> to_std(const sfhf::Vector& v) {
  return std::vector<double>(v.values().begin(), v.values().end());
}

inline sfhf::Vector to_vec(const std::vector<double>& v) {
  return sfhf::Vector(std::span<const double>(v));
}

inline double rel_err(const sfhf::Vector& got, const std::vector<double>& want) {
  return rel_err(to_std(got), want);
}

// std::mt19937_64 + std::normal_distribution: a different generator path
// from the library's Rng on purpose.
struct Gen {
  explicit Gen(std::uint64_t seed) : eng(seed) {}
  double normal() { return nd(eng); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  std::vector<double> normal_vec(std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = normal();
    return v;
  }
  std::mt19937_64 eng;
  std::normal_distribution<double> nd{0.0, 1.0};
};

// Orthogonal matrix (columns orthonormal) by classical Gram-Schmidt, twice.
inline Mat random_orthogonal(std::size_t n, Gen& g) {
  Mat q(n, std::vector<double>(n));
  for (auto& r : q)
    for (double& x : r) x = g.normal();
  // Work on columns.
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += q[i][k] * q[i][j];
        for (std::size_t i = 0; i < n; ++i) q[i][j] -= d * q[i][k];
      }
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) nn += q[i][j] * q[i][j];
    nn = std::sqrt(nn);
    for (std::size_t i = 0; i < n; ++i) q[i][j] /= nn;
  }
  return q;
}

// U diag(f(lambda)) U'
inline Mat from_spectrum(const Mat& u, const std::vector<double>& lambda,
                         const std::function<double(double)>& f = [](double x) { return x; }) {
  const std::size_t n = u.size();
  Mat m = zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += u[i][k] * f(lambda[k]) * u[j][k];
      m[i][j] = s;
    }
  return m;
}

struct SpectralMatrix {
  Mat u;
  std::vector<double> lambda;
  Mat m;
};

inline SpectralMatrix with_spectrum(std::vector<double> lambda, Gen& g) {
  SpectralMatrix s;
  s.u = random_orthogonal(lambda.size(), g);
  s.lambda = std::move(lambda);
  s.m = from_spectrum(s.u, s.lambda);
  for (std::size_t i = 0; i < s.m.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) s.m[i][j] = s.m[j][i];
  return s;
}

// Log-uniform spectrum in [hi / cond, hi] including both endpoints.
inline std::vector<double> spd_spectrum(std::size_t n, double hi, double cond, Gen& g) {
  std::vector<double> l(n);
  for (double& x : l) x = hi * std::exp(-g.uniform(0.0, std::log(cond)));
  l[0] = hi;
  if (n > 1) l[1] = hi / cond;
  return l;
}

inline Mat random_symmetric(std::size_t n, Gen& g) {
  Mat m = zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m[i][j] = m[j][i] = g.normal();
  return m;
}

inline sfhf::SymmetricOperator as_operator(const Mat& m) {
  return sfhf::SymmetricOperator(m.size(), [m](const sfhf::Vector& in, sfhf::Vector& out) {
    const auto y = matvec(m, to_std(in));
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i];
  });
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Mat a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

inline double fd_step(double x) { return std::cbrt(2.220446049250313e-16) * (1.0 + std::abs(x)); }

// Central finite-difference gradient of f.
inline std::vector<double> fd_gradient(const sfhf::Objective& obj, const sfhf::Vector& theta) {
  std::vector<double> g(theta.dim());
  sfhf::Vector p = theta;
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    const double h = fd_step(theta[i]);
    p[i] = theta[i] + h;
    const double fp = obj.eval(p);
    p[i] = theta[i] - h;
    const double fm = obj.eval(p);
    p[i] = theta[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Central finite difference of grad along v: (g(theta + h v) - g(theta - h v)) / 2h.
inline std::vector<double> fd_hvp(const sfhf::Objective& obj, const sfhf::Vector& theta,
                                  const sfhf::Vector& v) {
  double scale = 0.0;
  for (double x : theta.values()) scale = std::max(scale, std::abs(x));
  const double h = fd_step(scale) / std::max(1.0, oracle::norm(to_std(v)));
  sfhf::Vector tp = theta, tm = theta;
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    tp[i] += h * v[i];
    tm[i] -= h * v[i];
  }
  const auto gp = to_std(obj.grad(tp));
  const auto gm = to_std(obj.grad(tm));
  std::vector<double> out(gp.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (gp[i] - gm[i]) / (2.0 * h);
  return out;
}

}  // namespace oracle
