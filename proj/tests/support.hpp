#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "shorn/linalg.hpp"

namespace testing {

using shorn::Complex;
using shorn::Matrix;
using shorn::RealVector;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline std::size_t pick(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng());
}

inline RealVector random_vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
  RealVector v(n);
  for (double& x : v) x = uniform(lo, hi);
  return v;
}

inline Matrix random_hermitian(std::size_t n) {
  Matrix a(n);
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = uniform(-2, 2);
    for (std::size_t c = r + 1; c < n; ++c) {
      a(r, c) = Complex(uniform(-1, 1), uniform(-1, 1));
      a(c, r) = std::conj(a(r, c));
    }
  }
  return a;
}

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline Matrix naive_adjoint(const Matrix& a) {
  Matrix b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) b(i, j) = std::conj(a(j, i));
  return b;
}

inline double max_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

/// Random unitary as a product of random complex plane rotations.
inline Matrix random_unitary(std::size_t n) {
  Matrix u = Matrix::identity(n);
  for (std::size_t s = 0; s < 3 * n * n; ++s) {
    if (n < 2) break;
    const std::size_t j = pick(0, n - 1);
    std::size_t k = pick(0, n - 2);
    if (k >= j) ++k;
    const double th = uniform(0, std::numbers::pi), ph = uniform(0, 2 * std::numbers::pi);
    Matrix g = Matrix::identity(n);
    g(j, j) = std::cos(th);
    g(j, k) = -std::sin(th) * std::polar(1.0, ph);
    g(k, j) = std::sin(th) * std::polar(1.0, -ph);
    g(k, k) = std::cos(th);
    u = naive_matmul(g, u);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Complex phase = std::polar(1.0, uniform(0, 2 * std::numbers::pi));
    for (std::size_t c = 0; c < n; ++c) u(j, c) *= phase;
  }
  return u;
}

/// Largest top-k sum by brute force over all k-subsets.
inline double subset_top_k(const RealVector& x, std::size_t k) {
  const std::size_t n = x.size();
  double best = -INFINITY;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s += x[i];
    best = std::max(best, s);
  }
  return best;
}

/// Mix coordinates j, k: (t y_j + (1-t) y_k, (1-t) y_j + t y_k).
inline void mix(RealVector& y, std::size_t j, std::size_t k, double t) {
  const double a = y[j], b = y[k];
  y[j] = t * a + (1 - t) * b;
  y[k] = (1 - t) * a + t * b;
}

/// y random and x obtained from y by random mixing and shuffling, so x ≺ y.
inline std::pair<RealVector, RealVector> random_majorized_pair(std::size_t n) {
  RealVector y = random_vector(n, -3, 3);
  RealVector x = y;
  const std::size_t steps = pick(0, 2 * n);
  for (std::size_t s = 0; s < steps && n > 1; ++s) {
    const std::size_t j = pick(0, n - 1);
    std::size_t k = pick(0, n - 2);
    if (k >= j) ++k;
    mix(x, j, k, uniform());
  }
  std::shuffle(x.begin(), x.end(), rng());
  return {x, y};
}

/// Random vector in [0,1]^n rescaled so that its sum is an integer.
inline RealVector random_integer_sum_vector(std::size_t n) {
  RealVector x = random_vector(n, 0, 1);
  if (pick(0, 4) == 0)
    for (double& v : x)
      if (pick(0, 2) == 0) v = pick(0, 1);
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  const double m = std::round(s);
  if (s > m) {
    for (double& v : x) v *= m / s;
  } else if (s < m) {
    const double cs = static_cast<double>(n) - s, cm = static_cast<double>(n) - m;
    for (double& v : x) v = 1.0 - (1.0 - v) * cm / cs;
  }
  return x;
}

/// Roots of a real cubic with three real roots, ascending, by the
/// trigonometric formula; used as an eigenvalue oracle for 3x3 Hermitian A.
inline RealVector hermitian3_eigenvalues(const Matrix& a) {
  const double a00 = a(0, 0).real(), a11 = a(1, 1).real(), a22 = a(2, 2).real();
  const double tr = a00 + a11 + a22;
  const double minors = a00 * a11 - std::norm(a(0, 1)) + a00 * a22 - std::norm(a(0, 2)) + a11 * a22 -
                        std::norm(a(1, 2));
  const double det = (a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                      a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                      a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)))
                         .real();
  // lambda^3 - tr lambda^2 + minors lambda - det; shift lambda = mu + tr/3.
  const double m = tr / 3.0;
  const double p = minors - tr * tr / 3.0;
  const double q = -det + minors * m - 2.0 * m * m * m;
  RealVector roots(3, m);
  if (p < 0) {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int j = 0; j < 3; ++j) roots[j] = m + r * std::cos(phi - 2.0 * std::numbers::pi * j / 3.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

} // namespace testing
