#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shorn/linalg.hpp"

namespace shorn {

/// One T-transform: mixes coordinates j and k (0-based) with weight t,
///   (Ty)_j = t y_j + (1-t) y_k,  (Ty)_k = (1-t) y_j + t y_k.
struct TTransform {
  std::size_t j = 0;
  std::size_t k = 1;
  double t = 1.0;

  void validate(std::size_t n) const;
  friend bool operator==(const TTransform&, const TTransform&) = default;
};

/// Real square matrix with non-negative entries and unit row/column sums,
/// each up to the tolerance it was validated with.
class DoublyStochasticMatrix {
public:
  DoublyStochasticMatrix(std::size_t n, std::vector<double> entries, double tol = 1e-10);

  static DoublyStochasticMatrix identity(std::size_t n);
  static DoublyStochasticMatrix uniform(std::size_t n);
  static DoublyStochasticMatrix from_t_transform(const TTransform& t, std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * n_ + c]; }

  /// Max deviation of row/column sums from 1 and of negative entries from 0.
  double residual() const;

private:
  std::size_t n_;
  std::vector<double> entries_;
};

DoublyStochasticMatrix compose(const DoublyStochasticMatrix& a, const DoublyStochasticMatrix& b);

/// Sum of the k largest (smallest) entries, 1 <= k <= n.
double top_k_sum(std::span<const double> x, std::size_t k);
double bottom_k_sum(std::span<const double> x, std::size_t k);

/// Per-k partial-sum slacks top_k(y) - top_k(x) for k = 1..n; the last
/// entry is the total difference sum(y) - sum(x).
RealVector majorization_slacks(std::span<const double> x, std::span<const double> y);

/// x is majorised by y (x ≺ y): top-k sums dominated for k < n, equal totals.
bool majorizes(std::span<const double> x, std::span<const double> y, double tol = 1e-9);

/// Independent check through sum_j |x_j - t| <= sum_j |y_j - t| at every
/// breakpoint t, plus equality of totals.
bool majorizes_abs_oracle(std::span<const double> x, std::span<const double> y, double tol = 1e-9);

RealVector apply_t_transform(const TTransform& t, std::span<const double> x);

/// Output of decompose_t_transforms. Replaying `transforms` on y (in its own
/// coordinates) yields a vector r with r[p] == x[permutation[p]].
struct TDecomposition {
  std::vector<TTransform> transforms;
  std::vector<std::size_t> permutation;
};

/// Constructive x ≺ y  =>  x = T_r ... T_1 y with r <= n-1.
TDecomposition decompose_t_transforms(std::span<const double> x, std::span<const double> y,
                                      double tol = 1e-9);

RealVector replay_t_transforms(std::span<const TTransform> ts, std::span<const double> y);

/// A y. The result is majorised by y.
RealVector apply_doubly_stochastic(const DoublyStochasticMatrix& a, std::span<const double> y);

/// For x in [0,1]^n with sum k + delta: (1,...,1, delta, 0,...,0), which
/// majorises x. delta <= integer_tol is treated as zero.
RealVector flag_majorant(std::span<const double> x, double integer_tol = 1e-9);

/// Concentration hypotheses: x' >= x, y >= y' entrywise,
/// min x >= max y, equal totals. When they hold, (x, y) ≺ (x', y').
bool verify_concentration(std::span<const double> x, std::span<const double> x_prime,
                          std::span<const double> y, std::span<const double> y_prime,
                          double tol = 1e-9);

/// B_jk = |U_jk|^2.
DoublyStochasticMatrix orthostochastic_from_unitary(const Matrix& u, double tol = 1e-10);

} // namespace shorn
