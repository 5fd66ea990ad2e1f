#include "shorn/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "shorn/errors.hpp"

namespace shorn {

namespace {

void require_finite(std::span<const double> x, const char* what) {
  if (x.empty()) throw DimensionError(std::string(what) + ": vector must be non-empty");
  for (double v : x)
    if (!std::isfinite(v)) throw InputError(std::string(what) + ": entries must be finite");
}

void require_same_length(std::span<const double> x, std::span<const double> y, const char* what) {
  require_finite(x, what);
  require_finite(y, what);
  if (x.size() != y.size())
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()) + ")");
}

RealVector sorted_desc(std::span<const double> x) {
  RealVector v(x.begin(), x.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

double sum(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

} // namespace

void TTransform::validate(std::size_t n) const {
  if (j >= n || k >= n) throw DimensionError("T-transform index out of range");
  if (j == k) throw InputError("T-transform needs two distinct indices");
  if (!(t >= 0.0 && t <= 1.0)) throw InputError("T-transform weight must lie in [0,1]");
}

DoublyStochasticMatrix::DoublyStochasticMatrix(std::size_t n, std::vector<double> entries,
                                               double tol)
    : n_(n), entries_(std::move(entries)) {
  if (n == 0 || entries_.size() != n * n)
    throw DimensionError("doubly stochastic matrix needs n*n entries");
  for (double v : entries_)
    if (!std::isfinite(v)) throw InputError("doubly stochastic entries must be finite");
  const double r = residual();
  if (r > tol)
    throw PreconditionError("matrix is not doubly stochastic (residual " + std::to_string(r) + ")",
                            r);
}

DoublyStochasticMatrix DoublyStochasticMatrix::identity(std::size_t n) {
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return {n, std::move(e)};
}

DoublyStochasticMatrix DoublyStochasticMatrix::uniform(std::size_t n) {
  return {n, std::vector<double>(n * n, 1.0 / static_cast<double>(n))};
}

DoublyStochasticMatrix DoublyStochasticMatrix::from_t_transform(const TTransform& t,
                                                                std::size_t n) {
  t.validate(n);
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  e[t.j * n + t.j] = t.t;
  e[t.k * n + t.k] = t.t;
  e[t.j * n + t.k] = 1.0 - t.t;
  e[t.k * n + t.j] = 1.0 - t.t;
  return {n, std::move(e)};
}

double DoublyStochasticMatrix::residual() const {
  double r = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      row += entries_[i * n_ + j];
      col += entries_[j * n_ + i];
      r = std::max(r, -entries_[i * n_ + j]);
    }
    r = std::max({r, std::abs(row - 1.0), std::abs(col - 1.0)});
  }
  return r;
}

DoublyStochasticMatrix compose(const DoublyStochasticMatrix& a, const DoublyStochasticMatrix& b) {
  if (a.size() != b.size()) throw DimensionError("compose: dimension mismatch");
  const std::size_t n = a.size();
  std::vector<double> e(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < n; ++c) e[r * n + c] += a(r, k) * b(k, c);
  return {n, std::move(e)};
}

double top_k_sum(std::span<const double> x, std::size_t k) {
  require_finite(x, "top_k_sum");
  if (k < 1 || k > x.size()) throw DimensionError("top_k_sum: k out of range");
  const RealVector v = sorted_desc(x);
  return std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
}

double bottom_k_sum(std::span<const double> x, std::size_t k) {
  require_finite(x, "bottom_k_sum");
  if (k < 1 || k > x.size()) throw DimensionError("bottom_k_sum: k out of range");
  RealVector v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
}

RealVector majorization_slacks(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, "majorization_slacks");
  const RealVector xs = sorted_desc(x), ys = sorted_desc(y);
  RealVector slack(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    slack[k] = sy - sx;
  }
  slack.back() = sum(y) - sum(x);
  return slack;
}

bool majorizes(std::span<const double> x, std::span<const double> y, double tol) {
  const RealVector slack = majorization_slacks(x, y);
  for (std::size_t k = 0; k + 1 < slack.size(); ++k)
    if (slack[k] < -tol) return false;
  return std::abs(slack.back()) <= tol;
}

bool majorizes_abs_oracle(std::span<const double> x, std::span<const double> y, double tol) {
  require_same_length(x, y, "majorizes_abs_oracle");
  if (std::abs(sum(x) - sum(y)) > tol) return false;
  auto spread = [](std::span<const double> v, double t) {
    double s = 0.0;
    for (double e : v) s += std::abs(e - t);
    return s;
  };
  // Both sides are piecewise linear in t with kinks only at entries, so
  // checking at breakpoints covers every t.
  for (auto pts : {x, y})
    for (double t : pts)
      if (spread(x, t) > spread(y, t) + tol) return false;
  return true;
}

RealVector apply_t_transform(const TTransform& t, std::span<const double> x) {
  t.validate(x.size());
  RealVector out(x.begin(), x.end());
  out[t.j] = t.t * x[t.j] + (1.0 - t.t) * x[t.k];
  out[t.k] = (1.0 - t.t) * x[t.j] + t.t * x[t.k];
  return out;
}

RealVector replay_t_transforms(std::span<const TTransform> ts, std::span<const double> y) {
  RealVector w(y.begin(), y.end());
  for (const auto& t : ts) w = apply_t_transform(t, w);
  return w;
}

TDecomposition decompose_t_transforms(std::span<const double> x, std::span<const double> y,
                                      double tol) {
  require_same_length(x, y, "decompose_t_transforms");
  if (!majorizes(x, y, tol))
    throw PreconditionError("decompose_t_transforms: x is not majorised by y");
  const std::size_t n = x.size();

  std::vector<std::size_t> x_order(n);
  std::iota(x_order.begin(), x_order.end(), 0);
  std::stable_sort(x_order.begin(), x_order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });

  TDecomposition out;
  out.permutation.assign(n, 0);
  RealVector w(y.begin(), y.end());
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);

  for (std::size_t step = 0; step < n; ++step) {
    const double target = x[x_order[step]];
    std::stable_sort(active.begin(), active.end(),
                     [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    const std::size_t top = active.front();
    if (active.size() > 1 && w[top] > target) {
      // first position (in the sorted remainder) with w <= target
      auto it = std::find_if(active.begin(), active.end(),
                             [&](std::size_t p) { return w[p] <= target; });
      if (it == active.end()) --it; // rounding: target sits just below the minimum
      const std::size_t low = *it;
      const double gap = w[top] - w[low];
      const double t = gap > 0.0 ? std::clamp((target - w[low]) / gap, 0.0, 1.0) : 1.0;
      const TTransform tt{top, low, t};
      w = apply_t_transform(tt, w);
      out.transforms.push_back(tt);
    }
    out.permutation[top] = x_order[step];
    active.erase(active.begin());
  }
  return out;
}

RealVector apply_doubly_stochastic(const DoublyStochasticMatrix& a, std::span<const double> y) {
  require_finite(y, "apply_doubly_stochastic");
  if (a.size() != y.size()) throw DimensionError("apply_doubly_stochastic: dimension mismatch");
  RealVector out(y.size(), 0.0);
  for (std::size_t r = 0; r < y.size(); ++r)
    for (std::size_t c = 0; c < y.size(); ++c) out[r] += a(r, c) * y[c];
  return out;
}

RealVector flag_majorant(std::span<const double> x, double integer_tol) {
  require_finite(x, "flag_majorant");
  for (double v : x)
    if (v < 0.0 || v > 1.0) throw InputError("flag_majorant: entries must lie in [0,1]");
  const double s = sum(x);
  const auto k = static_cast<std::size_t>(std::floor(s + integer_tol));
  const double delta = s - static_cast<double>(k);
  RealVector out(x.size(), 0.0);
  for (std::size_t i = 0; i < k && i < out.size(); ++i) out[i] = 1.0;
  if (delta > integer_tol && k < out.size()) out[k] = delta;
  return out;
}

bool verify_concentration(std::span<const double> x, std::span<const double> x_prime,
                          std::span<const double> y, std::span<const double> y_prime,
                          double tol) {
  if (x.size() != x_prime.size() || y.size() != y_prime.size())
    throw DimensionError("verify_concentration: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x_prime[i] < x[i] - tol) return false;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] < y_prime[i] - tol) return false;
  if (!x.empty() && !y.empty() &&
      *std::min_element(x.begin(), x.end()) < *std::max_element(y.begin(), y.end()) - tol)
    return false;
  return std::abs(sum(x_prime) + sum(y_prime) - sum(x) - sum(y)) <= tol;
}

DoublyStochasticMatrix orthostochastic_from_unitary(const Matrix& u, double tol) {
  const double r = unitary_residual(u);
  if (r > tol) throw PreconditionError("orthostochastic_from_unitary: input is not unitary", r);
  const std::size_t n = u.size();
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = std::norm(u(i, j));
  return {n, std::move(e), std::max(tol, 4.0 * r)};
}

} // namespace shorn
