#include "shorn/schur_horn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "shorn/errors.hpp"

namespace shorn {

namespace {

Matrix two_by_two(Complex a, Complex b, Complex c, Complex d) {
  return Matrix(2, {a, b, c, d});
}

double phase_residual(Complex c, Complex a12, Complex a21) {
  return std::abs(c * a12 + std::conj(c) * a21);
}

// Apply the decomposition's rotations to `a`, accumulating them into `u`
// (u <- G u), then permute coordinates so that the diagonal lines up with x.
void realize(Matrix& a, Matrix& u, const TDecomposition& dec) {
  for (const auto& t : dec.transforms) {
    const std::size_t j = std::min(t.j, t.k), k = std::max(t.j, t.k);
    const Matrix block = two_by_two(a(j, j), a(j, k), a(k, j), a(k, k));
    const Matrix g = kadison_rotation(block, t.t);
    rotate_conjugate(a, j, k, g);
    rotate_rows(u, j, k, g);
  }
  const std::size_t n = a.size();
  Matrix pa(n), pu(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      pa(dec.permutation[p], dec.permutation[q]) = a(p, q);
      pu(dec.permutation[p], q) = u(p, q);
    }
  }
  // Hermitian part, with an exactly real diagonal.
  for (std::size_t r = 0; r < n; ++r) {
    pa(r, r) = pa(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const Complex h = 0.5 * (pa(r, c) + std::conj(pa(c, r)));
      pa(r, c) = h;
      pa(c, r) = std::conj(h);
    }
  }
  a = std::move(pa);
  u = std::move(pu);
}

void check_diagonal(const Matrix& a, std::span<const double> x, double allowed, const char* op) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(a(i, i).real() - x[i]));
  if (worst > allowed)
    throw NumericalError(std::string(op) + ": diagonal residual " + std::to_string(worst) +
                         " exceeds tolerance");
}

double total_gap(std::span<const double> x, std::span<const double> y) {
  return std::abs(std::accumulate(x.begin(), x.end(), 0.0) -
                  std::accumulate(y.begin(), y.end(), 0.0));
}

} // namespace

Matrix kadison_rotation(const Matrix& a, double t) {
  if (a.size() != 2) throw DimensionError("kadison_rotation expects a 2x2 matrix");
  if (!(t >= 0.0 && t <= 1.0)) throw InputError("kadison_rotation: t must lie in [0,1]");
  const Complex a12 = a(0, 1), a21 = a(1, 0);
  const double scale = std::max({1.0, std::abs(a12), std::abs(a21)});
  if (std::abs(a12 - std::conj(a21)) > 1e-10 * scale)
    throw PreconditionError("kadison_rotation: input is not Hermitian", std::abs(a12 - std::conj(a21)));

  Complex c = 1.0;
  if (std::abs(a12) > 0.0) {
    c = std::polar(1.0, (std::numbers::pi - 2.0 * std::arg(a12)) / 2.0);
    if (phase_residual(c, a12, a21) > 1e-13 * scale) {
      const Complex u = std::conj(a12) / std::abs(a12);
      const Complex candidates[] = {Complex(0, 1) * u, Complex(0, -1) * u, u, -u};
      c = *std::min_element(std::begin(candidates), std::end(candidates),
                            [&](Complex p, Complex q) {
                              return phase_residual(p, a12, a21) < phase_residual(q, a12, a21);
                            });
    }
  }
  const double s = std::sqrt(t);
  const double co = std::sqrt(1.0 - t);
  return two_by_two(c * s, -co, c * co, s);
}

Matrix embed_rotation(const Matrix& u2, std::size_t n, std::size_t j, std::size_t k) {
  if (u2.size() != 2) throw DimensionError("embed_rotation expects a 2x2 block");
  if (!(j < k && k < n)) throw DimensionError("embed_rotation needs j < k < n");
  Matrix v = Matrix::identity(n);
  v(j, j) = u2(0, 0);
  v(j, k) = u2(0, 1);
  v(k, j) = u2(1, 0);
  v(k, k) = u2(1, 1);
  return v;
}

Conjugation apply_t_transform_unitarily(const Matrix& a, const TTransform& t,
                                        double structural_tol) {
  t.validate(a.size());
  if (!is_hermitian(a, structural_tol))
    throw PreconditionError("apply_t_transform_unitarily: input is not Hermitian",
                            hermitian_residual(a));
  // T is symmetric in (j, k), so the block can always be taken in index order.
  const std::size_t j = std::min(t.j, t.k), k = std::max(t.j, t.k);
  const Matrix g = kadison_rotation(two_by_two(a(j, j), a(j, k), a(k, j), a(k, k)), t.t);
  Conjugation out{a, embed_rotation(g, a.size(), j, k)};
  rotate_conjugate(out.conjugated, j, k, g);
  return out;
}

SynthesisResult synthesize_hermitian(std::span<const double> x, std::span<const double> y,
                                     const Tolerances& tol) {
  const TDecomposition dec = decompose_t_transforms(x, y, tol.integer);
  SynthesisResult r{Matrix::diagonal(y), Matrix::identity(y.size()),
                    RealVector(x.begin(), x.end()), RealVector(y.begin(), y.end())};
  realize(r.matrix, r.unitary, dec);
  check_diagonal(r.matrix, x, tol.structural + total_gap(x, y), "synthesize_hermitian");
  return r;
}

Conjugation conjugate_to_diagonal(const Matrix& a, std::span<const double> x,
                                  const Tolerances& tol) {
  if (x.size() != a.size()) throw DimensionError("conjugate_to_diagonal: dimension mismatch");
  if (!is_hermitian(a, tol.structural))
    throw PreconditionError("conjugate_to_diagonal: input is not Hermitian", hermitian_residual(a));
  const RealVector y = diagonal(a, tol.structural);
  if (!majorizes(x, y, tol.integer)) {
    const RealVector slack = majorization_slacks(x, y);
    throw PreconditionError("conjugate_to_diagonal: target is not majorised by the diagonal",
                            -*std::min_element(slack.begin(), slack.end()));
  }
  const TDecomposition dec = decompose_t_transforms(x, y, tol.integer);
  Conjugation out{a, Matrix::identity(a.size())};
  realize(out.conjugated, out.unitary, dec);
  check_diagonal(out.conjugated, x, tol.structural + total_gap(x, y), "conjugate_to_diagonal");
  return out;
}

Matrix carpenter_finite(std::span<const double> a, const Tolerances& tol) {
  if (a.empty()) throw DimensionError("carpenter_finite: empty diagonal");
  RealVector d(a.begin(), a.end());
  for (double& v : d) {
    if (!std::isfinite(v) || v < -tol.structural || v > 1.0 + tol.structural)
      throw InputError("carpenter_finite: entries must lie in [0,1]");
    v = std::clamp(v, 0.0, 1.0);
  }
  const double s = std::accumulate(d.begin(), d.end(), 0.0);
  const double m = std::round(s);
  const double defect = std::abs(s - m);
  if (defect > tol.integer)
    throw PreconditionError("carpenter_finite: diagonal sum " + std::to_string(s) +
                                " is not an integer",
                            defect);
  RealVector flag(d.size(), 0.0);
  std::fill_n(flag.begin(), static_cast<std::size_t>(m), 1.0);
  return synthesize_hermitian(d, flag, tol).matrix;
}

SchurCheck schur_check(const Matrix& a, const Tolerances& tol) {
  if (!is_hermitian(a, tol.structural))
    throw PreconditionError("schur_check: input is not Hermitian", hermitian_residual(a));
  SchurCheck out;
  out.diagonal = diagonal(a, tol.structural);
  out.eigenvalues = hermitian_eigenvalues(a, tol.eig, tol.structural);
  const RealVector slack = majorization_slacks(out.diagonal, out.eigenvalues);
  out.min_slack = -std::abs(slack.back());
  for (std::size_t k = 0; k + 1 < slack.size(); ++k) out.min_slack = std::min(out.min_slack, slack[k]);
  out.ok = majorizes(out.diagonal, out.eigenvalues, tol.integer * std::max(1.0, frobenius_norm(a)));
  return out;
}

} // namespace shorn
