#include "shorn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shorn/errors.hpp"

namespace shorn {

void Tolerances::validate() const {
  if (!(structural > 0) || !(eig > 0) || !(integer > 0))
    throw InputError("tolerances must be strictly positive");
  if (!(integer < 0.25))
    throw InputError("integer tolerance must be below 1/4");
}

Matrix::Matrix(std::size_t n) : n_(n), data_(n * n) {
  if (n == 0) throw DimensionError("matrix dimension must be at least 1");
}

Matrix::Matrix(std::size_t n, std::vector<Complex> data) : n_(n), data_(std::move(data)) {
  if (n == 0) throw DimensionError("matrix dimension must be at least 1");
  if (data_.size() != n * n)
    throw DimensionError("matrix data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(n * n));
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InputError("matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i])) throw InputError("diagonal entries must be finite");
    m(i, i) = d[i];
  }
  return m;
}

Matrix Matrix::principal(std::span<const std::size_t> idx) const {
  Matrix m(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) {
      if (idx[r] >= n_ || idx[c] >= n_) throw DimensionError("principal index out of range");
      m(r, c) = (*this)(idx[r], idx[c]);
    }
  return m;
}

Matrix Matrix::padded(std::size_t m, double pad_diagonal) const {
  if (m < n_) throw DimensionError("cannot pad to a smaller dimension");
  Matrix out(m);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) out(r, c) = (*this)(r, c);
  for (std::size_t i = n_; i < m; ++i) out(i, i) = pad_diagonal;
  return out;
}

namespace {

void require_same(const Matrix& a, const Matrix& b, const char* op) {
  if (a.size() != b.size())
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a.size(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

} // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same(a, b, "add");
  Matrix out(a.size());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a.size(); ++c) out(r, c) = a(r, c) + b(r, c);
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same(a, b, "subtract");
  Matrix out(a.size());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a.size(); ++c) out(r, c) = a(r, c) - b(r, c);
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require_same(a, b, "matmul");
  const std::size_t n = a.size();
  Matrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

Matrix adjoint(const Matrix& a) {
  Matrix out(a.size());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a.size(); ++c) out(r, c) = std::conj(a(c, r));
  return out;
}

Matrix conjugate_by(const Matrix& u, const Matrix& a) {
  require_same(u, a, "conjugate_by");
  return matmul(matmul(u, a), adjoint(u));
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

double hermitian_residual(const Matrix& a) { return max_abs(a - adjoint(a)); }

double unitary_residual(const Matrix& u) {
  const Matrix id = Matrix::identity(u.size());
  const Matrix ua = adjoint(u);
  return std::max(max_abs(matmul(u, ua) - id), max_abs(matmul(ua, u) - id));
}

double projection_residual(const Matrix& p) {
  return std::max(max_abs(matmul(p, p) - p), hermitian_residual(p));
}

bool is_hermitian(const Matrix& a, double tol) { return hermitian_residual(a) <= tol; }
bool is_unitary(const Matrix& u, double tol) { return unitary_residual(u) <= tol; }
bool is_projection(const Matrix& p, double tol) { return projection_residual(p) <= tol; }

void rotate_rows(Matrix& a, std::size_t j, std::size_t k, const Matrix& g) {
  for (std::size_t c = 0; c < a.size(); ++c) {
    const Complex x = a(j, c), y = a(k, c);
    a(j, c) = g(0, 0) * x + g(0, 1) * y;
    a(k, c) = g(1, 0) * x + g(1, 1) * y;
  }
}

void rotate_conjugate(Matrix& a, std::size_t j, std::size_t k, const Matrix& g) {
  if (g.size() != 2) throw DimensionError("rotation must be 2x2");
  if (j >= a.size() || k >= a.size() || j == k) throw DimensionError("bad rotation coordinates");
  rotate_rows(a, j, k, g);
  // columns: A <- A G*
  for (std::size_t r = 0; r < a.size(); ++r) {
    const Complex x = a(r, j), y = a(r, k);
    a(r, j) = x * std::conj(g(0, 0)) + y * std::conj(g(0, 1));
    a(r, k) = x * std::conj(g(1, 0)) + y * std::conj(g(1, 1));
  }
}

RealVector hermitian_eigenvalues(const Matrix& a, double tol, double hermitian_tol,
                                 int max_sweeps) {
  if (!is_hermitian(a, hermitian_tol))
    throw PreconditionError("hermitian_eigenvalues: input is not Hermitian",
                            hermitian_residual(a));
  const std::size_t n = a.size();
  Matrix m = a;
  const double scale = frobenius_norm(a);
  RealVector eig(n);
  if (scale > 0.0) {
    int sweep = 0;
    while (off_diagonal_norm(m) > tol * scale) {
      if (++sweep > max_sweeps)
        throw NumericalError("Jacobi eigensolver did not converge in " +
                             std::to_string(max_sweeps) + " sweeps");
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q) {
          const Complex b = m(p, q);
          const double mag = std::abs(b);
          if (mag == 0.0) continue;
          // Phase e^{i phi} makes the pivot real; then a real Jacobi angle.
          const Complex phase = b / mag;
          const double theta = 0.5 * std::atan2(2.0 * mag, m(q, q).real() - m(p, p).real());
          const double c = std::cos(theta), s = std::sin(theta);
          Matrix w(2);
          w(0, 0) = c;
          w(0, 1) = -s * phase;
          w(1, 0) = s;
          w(1, 1) = c * phase;
          rotate_conjugate(m, p, q, w);
          m(p, q) = m(q, p) = 0.0;
          m(p, p) = m(p, p).real();
          m(q, q) = m(q, q).real();
        }
    }
  }
  for (std::size_t i = 0; i < n; ++i) eig[i] = m(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

RealVector diagonal(const Matrix& a, double imag_tol) {
  RealVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a(i, i).imag()) > imag_tol)
      throw PreconditionError("diagonal entry " + std::to_string(i) + " has imaginary part",
                              std::abs(a(i, i).imag()));
    d[i] = a(i, i).real();
  }
  return d;
}

Complex trace(const Matrix& a) {
  Complex t{};
  for (std::size_t i = 0; i < a.size(); ++i) t += a(i, i);
  return t;
}

} // namespace shorn
