#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace shorn {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;

/// Tolerances shared by every verification routine.
struct Tolerances {
  double structural = 1e-10; ///< max-entry residuals of structural predicates
  double eig = 1e-12;        ///< relative off-diagonal stop for the eigensolver
  double integer = 1e-9;     ///< distance to Z accepted as "integer"

  /// Throws InputError unless all are positive and integer < 1/4.
  void validate() const;
};

/// Dense square complex matrix, row-major. Entries are always finite.
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t n);
  Matrix(std::size_t n, std::vector<Complex> data);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t n) { return Matrix(n); }
  static Matrix diagonal(std::span<const double> d);

  std::size_t size() const noexcept { return n_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  std::span<const Complex> data() const noexcept { return data_; }

  /// Principal submatrix on the given (ordered) coordinates.
  Matrix principal(std::span<const std::size_t> idx) const;
  /// Copy of this matrix in the top-left corner of an m x m zero (or
  /// identity-padded) matrix, m >= size().
  Matrix padded(std::size_t m, double pad_diagonal = 0.0) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix adjoint(const Matrix& a);
/// U A U*.
Matrix conjugate_by(const Matrix& u, const Matrix& a);

double max_abs(const Matrix& a);
double frobenius_norm(const Matrix& a);

// Max-entry residuals behind the predicates below.
double hermitian_residual(const Matrix& a);
double unitary_residual(const Matrix& u);
double projection_residual(const Matrix& p);

bool is_hermitian(const Matrix& a, double tol);
bool is_unitary(const Matrix& u, double tol);
bool is_projection(const Matrix& p, double tol);

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic two-sided complex
/// Jacobi rotations. Sweeps stop once the off-diagonal Frobenius norm is at
/// most `tol * ||A||_F`; exceeding `max_sweeps` throws NumericalError.
RealVector hermitian_eigenvalues(const Matrix& a, double tol = 1e-12,
                                 double hermitian_tol = 1e-10, int max_sweeps = 100);

/// Real parts of the diagonal. Throws PreconditionError if an imaginary
/// part exceeds `imag_tol`.
RealVector diagonal(const Matrix& a, double imag_tol = 1e-10);

Complex trace(const Matrix& a);

/// Apply the 2x2 matrix `g` to rows (j, k): [row_j; row_k] <- g [row_j; row_k].
void rotate_rows(Matrix& a, std::size_t j, std::size_t k, const Matrix& g);
/// A <- G A G* where G acts as `g` on coordinates (j, k).
void rotate_conjugate(Matrix& a, std::size_t j, std::size_t k, const Matrix& g);

} // namespace shorn
