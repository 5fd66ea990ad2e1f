#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "shorn/linalg.hpp"
#include "shorn/majorization.hpp"

namespace shorn {

/// A Hermitian matrix with prescribed diagonal and spectrum, and the unitary
/// that produced it: matrix = unitary * diag(spectrum) * unitary*.
struct SynthesisResult {
  Matrix matrix;
  Matrix unitary;
  RealVector target_diagonal;
  RealVector spectrum;
};

/// Result of a unitary conjugation: conjugated = unitary * A * unitary*.
struct Conjugation {
  Matrix conjugated;
  Matrix unitary;
};

/// 2x2 unitary U with diag(U A U*) = (t A11 + (1-t) A22, (1-t) A11 + t A22),
///   U = [[c sin(th), -cos(th)], [c cos(th), sin(th)]],  sin^2(th) = t,
/// where the unimodular c satisfies c A12 = -conj(c) A21.
Matrix kadison_rotation(const Matrix& a, double t);

/// n x n unitary acting as `u2` on coordinates (j, k), j < k, identity elsewhere.
Matrix embed_rotation(const Matrix& u2, std::size_t n, std::size_t j, std::size_t k);

/// Conjugate A so that its diagonal moves from y to T y; returns the 2x2
/// block embedded as a full unitary.
Conjugation apply_t_transform_unitarily(const Matrix& a, const TTransform& t,
                                        double structural_tol = 1e-10);

/// Hermitian matrix with diagonal x and spectrum y, for x ≺ y.
SynthesisResult synthesize_hermitian(std::span<const double> x, std::span<const double> y,
                                     const Tolerances& tol = {});

/// Unitarily move the diagonal of a Hermitian A to x, for x ≺ diag(A).
Conjugation conjugate_to_diagonal(const Matrix& a, std::span<const double> x,
                                  const Tolerances& tol = {});

/// Projection with diagonal a, for a in [0,1]^n with integer sum. Throws
/// PreconditionError carrying |sum - round(sum)| otherwise.
Matrix carpenter_finite(std::span<const double> a, const Tolerances& tol = {});

struct SchurCheck {
  RealVector diagonal;
  RealVector eigenvalues;
  double min_slack = 0.0; ///< smallest majorisation slack (incl. -|total gap|)
  bool ok = false;
};

/// diag(A) ≺ eigenvalues(A) check for a Hermitian A.
SchurCheck schur_check(const Matrix& a, const Tolerances& tol = {});

} // namespace shorn
