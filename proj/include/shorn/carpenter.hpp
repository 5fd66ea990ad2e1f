#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "shorn/linalg.hpp"
#include "shorn/sequence.hpp"

namespace shorn {

enum class FeasibilityCase { CaseA, CaseBFeasible, Infeasible };

const char* to_string(FeasibilityCase c) noexcept;

/// a_f = sum of a_n <= alpha, b_f = sum of (1 - a_n) over a_n > alpha.
/// defect is the distance of a_f - b_f to the nearest integer; it is only
/// defined when both sums are finite.
struct KadisonReport {
  double alpha = 0.5;
  SideSum a_f;
  SideSum b_f;
  std::optional<double> defect;
  FeasibilityCase verdict = FeasibilityCase::Infeasible;
};

KadisonReport kadison_sums(const SequenceSpec& spec, double alpha, double integer_tol = 1e-9);

struct Feasibility {
  FeasibilityCase verdict;
  KadisonReport certificate;
};

Feasibility feasibility(const SequenceSpec& spec, double alpha, const Tolerances& tol = {});

/// Smallest n with b_1 + ... + b_n >= delta and t_j = b_j / (b_1 + ... + b_n).
/// Then sum t = 1 and delta t_j <= b_j.
struct ChebyshevSplit {
  std::size_t count = 0;
  RealVector weights;
  double total = 0.0;
};
ChebyshevSplit chebyshev_coefficients(std::span<const double> b, double delta);
/// Stream form: b(j) for j = 0, 1, ..., reading at most `budget` terms.
ChebyshevSplit chebyshev_coefficients(const std::function<double(std::size_t)>& b, double delta,
                                      std::size_t budget);

enum class Monotonicity { NonIncreasing, NonDecreasing };

/// Terms of a divergent series in (0, 1/2] arranged monotonically. Indices
/// are 1-based sequence indices in selection order.
struct MonotoneSubsequence {
  std::vector<std::size_t> indices;
  Monotonicity direction = Monotonicity::NonIncreasing;
  double accumulation_point = 0.0;
  double partial_sum = 0.0;
};

/// Looks at terms 1..budget. When their maxima decay (sampled terms
/// accumulate only at 0) every candidate is taken in non-increasing order.
/// Otherwise c = max of the second half of the window, and the terms within
/// c/4 of c on the better populated side are taken, ordered towards c.
/// Throws PreconditionError when the selected mass is below `min_mass`.
MonotoneSubsequence monotone_divergent_subsequence(const SequenceSpec& spec, std::size_t budget,
                                                   double min_mass = 1.0);

/// Block-diagonal projection with diagonal d; each block (0-based index
/// set) is built with carpenter_finite and must have integer sum.
Matrix block_projection_from_partition(std::span<const double> d,
                                       const std::vector<std::vector<std::size_t>>& partition,
                                       const Tolerances& tol = {});

/// Finite section of an infinite construction.
///
/// permutation[p] is the 1-based sequence index shown at diagonal position
/// p, or 0 for auxiliary positions that carry no sequence value. `covered`
/// lists the sequence indices present, in position order. `pad` is the
/// value the infinite continuation takes on the diagonal outside the block
/// (0, or 1 for outputs built through the complement).
struct TruncatedProjection {
  Matrix projection = Matrix(1);
  std::size_t depth = 0;
  std::vector<std::size_t> covered;
  std::optional<double> residual_bound;
  std::vector<std::size_t> permutation;
  double pad = 0.0;
};

/// P_1..P_K for a spec with both tail sums finite and a_f - b_f integral.
std::vector<TruncatedProjection> build_case_b(const SequenceSpec& spec, double alpha, std::size_t depth,
                                              const Tolerances& tol = {});

/// One diagonal block of the case-A construction, in position order:
/// t-part, optional c entry, s-part.
struct CaseABlock {
  std::vector<std::size_t> indices;
  RealVector values;
  RealVector perturbed;
  std::size_t t_count = 0;
  bool has_c = false;
  std::size_t s_count = 0;
  RealVector t_weights;
  RealVector s_weights;
  double delta_in = 0.0;  ///< subtracted across the t-part
  double delta_out = 0.0; ///< added across the s-part
};

struct CaseAConstruction {
  TruncatedProjection result;
  std::vector<CaseABlock> blocks;
  MonotoneSubsequence selection;
  bool complemented = false;
};

/// Truncated projection for a spec with a divergent tail sum, with `depth`
/// restored groups.
CaseAConstruction build_case_a(const SequenceSpec& spec, std::size_t depth, const Tolerances& tol = {});

/// Projection whose diagonal is a spec with finitely many terms above 1/2
/// and integral total; the last case-B truncation.
TruncatedProjection kadison13(const SequenceSpec& spec, const Tolerances& tol = {}, std::size_t depth = 10);
/// I - kadison13(complement(spec)): for specs whose co-total is integral.
TruncatedProjection kadison14(const SequenceSpec& spec, const Tolerances& tol = {}, std::size_t depth = 10);

/// Largest violation of |P_st|^2 <= min{P_tt, P_ss, 1-P_tt, 1-P_ss} and
/// sum_{s != t} |P_st|^2 <= min{P_tt, 1-P_tt}; 0 when all hold.
double entry_bound_violation(const Matrix& p);

/// ||(later - earlier) e_t||^2, where `earlier` is extended by pad * I.
double column_residual(const Matrix& later, const Matrix& earlier, std::size_t t, double pad = 0.0);

/// The diagonal of p as a finite spec (ZeroTail), clamped into [0,1].
SequenceSpec diagonal_spec(const Matrix& p);

} // namespace shorn
