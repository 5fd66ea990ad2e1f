#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "shorn/expression.hpp"
#include "shorn/linalg.hpp"

namespace shorn {

enum class TailKind { Zero, One, GeometricLow, GeometricHigh, Interleave, DivergentLow, DivergentHigh };

/// Lower bound that makes a generator's series diverge: g(i) >= p for
/// i >= from (Constant), or g(i) >= p / i for i >= from (Harmonic).
struct DivergenceCertificate {
  enum class Kind { Constant, Harmonic } kind = Kind::Constant;
  double p = 0.0;
  std::size_t from = 1;
};

/// Infinite continuation of a sequence after its explicit prefix. Tail
/// indices are local and start at 1.
///
///   Zero, One             every term 0 (resp. 1)
///   GeometricLow(c, r)    c r^i
///   GeometricHigh(c, r)   1 - c r^i
///   Interleave(A, B)      A_1, B_1, A_2, B_2, ...
///   DivergentLow(g)       g(i),     g in [0, 1/2], sum g = infinity (certified)
///   DivergentHigh(g)      1 - g(i), same conditions on g
class TailRule {
public:
  static TailRule zero();
  static TailRule one();
  static TailRule geometric_low(double c, double r);
  static TailRule geometric_high(double c, double r);
  static TailRule interleave(TailRule first, TailRule second);
  static TailRule divergent_low(const std::string& generator, DivergenceCertificate cert);
  static TailRule divergent_high(const std::string& generator, DivergenceCertificate cert);

  TailKind kind() const noexcept { return kind_; }
  double c() const noexcept { return c_; }
  double r() const noexcept { return r_; }
  const TailRule& first() const { return *parts_->first; }
  const TailRule& second() const { return *parts_->second; }
  const Expression& generator() const { return *generator_; }
  const DivergenceCertificate& certificate() const { return cert_; }
  /// Range of g over the sampled indices (divergent rules only).
  double sampled_min() const noexcept { return g_min_; }
  double sampled_max() const noexcept { return g_max_; }

  /// i-th tail term, i >= 1.
  double term(std::size_t i) const;
  /// Termwise 1 - x, with Low and High swapped.
  TailRule dual() const;

  /// Whether infinitely many terms lie in (0, alpha] (resp. (alpha, 1)).
  bool low_support_infinite(double alpha) const;
  bool high_support_infinite(double alpha) const;
  /// Whether only finitely many terms exceed alpha.
  bool finitely_many_high(double alpha) const;

private:
  struct Parts {
    std::unique_ptr<TailRule> first, second;
  };
  TailKind kind_ = TailKind::Zero;
  double c_ = 0.0, r_ = 0.0;
  std::shared_ptr<const Parts> parts_;
  std::shared_ptr<const Expression> generator_;
  DivergenceCertificate cert_;
  double g_min_ = 0.0, g_max_ = 0.0;
};

/// A [0,1]-valued sequence: explicit prefix followed by a tail rule.
struct SequenceSpec {
  RealVector prefix;
  TailRule tail = TailRule::zero();

  void validate() const;
};

/// i-th term of the sequence, i >= 1.
double term(const SequenceSpec& spec, std::size_t i);

/// Termwise complement 1 - a_n.
SequenceSpec complement(const SequenceSpec& spec);

/// A possibly divergent non-negative series.
struct SideSum {
  double value = 0.0;
  bool divergent = false;

  SideSum& operator+=(const SideSum& o) {
    value += o.value;
    divergent = divergent || o.divergent;
    return *this;
  }
};

/// low  = sum of a_n        over n >= first_index with a_n <= alpha,
/// high = sum of (1 - a_n)  over n >= first_index with a_n >  alpha.
/// Geometric tails are summed in closed form. Divergent tails are assigned
/// to a side only when their whole sampled range lies on it; otherwise
/// PreconditionError is thrown.
struct SplitSums {
  SideSum low;
  SideSum high;
};
SplitSums split_sums_from(const SequenceSpec& spec, double alpha, std::size_t first_index = 1);

} // namespace shorn
