#include "shorn/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "shorn/errors.hpp"

namespace shorn {

namespace {

// Indices at which generator certificates and ranges are checked.
std::vector<std::size_t> sample_indices() {
  std::vector<std::size_t> s;
  for (std::size_t i = 1; i <= 4096; ++i) s.push_back(i);
  for (std::size_t i = 8192; i <= (std::size_t{1} << 30); i *= 2) s.push_back(i);
  return s;
}

void check_geometric(double c, double r) {
  if (!std::isfinite(c) || !std::isfinite(r) || c < 0.0 || !(r > 0.0 && r < 1.0) || c * r > 1.0)
    throw InputError("geometric tail needs c >= 0, 0 < r < 1 and c*r <= 1");
}

constexpr std::size_t kMaxSideScan = 50'000'000;

// Geometric terms c r^i, i >= start, that are > alpha come first (they
// decrease); returns the first i at which c r^i <= alpha.
template <class Above>
std::size_t scan_geometric(double c, double r, std::size_t start, Above above) {
  std::size_t i = start;
  while (c * std::pow(r, static_cast<double>(i)) > 0.0 && above(c * std::pow(r, static_cast<double>(i)))) {
    if (++i - start > kMaxSideScan) throw NumericalError("geometric tail scan exceeded its budget");
  }
  return i;
}

} // namespace

TailRule TailRule::zero() { return {}; }

TailRule TailRule::one() {
  TailRule t;
  t.kind_ = TailKind::One;
  return t;
}

TailRule TailRule::geometric_low(double c, double r) {
  check_geometric(c, r);
  TailRule t;
  t.kind_ = TailKind::GeometricLow;
  t.c_ = c;
  t.r_ = r;
  return t;
}

TailRule TailRule::geometric_high(double c, double r) {
  TailRule t = geometric_low(c, r);
  t.kind_ = TailKind::GeometricHigh;
  return t;
}

TailRule TailRule::interleave(TailRule first, TailRule second) {
  TailRule t;
  t.kind_ = TailKind::Interleave;
  auto parts = std::make_shared<Parts>();
  parts->first = std::make_unique<TailRule>(std::move(first));
  parts->second = std::make_unique<TailRule>(std::move(second));
  t.parts_ = std::move(parts);
  return t;
}

TailRule TailRule::divergent_low(const std::string& generator, DivergenceCertificate cert) {
  TailRule t;
  t.kind_ = TailKind::DivergentLow;
  t.generator_ = std::make_shared<const Expression>(generator);
  if (!(cert.p > 0.0) || !std::isfinite(cert.p) || cert.from < 1)
    throw InputError("divergence certificate needs p > 0 and from >= 1");
  t.cert_ = cert;
  const Expression& g = *t.generator_;
  t.g_min_ = 1.0;
  t.g_max_ = 0.0;
  for (std::size_t i : sample_indices()) {
    const double v = g(static_cast<double>(i));
    if (!std::isfinite(v) || v < 0.0 || v > 0.5)
      throw InputError("generator \"" + generator + "\" leaves [0, 1/2] at i = " + std::to_string(i));
    t.g_min_ = std::min(t.g_min_, v);
    t.g_max_ = std::max(t.g_max_, v);
    if (i < cert.from) continue;
    const double bound = cert.kind == DivergenceCertificate::Kind::Constant
                             ? cert.p
                             : cert.p / static_cast<double>(i);
    if (v < bound * (1.0 - 1e-12))
      throw InputError("generator \"" + generator + "\" violates its divergence certificate at i = " +
                       std::to_string(i));
  }
  return t;
}

TailRule TailRule::divergent_high(const std::string& generator, DivergenceCertificate cert) {
  TailRule t = divergent_low(generator, cert);
  t.kind_ = TailKind::DivergentHigh;
  return t;
}

double TailRule::term(std::size_t i) const {
  if (i < 1) throw DimensionError("tail index must be >= 1");
  const double di = static_cast<double>(i);
  switch (kind_) {
  case TailKind::Zero: return 0.0;
  case TailKind::One: return 1.0;
  case TailKind::GeometricLow: return c_ * std::pow(r_, di);
  case TailKind::GeometricHigh: return 1.0 - c_ * std::pow(r_, di);
  case TailKind::Interleave: return i % 2 == 1 ? first().term((i + 1) / 2) : second().term(i / 2);
  case TailKind::DivergentLow: return (*generator_)(di);
  case TailKind::DivergentHigh: return 1.0 - (*generator_)(di);
  }
  return 0.0;
}

TailRule TailRule::dual() const {
  TailRule t = *this;
  switch (kind_) {
  case TailKind::Zero: t.kind_ = TailKind::One; break;
  case TailKind::One: t.kind_ = TailKind::Zero; break;
  case TailKind::GeometricLow: t.kind_ = TailKind::GeometricHigh; break;
  case TailKind::GeometricHigh: t.kind_ = TailKind::GeometricLow; break;
  case TailKind::DivergentLow: t.kind_ = TailKind::DivergentHigh; break;
  case TailKind::DivergentHigh: t.kind_ = TailKind::DivergentLow; break;
  case TailKind::Interleave: return interleave(first().dual(), second().dual());
  }
  return t;
}

bool TailRule::low_support_infinite(double alpha) const {
  switch (kind_) {
  case TailKind::GeometricLow: return c_ > 0.0;
  case TailKind::Interleave:
    return first().low_support_infinite(alpha) || second().low_support_infinite(alpha);
  case TailKind::DivergentLow: return g_min_ <= alpha;
  case TailKind::DivergentHigh: return 1.0 - g_max_ <= alpha;
  default: return false;
  }
}

bool TailRule::high_support_infinite(double alpha) const {
  switch (kind_) {
  case TailKind::GeometricHigh: return c_ > 0.0;
  case TailKind::Interleave:
    return first().high_support_infinite(alpha) || second().high_support_infinite(alpha);
  case TailKind::DivergentLow: return g_max_ > alpha;
  case TailKind::DivergentHigh: return 1.0 - g_min_ > alpha;
  default: return false;
  }
}

bool TailRule::finitely_many_high(double alpha) const {
  switch (kind_) {
  case TailKind::Zero:
  case TailKind::GeometricLow: return true;
  case TailKind::Interleave: return first().finitely_many_high(alpha) && second().finitely_many_high(alpha);
  case TailKind::DivergentLow: return g_max_ <= alpha;
  default: return false;
  }
}

void SequenceSpec::validate() const {
  for (double v : prefix)
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw InputError("sequence prefix entries must lie in [0,1]");
}

double term(const SequenceSpec& spec, std::size_t i) {
  if (i < 1) throw DimensionError("sequence index must be >= 1");
  if (i <= spec.prefix.size()) return spec.prefix[i - 1];
  return spec.tail.term(i - spec.prefix.size());
}

SequenceSpec complement(const SequenceSpec& spec) {
  SequenceSpec out{spec.prefix, spec.tail.dual()};
  for (double& v : out.prefix) v = 1.0 - v;
  return out;
}

namespace {

SplitSums tail_split(const TailRule& t, double alpha, std::size_t start) {
  SplitSums s;
  switch (t.kind()) {
  case TailKind::Zero:
  case TailKind::One: break;
  case TailKind::GeometricLow: {
    const double c = t.c(), r = t.r();
    const std::size_t i0 = scan_geometric(c, r, start, [&](double v) { return v > alpha; });
    for (std::size_t i = start; i < i0; ++i) s.high.value += 1.0 - c * std::pow(r, static_cast<double>(i));
    s.low.value += c * std::pow(r, static_cast<double>(i0)) / (1.0 - r);
    break;
  }
  case TailKind::GeometricHigh: {
    const double c = t.c(), r = t.r();
    // term 1 - c r^i <= alpha  <=>  c r^i >= 1 - alpha
    const std::size_t i0 = scan_geometric(c, r, start, [&](double v) { return 1.0 - v <= alpha; });
    for (std::size_t i = start; i < i0; ++i) s.low.value += 1.0 - c * std::pow(r, static_cast<double>(i));
    s.high.value += c * std::pow(r, static_cast<double>(i0)) / (1.0 - r);
    break;
  }
  case TailKind::Interleave: {
    const SplitSums a = tail_split(t.first(), alpha, start / 2 + 1);
    const SplitSums b = tail_split(t.second(), alpha, (start + 1) / 2);
    s.low = a.low;
    s.low += b.low;
    s.high = a.high;
    s.high += b.high;
    break;
  }
  case TailKind::DivergentLow:
  case TailKind::DivergentHigh: {
    const bool low = t.kind() == TailKind::DivergentLow;
    const double term_min = low ? t.sampled_min() : 1.0 - t.sampled_max();
    const double term_max = low ? t.sampled_max() : 1.0 - t.sampled_min();
    if (term_max <= alpha) s.low.divergent = true;
    else if (term_min > alpha) s.high.divergent = true;
    else
      throw PreconditionError("divergent tail \"" + t.generator().source() +
                              "\" straddles the threshold; its certificate does not decide "
                              "which side diverges");
    break;
  }
  }
  return s;
}

} // namespace

SplitSums split_sums_from(const SequenceSpec& spec, double alpha, std::size_t first_index) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("threshold alpha must lie in (0,1)");
  if (first_index < 1) throw DimensionError("sequence index must be >= 1");
  SplitSums s;
  for (std::size_t i = first_index; i <= spec.prefix.size(); ++i) {
    const double v = spec.prefix[i - 1];
    if (v <= alpha) s.low.value += v;
    else s.high.value += 1.0 - v;
  }
  const std::size_t start = first_index > spec.prefix.size() ? first_index - spec.prefix.size() : 1;
  const SplitSums t = tail_split(spec.tail, alpha, start);
  s.low += t.low;
  s.high += t.high;
  return s;
}

} // namespace shorn
