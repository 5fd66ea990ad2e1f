#include "shorn/carpenter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "shorn/errors.hpp"
#include "shorn/majorization.hpp"
#include "shorn/schur_horn.hpp"

namespace shorn {

namespace {

constexpr std::size_t kMaxCutoff = std::size_t{1} << 22;
constexpr std::size_t kMaxCaseABudget = std::size_t{1} << 16;
constexpr std::size_t kMaxDimension = 4000;

// P[G,:] <- V P[G,:] and P[:,G] <- P[:,G] V*.
void conjugate_block(Matrix& p, std::span<const std::size_t> g, const Matrix& v) {
  const std::size_t n = p.size(), m = g.size();
  std::vector<Complex> tmp(m * n);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const Complex w = v(a, b);
      if (w == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) tmp[a * n + c] += w * p(g[b], c);
    }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t c = 0; c < n; ++c) p(g[a], c) = tmp[a * n + c];
  std::fill(tmp.begin(), tmp.end(), Complex{});
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t a = 0; a < m; ++a) {
      Complex s{};
      for (std::size_t b = 0; b < m; ++b) s += p(r, g[b]) * std::conj(v(a, b));
      tmp[r * m + a] = s;
    }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t a = 0; a < m; ++a) p(r, g[a]) = tmp[r * m + a];
}

void hermitize(Matrix& p) {
  for (std::size_t r = 0; r < p.size(); ++r) {
    p(r, r) = p(r, r).real();
    for (std::size_t c = r + 1; c < p.size(); ++c) {
      const Complex h = 0.5 * (p(r, c) + std::conj(p(c, r)));
      p(r, c) = h;
      p(c, r) = std::conj(h);
    }
  }
}

Matrix complement_of(const Matrix& p) { return Matrix::identity(p.size()) - p; }

std::vector<std::size_t> covered_of(const std::vector<std::size_t>& permutation) {
  std::vector<std::size_t> out;
  for (std::size_t idx : permutation)
    if (idx != 0) out.push_back(idx);
  return out;
}

std::size_t count_above(const TailRule& t, double alpha) {
  switch (t.kind()) {
  case TailKind::Zero: return 0;
  case TailKind::GeometricLow: {
    std::size_t n = 0;
    while (t.term(n + 1) > alpha) ++n;
    return n;
  }
  case TailKind::Interleave: return count_above(t.first(), alpha) + count_above(t.second(), alpha);
  case TailKind::DivergentLow: return 0;
  default: throw PreconditionError("infinitely many terms exceed the threshold");
  }
}

std::vector<TruncatedProjection> case_b_direct(const SequenceSpec& spec, double alpha, std::size_t depth,
                                               const Tolerances& tol) {
  const std::size_t prefix_len = spec.prefix.size();
  auto tails = [&](std::size_t cutoff) { return split_sums_from(spec, alpha, cutoff + 1); };

  std::vector<TruncatedProjection> out;
  Matrix p(1);
  std::vector<std::size_t> positions;
  std::size_t low_cut = 0, high_cut = 0;
  for (std::size_t k = 1; k <= depth; ++k) {
    const double target = std::ldexp(1.0, -static_cast<int>(k));

    std::size_t lk = std::max(low_cut + 1, prefix_len);
    while (tails(lk).low.value >= target)
      if (++lk > kMaxCutoff) throw PreconditionError("build_case_b: tail rule insufficient to pick N_k");
    const double delta = tails(lk).low.value;

    std::size_t hk = std::max(high_cut + 1, prefix_len);
    // mu_k < delta_k, relaxed to mu_k <= delta_k only when delta_k = 0.
    auto high_ok = [&](double mu) { return delta > 0.0 ? mu < delta : mu <= delta; };
    while (!high_ok(tails(hk).high.value))
      if (++hk > kMaxCutoff) throw PreconditionError("build_case_b: tail rule insufficient to pick M_k");
    const double mu = tails(hk).high.value;

    std::vector<std::size_t> fresh;
    std::size_t ones = 0;
    for (std::size_t n = low_cut + 1; n <= lk; ++n)
      if (term(spec, n) <= alpha) fresh.push_back(n);
    for (std::size_t n = high_cut + 1; n <= hk; ++n)
      if (term(spec, n) > alpha) {
        fresh.push_back(n);
        ++ones;
      }
    std::sort(fresh.begin(), fresh.end());

    RealVector x;
    for (std::size_t n : fresh) x.push_back(term(spec, n));
    x.push_back(std::max(delta - mu, 0.0));

    if (k == 1) {
      p = carpenter_finite(x, tol);
      positions = fresh;
    } else {
      const std::size_t ell = positions.size() - 1;
      p = p.padded(ell + x.size());
      for (std::size_t i = 1; i <= ones; ++i) p(ell + i, ell + i) = 1.0;
      std::vector<std::size_t> group(x.size());
      std::iota(group.begin(), group.end(), ell);
      const Conjugation c = conjugate_to_diagonal(p.principal(group), x, tol);
      conjugate_block(p, group, c.unitary);
      hermitize(p);
      positions.pop_back();
      positions.insert(positions.end(), fresh.begin(), fresh.end());
    }
    positions.push_back(0);
    if (p.size() > kMaxDimension) throw PreconditionError("build_case_b: truncation exceeds dimension budget");

    low_cut = lk;
    high_cut = hk;
    out.push_back({p, k, covered_of(positions), 6.0 / std::ldexp(1.0, static_cast<int>(k)), positions, 0.0});
  }
  return out;
}

std::optional<CaseAConstruction> assemble_case_a(const SequenceSpec& work, const MonotoneSubsequence& sel,
                                                 std::size_t budget, std::size_t depth, const Tolerances& tol) {
  const std::vector<std::size_t>& bidx = sel.indices;
  RealVector b;
  for (std::size_t n : bidx) b.push_back(term(work, n));
  const std::set<std::size_t> selected(bidx.begin(), bidx.end());
  std::vector<std::size_t> cidx, flat;
  for (std::size_t n = 1; n <= budget; ++n) {
    if (selected.count(n)) continue;
    const double v = term(work, n);
    (v > 0.0 && v < 1.0 ? cidx : flat).push_back(n);
  }

  const double b1 = b.front();
  const double need = 1.0 / (1.0 - b1);
  CaseAConstruction out;
  CaseABlock first;
  first.indices = {bidx[0]};
  first.values = {b1};
  first.perturbed = {1.0};
  first.s_count = 1;
  first.s_weights = {1.0};
  first.delta_out = 1.0 - b1;
  out.blocks.push_back(first);

  std::size_t pos = 1, next_c = 0;
  double delta = 1.0 - b1;
  for (std::size_t k = 1; k <= depth; ++k) {
    CaseABlock blk;
    blk.delta_in = delta;
    if (delta > 0.0) {
      ChebyshevSplit split;
      try {
        split = chebyshev_coefficients(std::span<const double>(b).subspan(pos), delta);
      } catch (const PreconditionError&) {
        return std::nullopt;
      }
      for (std::size_t j = 0; j < split.count; ++j) {
        blk.indices.push_back(bidx[pos + j]);
        blk.values.push_back(b[pos + j]);
        blk.perturbed.push_back(b[pos + j] - split.weights[j] * delta);
      }
      blk.t_count = split.count;
      blk.t_weights = split.weights;
      pos += split.count;
    }
    if (next_c < cidx.size()) {
      const double c = term(work, cidx[next_c]);
      blk.indices.push_back(cidx[next_c++]);
      blk.values.push_back(c);
      blk.perturbed.push_back(c);
      blk.has_c = true;
    }
    double sum = 0.0;
    std::size_t m = 0;
    while (sum < need) {
      if (pos + m >= b.size()) return std::nullopt;
      sum += b[pos + m++];
    }
    double s_total = std::accumulate(blk.perturbed.begin(), blk.perturbed.end(), 0.0) + sum;
    const double delta_out = std::ceil(s_total) - s_total;
    for (std::size_t j = 0; j < m; ++j) {
      const double w = b[pos + j] / sum;
      blk.indices.push_back(bidx[pos + j]);
      blk.values.push_back(b[pos + j]);
      blk.perturbed.push_back(b[pos + j] + w * delta_out);
      blk.s_weights.push_back(w);
    }
    blk.s_count = m;
    blk.delta_out = delta_out;
    pos += m;
    delta = delta_out;
    for (double v : blk.perturbed)
      if (v < -tol.structural || v > 1.0 + tol.structural)
        throw NumericalError("build_case_a: perturbed diagonal value left [0,1]");
    out.blocks.push_back(std::move(blk));
  }

  std::vector<std::size_t> positions;
  RealVector d;
  std::vector<std::vector<std::size_t>> partition;
  std::size_t max_used = 0;
  for (const auto& blk : out.blocks) {
    std::vector<std::size_t> part;
    for (std::size_t j = 0; j < blk.indices.size(); ++j) {
      part.push_back(d.size());
      positions.push_back(blk.indices[j]);
      d.push_back(std::clamp(blk.perturbed[j], 0.0, 1.0));
      max_used = std::max(max_used, blk.indices[j]);
    }
    const double s = std::accumulate(blk.perturbed.begin(), blk.perturbed.end(), 0.0);
    if (std::abs(s - std::round(s)) > tol.integer)
      throw NumericalError("build_case_a: block sum is not an integer");
    partition.push_back(std::move(part));
  }
  for (std::size_t n : flat) {
    if (n > max_used) break;
    partition.push_back({d.size()});
    positions.push_back(n);
    d.push_back(term(work, n));
  }
  if (d.size() > kMaxDimension) throw PreconditionError("build_case_a: block construction exceeds budget");

  Matrix p = block_projection_from_partition(d, partition, tol);
  std::size_t offset = 0;
  for (std::size_t k = 0; k + 1 < out.blocks.size(); ++k) {
    const CaseABlock& cur = out.blocks[k];
    const CaseABlock& nxt = out.blocks[k + 1];
    const std::size_t s_start = offset + cur.indices.size() - cur.s_count;
    offset += cur.indices.size();
    const std::span<const double> xs(cur.values.data() + cur.indices.size() - cur.s_count, cur.s_count);
    const std::span<const double> xps(cur.perturbed.data() + cur.indices.size() - cur.s_count, cur.s_count);
    const std::span<const double> ys(nxt.values.data(), nxt.t_count);
    const std::span<const double> yps(nxt.perturbed.data(), nxt.t_count);
    if (!verify_concentration(xs, xps, ys, yps, tol.integer))
      throw NumericalError("build_case_a: concentration hypotheses fail for group " + std::to_string(k + 1));
    if (cur.delta_out == 0.0) continue;
    std::vector<std::size_t> group(cur.s_count + nxt.t_count);
    std::iota(group.begin(), group.end(), s_start);
    RealVector target(xs.begin(), xs.end());
    target.insert(target.end(), ys.begin(), ys.end());
    const Conjugation c = conjugate_to_diagonal(p.principal(group), target, tol);
    conjugate_block(p, group, c.unitary);
  }
  hermitize(p);

  // The s-part of the last block still carries its perturbation.
  const CaseABlock& last = out.blocks.back();
  std::size_t last_start = 0;
  for (std::size_t k = 0; k + 1 < out.blocks.size(); ++k) last_start += out.blocks[k].indices.size();
  for (std::size_t j = last.indices.size() - last.s_count; j < last.indices.size(); ++j)
    positions[last_start + j] = 0;

  out.result = {p, depth, covered_of(positions), std::nullopt, positions, 0.0};
  return out;
}

} // namespace

const char* to_string(FeasibilityCase c) noexcept {
  switch (c) {
  case FeasibilityCase::CaseA: return "CaseA";
  case FeasibilityCase::CaseBFeasible: return "CaseB-feasible";
  case FeasibilityCase::Infeasible: return "Infeasible";
  }
  return "?";
}

KadisonReport kadison_sums(const SequenceSpec& spec, double alpha, double integer_tol) {
  spec.validate();
  const SplitSums s = split_sums_from(spec, alpha, 1);
  KadisonReport r;
  r.alpha = alpha;
  r.a_f = s.low;
  r.b_f = s.high;
  if (s.low.divergent || s.high.divergent) {
    r.verdict = FeasibilityCase::CaseA;
    return r;
  }
  const double diff = s.low.value - s.high.value;
  r.defect = std::abs(diff - std::round(diff));
  r.verdict = *r.defect <= integer_tol ? FeasibilityCase::CaseBFeasible : FeasibilityCase::Infeasible;
  return r;
}

Feasibility feasibility(const SequenceSpec& spec, double alpha, const Tolerances& tol) {
  tol.validate();
  KadisonReport r = kadison_sums(spec, alpha, tol.integer);
  return {r.verdict, r};
}

ChebyshevSplit chebyshev_coefficients(std::span<const double> b, double delta) {
  return chebyshev_coefficients([&](std::size_t j) { return b[j]; }, delta, b.size());
}

ChebyshevSplit chebyshev_coefficients(const std::function<double(std::size_t)>& b, double delta,
                                      std::size_t budget) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("chebyshev_coefficients: delta must be > 0");
  ChebyshevSplit out;
  RealVector seen;
  double sum = 0.0;
  for (std::size_t j = 0; j < budget; ++j) {
    const double v = b(j);
    if (!std::isfinite(v) || v < 0.0) throw InputError("chebyshev_coefficients: terms must be >= 0");
    seen.push_back(v);
    sum += v;
    if (sum >= delta) {
      out.count = j + 1;
      out.total = sum;
      for (double s : seen) out.weights.push_back(s / sum);
      return out;
    }
  }
  throw PreconditionError("chebyshev_coefficients: partial sums stay below delta within budget", delta - sum);
}

MonotoneSubsequence monotone_divergent_subsequence(const SequenceSpec& spec, std::size_t budget,
                                                   double min_mass) {
  if (budget < 1) throw InputError("monotone_divergent_subsequence: budget must be >= 1");
  std::vector<std::size_t> cand;
  RealVector val(budget + 1, 0.0);
  for (std::size_t i = 1; i <= budget; ++i) {
    val[i] = term(spec, i);
    if (val[i] > 0.0 && val[i] <= 0.5) cand.push_back(i);
  }
  if (cand.empty()) throw PreconditionError("monotone_divergent_subsequence: no terms in (0, 1/2]");

  auto window_max = [&](std::size_t lo, std::size_t hi) {
    double m = 0.0;
    for (std::size_t i : cand)
      if (i > lo && i <= hi) m = std::max(m, val[i]);
    return m;
  };
  const double q2 = window_max(budget / 4, budget / 2);
  const double q4 = window_max(3 * budget / 4, budget);

  MonotoneSubsequence out;
  auto by_value_desc = [&](std::size_t a, std::size_t b) { return val[a] > val[b]; };
  if (q4 < 0.9 * q2 || q2 == 0.0) {
    out.indices = cand;
    std::stable_sort(out.indices.begin(), out.indices.end(), by_value_desc);
    out.direction = Monotonicity::NonIncreasing;
    out.accumulation_point = 0.0;
  } else {
    const double c = window_max(budget / 2, budget);
    const double eps = c / 4.0;
    std::vector<std::size_t> below, above;
    for (std::size_t i : cand) {
      if (val[i] >= c - eps && val[i] <= c) below.push_back(i);
      else if (val[i] > c && val[i] <= c + eps) above.push_back(i);
    }
    out.accumulation_point = c;
    if (below.size() >= above.size()) {
      out.indices = std::move(below);
      std::stable_sort(out.indices.begin(), out.indices.end(),
                       [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
      out.direction = Monotonicity::NonDecreasing;
    } else {
      out.indices = std::move(above);
      std::stable_sort(out.indices.begin(), out.indices.end(), by_value_desc);
      out.direction = Monotonicity::NonIncreasing;
    }
    if (val[out.indices.front()] == val[out.indices.back()]) out.direction = Monotonicity::NonIncreasing;
  }
  for (std::size_t i : out.indices) out.partial_sum += val[i];
  if (out.partial_sum < min_mass)
    throw PreconditionError("monotone_divergent_subsequence: budget exhausted before the selection reached "
                            "the required mass",
                            min_mass - out.partial_sum);
  return out;
}

Matrix block_projection_from_partition(std::span<const double> d,
                                       const std::vector<std::vector<std::size_t>>& partition,
                                       const Tolerances& tol) {
  if (d.empty()) throw DimensionError("block_projection_from_partition: empty diagonal");
  std::vector<char> seen(d.size(), 0);
  for (const auto& block : partition)
    for (std::size_t i : block) {
      if (i >= d.size()) throw DimensionError("block_projection_from_partition: index out of range");
      if (seen[i]++) throw InputError("block_projection_from_partition: blocks overlap");
    }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw InputError("block_projection_from_partition: blocks do not cover the diagonal");

  Matrix p(d.size());
  for (std::size_t b = 0; b < partition.size(); ++b) {
    const auto& block = partition[b];
    if (block.empty()) continue;
    RealVector values;
    for (std::size_t i : block) values.push_back(d[i]);
    Matrix q(1);
    try {
      q = carpenter_finite(values, tol);
    } catch (const PreconditionError& e) {
      throw PreconditionError("block_projection_from_partition: block " + std::to_string(b + 1) +
                                  " has non-integer sum",
                              e.defect());
    }
    for (std::size_t r = 0; r < block.size(); ++r)
      for (std::size_t c = 0; c < block.size(); ++c) p(block[r], block[c]) = q(r, c);
  }
  return p;
}

std::vector<TruncatedProjection> build_case_b(const SequenceSpec& spec, double alpha, std::size_t depth,
                                              const Tolerances& tol) {
  tol.validate();
  if (depth < 1) throw InputError("build_case_b: depth must be >= 1");
  const KadisonReport r = kadison_sums(spec, alpha, tol.integer);
  if (r.verdict != FeasibilityCase::CaseBFeasible)
    throw PreconditionError(std::string("build_case_b: spec is ") + to_string(r.verdict),
                            r.defect.value_or(0.0));
  if (!spec.tail.low_support_infinite(alpha) && spec.tail.high_support_infinite(alpha)) {
    auto series = case_b_direct(complement(spec), 1.0 - alpha, depth, tol);
    for (auto& t : series) {
      t.projection = complement_of(t.projection);
      t.pad = 1.0;
    }
    return series;
  }
  return case_b_direct(spec, alpha, depth, tol);
}

CaseAConstruction build_case_a(const SequenceSpec& spec, std::size_t depth, const Tolerances& tol) {
  tol.validate();
  if (depth < 1) throw InputError("build_case_a: depth must be >= 1");
  const KadisonReport r = kadison_sums(spec, 0.5, tol.integer);
  if (r.verdict != FeasibilityCase::CaseA)
    throw PreconditionError("build_case_a: both tail sums are finite", r.defect.value_or(0.0));

  for (std::size_t budget = 256; budget <= kMaxCaseABudget; budget *= 2) {
    bool comp = !r.a_f.divergent;
    SequenceSpec work = comp ? complement(spec) : spec;
    MonotoneSubsequence sel;
    try {
      sel = monotone_divergent_subsequence(work, budget);
    } catch (const PreconditionError&) {
      continue;
    }
    if (sel.direction == Monotonicity::NonDecreasing) {
      work = complement(work);
      comp = !comp;
    }
    auto built = assemble_case_a(work, sel, budget, depth, tol);
    if (!built) continue;
    built->selection = std::move(sel);
    built->complemented = comp;
    if (comp) {
      built->result.projection = complement_of(built->result.projection);
      built->result.pad = 1.0;
    }
    return std::move(*built);
  }
  throw PreconditionError("build_case_a: block construction exceeds budget");
}

TruncatedProjection kadison13(const SequenceSpec& spec, const Tolerances& tol, std::size_t depth) {
  tol.validate();
  const KadisonReport r = kadison_sums(spec, 0.5, tol.integer);
  if (r.verdict == FeasibilityCase::CaseA) throw PreconditionError("kadison13: total diverges");
  if (!spec.tail.finitely_many_high(0.5))
    throw PreconditionError("kadison13: infinitely many terms exceed 1/2");
  std::size_t high = count_above(spec.tail, 0.5);
  for (double v : spec.prefix) high += v > 0.5;
  const double total = r.a_f.value + static_cast<double>(high) - r.b_f.value;
  const double defect = std::abs(total - std::round(total));
  if (defect > tol.integer)
    throw PreconditionError("kadison13: total " + std::to_string(total) + " is not an integer", defect);
  return build_case_b(spec, 0.5, depth, tol).back();
}

TruncatedProjection kadison14(const SequenceSpec& spec, const Tolerances& tol, std::size_t depth) {
  TruncatedProjection t = kadison13(complement(spec), tol, depth);
  t.projection = complement_of(t.projection);
  t.pad = 1.0 - t.pad;
  return t;
}

double entry_bound_violation(const Matrix& p) {
  const std::size_t n = p.size();
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double ptt = p(t, t).real();
    double off = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (s == t) continue;
      const double pss = p(s, s).real();
      const double e = std::norm(p(s, t));
      off += e;
      worst = std::max(worst, e - std::min({ptt, pss, 1.0 - ptt, 1.0 - pss}));
    }
    worst = std::max(worst, off - std::min(ptt, 1.0 - ptt));
  }
  return worst;
}

double column_residual(const Matrix& later, const Matrix& earlier, std::size_t t, double pad) {
  if (later.size() < earlier.size() || t >= later.size())
    throw DimensionError("column_residual: earlier truncation must embed in the later one");
  double s = 0.0;
  for (std::size_t r = 0; r < later.size(); ++r) {
    Complex e = r < earlier.size() && t < earlier.size() ? earlier(r, t) : Complex{};
    if (r == t && t >= earlier.size()) e = pad;
    s += std::norm(later(r, t) - e);
  }
  return s;
}

SequenceSpec diagonal_spec(const Matrix& p) {
  SequenceSpec s;
  for (std::size_t i = 0; i < p.size(); ++i) s.prefix.push_back(std::clamp(p(i, i).real(), 0.0, 1.0));
  return s;
}

} // namespace shorn
