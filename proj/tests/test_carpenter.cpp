#include <doctest.h>

#include "shorn/carpenter.hpp"
#include "shorn/errors.hpp"
#include "shorn/majorization.hpp"
#include "shorn/schur_horn.hpp"
#include "support.hpp"

using namespace shorn;
using namespace testing;

namespace {

using Kind = DivergenceCertificate::Kind;

SequenceSpec halving_interleave(RealVector prefix = {}) {
  return {std::move(prefix),
          TailRule::interleave(TailRule::geometric_low(0.5, 0.5), TailRule::geometric_high(0.5, 0.5))};
}

SequenceSpec divergent(const char* g, Kind kind, double p) {
  return {{}, TailRule::divergent_low(g, {kind, p, 1})};
}

void check_truncation(const TruncatedProjection& t, const SequenceSpec& spec, double tol = 1e-9) {
  CHECK(is_projection(t.projection, tol));
  REQUIRE(t.permutation.size() == t.projection.size());
  for (std::size_t p = 0; p < t.permutation.size(); ++p) {
    if (t.permutation[p] == 0) continue;
    CHECK(std::abs(t.projection(p, p).real() - term(spec, t.permutation[p])) <= tol);
  }
  CHECK(entry_bound_violation(t.projection) <= 1e-9);
  const KadisonReport r = kadison_sums(diagonal_spec(t.projection), 0.5);
  REQUIRE(r.defect);
  CHECK(*r.defect <= 1e-8);
}

} // namespace

TEST_CASE("kadison sums of the halving sequences") {
  const KadisonReport a = kadison_sums(halving_interleave(), 0.5);
  CHECK(a.a_f.value == 0.5);
  CHECK(a.b_f.value == 0.5);
  CHECK(*a.defect == 0);
  CHECK(a.verdict == FeasibilityCase::CaseBFeasible);

  const KadisonReport b = kadison_sums(halving_interleave({0.5}), 0.5);
  CHECK(b.a_f.value == 1);
  CHECK(b.b_f.value == 0.5);
  CHECK(*b.defect == 0.5);
  CHECK(b.verdict == FeasibilityCase::Infeasible);

  const KadisonReport c = kadison_sums({{}, TailRule::geometric_high(0.5, 0.5)}, 0.5);
  CHECK(c.a_f.value == 0);
  CHECK(c.b_f.value == 0.5);
  CHECK(*c.defect == 0.5);
  CHECK(c.verdict == FeasibilityCase::Infeasible);
}

TEST_CASE("feasibility trichotomy") {
  CHECK(feasibility(divergent("1/2", Kind::Constant, 0.5), 0.5).verdict == FeasibilityCase::CaseA);
  const Feasibility z = feasibility({{}, TailRule::zero()}, 0.5);
  CHECK(z.verdict == FeasibilityCase::CaseBFeasible);
  CHECK(z.certificate.a_f.value == 0);
  CHECK(z.certificate.b_f.value == 0);
  CHECK_FALSE(feasibility(divergent("1/2", Kind::Constant, 0.5), 0.5).certificate.defect);
}

TEST_CASE("complement swaps the sums at the mirrored threshold") {
  for (int trial = 0; trial < 100; ++trial) {
    const double r1 = uniform(0.2, 0.8), r2 = uniform(0.2, 0.8);
    SequenceSpec s{random_vector(pick(0, 5), 0, 1),
                   TailRule::interleave(TailRule::geometric_low(uniform(0, 1), r1),
                                        TailRule::geometric_high(uniform(0, 1), r2))};
    const double alpha = uniform(0.1, 0.9);
    const KadisonReport a = kadison_sums(s, alpha);
    const KadisonReport b = kadison_sums(complement(s), 1 - alpha);
    CHECK(a.a_f.value == doctest::Approx(b.b_f.value).epsilon(1e-12));
    CHECK(a.b_f.value == doctest::Approx(b.a_f.value).epsilon(1e-12));
  }
}

TEST_CASE("integrality does not depend on the threshold") {
  for (int trial = 0; trial < 100; ++trial) {
    SequenceSpec s = halving_interleave(random_vector(pick(0, 6), 0, 1));
    const KadisonReport r = kadison_sums(s, 0.5);
    if (pick(0, 1)) {
      const double d = r.a_f.value - r.b_f.value;
      s.prefix.push_back(std::ceil(d) - d);
    }
    const bool z = *kadison_sums(s, 0.5).defect <= 1e-9;
    for (double alpha : {0.3, 0.7}) CHECK((*kadison_sums(s, alpha).defect <= 1e-9) == z);
  }
}

TEST_CASE("chebyshev coefficients") {
  const ChebyshevSplit a = chebyshev_coefficients(RealVector{0.6}, 0.5);
  CHECK(a.count == 1);
  CHECK(a.weights == RealVector{1});
  const ChebyshevSplit b = chebyshev_coefficients(RealVector{0.5, 0.5, 0.5}, 1);
  CHECK(b.count == 2);
  CHECK(b.weights[0] == 0.5);
  const RealVector v{0.1, 0.2, 0.3, 0.4};
  const ChebyshevSplit c = chebyshev_coefficients(v, 0.55);
  CHECK(c.count == 3);
  CHECK(c.weights[0] == doctest::Approx(1.0 / 6));
  CHECK(c.weights[1] == doctest::Approx(1.0 / 3));
  CHECK(c.weights[2] == doctest::Approx(0.5));
  for (std::size_t j = 0; j < 3; ++j) CHECK(0.55 * c.weights[j] <= v[j]);
  CHECK_THROWS_AS(chebyshev_coefficients(v, 2), PreconditionError);
  CHECK_THROWS_AS(chebyshev_coefficients(v, 0), InputError);
  const ChebyshevSplit s = chebyshev_coefficients([](std::size_t j) { return 1.0 / double(j + 2); }, 1.0, 100);
  CHECK(s.count == 3);
  CHECK_THROWS_AS(chebyshev_coefficients([](std::size_t) { return 0.0; }, 1.0, 100), PreconditionError);
}

TEST_CASE("monotone divergent subsequence") {
  const MonotoneSubsequence a = monotone_divergent_subsequence(divergent("1/3", Kind::Constant, 1.0 / 3), 100);
  CHECK(a.accumulation_point == doctest::Approx(1.0 / 3));
  REQUIRE(a.indices.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK(a.indices[i] == i + 1);

  const SequenceSpec alt = divergent("i % 2 == 1 ? 1/2 : 1/(i/2 + 2)", Kind::Harmonic, 0.5);
  const RealVector first{term(alt, 1), term(alt, 2), term(alt, 3), term(alt, 4)};
  CHECK(first == RealVector{0.5, 1.0 / 3, 0.5, 0.25});
  const MonotoneSubsequence b = monotone_divergent_subsequence(alt, 100);
  std::vector<std::size_t> halves;
  for (std::size_t i = 1; i <= 100; ++i)
    if (term(alt, i) == 0.5) halves.push_back(i);
  auto got = b.indices;
  std::sort(got.begin(), got.end());
  CHECK(got == halves);
  CHECK(b.accumulation_point == 0.5);

  const MonotoneSubsequence c =
      monotone_divergent_subsequence(divergent("1/(i+1)", Kind::Harmonic, 0.5), 100);
  CHECK(c.direction == Monotonicity::NonIncreasing);
  CHECK(c.accumulation_point == 0);
  for (std::size_t i = 0; i < c.indices.size(); ++i) CHECK(c.indices[i] == i + 1);

  const MonotoneSubsequence d =
      monotone_divergent_subsequence(divergent("1/3 - 1/(i+10)", Kind::Constant, 0.2), 200);
  CHECK(d.direction == Monotonicity::NonDecreasing);
  const SequenceSpec rising = divergent("1/3 - 1/(i+10)", Kind::Constant, 0.2);
  for (std::size_t i = 1; i < d.indices.size(); ++i)
    CHECK(term(rising, d.indices[i]) >= term(rising, d.indices[i - 1]));

  CHECK_THROWS_AS(monotone_divergent_subsequence(divergent("1/(i+1)", Kind::Harmonic, 0.5), 2), PreconditionError);
}

TEST_CASE("block projection from a partition") {
  const RealVector one{1};
  CHECK(block_projection_from_partition(one, {{0}})(0, 0) == Complex(1));
  const RealVector d{0.5, 0.5, 0.25, 0.75};
  const Matrix p = block_projection_from_partition(d, {{0, 1}, {2, 3}});
  CHECK(is_projection(p, 1e-12));
  for (std::size_t i = 0; i < 4; ++i) CHECK(p(i, i).real() == doctest::Approx(d[i]));
  CHECK(p(0, 2) == Complex(0));
  const RealVector z{0, 0, 1};
  CHECK(max_abs(block_projection_from_partition(z, {{0, 1}, {2}}).principal(std::vector<std::size_t>{0, 1})) == 0);
  try {
    block_projection_from_partition(d, {{0, 2}, {1, 3}});
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("block 1") != std::string::npos);
    CHECK(e.defect() == doctest::Approx(0.25));
  }
  CHECK_THROWS_AS(block_projection_from_partition(d, {{0, 1}, {2}}), InputError);
  CHECK_THROWS_AS(block_projection_from_partition(d, {{0, 1}, {1, 2, 3}}), InputError);
  CHECK_THROWS_AS(block_projection_from_partition(d, {{0, 1}, {2, 4}}), DimensionError);
}

TEST_CASE("case B on the zero sequence") {
  const auto series = build_case_b({{}, TailRule::zero()}, 0.5, 5);
  REQUIRE(series.size() == 5);
  for (const auto& t : series) {
    CHECK(max_abs(t.projection) == 0);
    CHECK(*t.residual_bound == doctest::Approx(6.0 / std::ldexp(1.0, int(t.depth))));
  }
}

TEST_CASE("case B on the interleaved sequence") {
  const SequenceSpec s = halving_interleave();
  const auto series = build_case_b(s, 0.5, 8);
  for (const auto& t : series) check_truncation(t, s);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double bound = *series[k].residual_bound;
    for (std::size_t r = k + 1; r < series.size(); ++r)
      for (std::size_t t = 0; t < series[k].permutation.size(); ++t)
        if (series[k].permutation[t] != 0)
          CHECK(column_residual(series[r].projection, series[k].projection, t) <= bound + 1e-9);
  }
  // covered positions keep their sequence index as the truncation grows
  for (std::size_t k = 0; k + 1 < series.size(); ++k)
    for (std::size_t p = 0; p + 1 < series[k].permutation.size(); ++p)
      CHECK(series[k + 1].permutation[p] == series[k].permutation[p]);
  CHECK_THROWS_AS(build_case_b(halving_interleave({0.5}), 0.5, 3), PreconditionError);
}

TEST_CASE("case B variants") {
  // finitely many low terms, infinitely many high ones: built on the complement
  const SequenceSpec h{{}, TailRule::geometric_high(1, 0.5)};
  REQUIRE(kadison_sums(h, 0.5).verdict == FeasibilityCase::CaseBFeasible);
  const auto hs = build_case_b(h, 0.5, 6);
  for (const auto& t : hs) {
    check_truncation(t, h);
    CHECK(t.pad == 1);
  }
  const SequenceSpec ones{{0.25, 0.75}, TailRule::one()};
  for (const auto& t : build_case_b(ones, 0.5, 4)) check_truncation(t, ones);
  for (int trial = 0; trial < 20; ++trial) {
    SequenceSpec s = halving_interleave(random_vector(pick(0, 5), 0, 1));
    const KadisonReport r = kadison_sums(s, 0.5);
    const double d = r.a_f.value - r.b_f.value;
    s.prefix.push_back(std::ceil(d) - d);
    const double alpha = std::vector<double>{0.3, 0.5, 0.7}[pick(0, 2)];
    for (const auto& t : build_case_b(s, alpha, 5)) check_truncation(t, s);
  }
}

TEST_CASE("case A on constant 1/2") {
  const SequenceSpec s = divergent("1/2", Kind::Constant, 0.5);
  const CaseAConstruction c = build_case_a(s, 3);
  check_truncation(c.result, s);
  CHECK_FALSE(c.complemented);
  REQUIRE(c.blocks.size() == 4);
  CHECK(c.blocks[0].perturbed == RealVector{1});
  CHECK(c.blocks[1].t_count == 1);
  CHECK(c.blocks[1].t_weights == RealVector{1});
  CHECK(c.blocks[1].perturbed[0] == 0);
  CHECK(c.blocks[1].s_count == 4);
  for (const auto& b : c.blocks) {
    const double sum = std::accumulate(b.perturbed.begin(), b.perturbed.end(), 0.0);
    CHECK(std::abs(sum - std::round(sum)) <= 1e-9);
    for (double v : b.values) CHECK(v == 0.5);
  }
  CHECK_THROWS_AS(build_case_a(halving_interleave(), 2), PreconditionError);
}

namespace {

// Recompute the block bookkeeping from the selected values alone.
void replay(const CaseAConstruction& c, const SequenceSpec& work) {
  RealVector b;
  for (std::size_t n : c.selection.indices) b.push_back(term(work, n));
  const double b1 = b[0];
  REQUIRE(c.blocks[0].values == RealVector{b1});
  CHECK(c.blocks[0].delta_out == doctest::Approx(1 - b1));
  std::size_t pos = 1;
  for (std::size_t k = 1; k < c.blocks.size(); ++k) {
    const CaseABlock& blk = c.blocks[k];
    const double din = c.blocks[k - 1].delta_out;
    CHECK(blk.delta_in == din);
    // t-part: smallest prefix of the remaining b with sum >= delta
    double acc = 0;
    std::size_t n = 0;
    if (din > 0)
      while (acc < din) acc += b[pos + n++];
    CHECK(blk.t_count == n);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(blk.values[j] == b[pos + j]);
      CHECK(blk.perturbed[j] == doctest::Approx(b[pos + j] - b[pos + j] / acc * din));
      CHECK(blk.perturbed[j] >= -1e-12);
    }
    pos += n;
    // s-part: smallest run with sum >= 1/(1-b1)
    acc = 0;
    std::size_t m = 0;
    while (acc < 1 / (1 - b1)) acc += b[pos + m++];
    CHECK(blk.s_count == m);
    const std::size_t s0 = blk.values.size() - m;
    double sum_before = 0;
    for (std::size_t j = 0; j < s0; ++j) sum_before += blk.perturbed[j];
    const double total = sum_before + acc;
    CHECK(blk.delta_out == doctest::Approx(std::ceil(total) - total));
    CHECK(blk.delta_out >= 0);
    CHECK(blk.delta_out < 1);
    for (std::size_t j = 0; j < m; ++j) {
      CHECK(blk.values[s0 + j] == b[pos + j]);
      CHECK(blk.perturbed[s0 + j] == doctest::Approx(b[pos + j] + b[pos + j] / acc * blk.delta_out));
      CHECK(blk.perturbed[s0 + j] <= 1 + 1e-12);
    }
    pos += m;
  }
}

} // namespace

TEST_CASE("case A bookkeeping replay") {
  for (const auto& s : {divergent("1/2", Kind::Constant, 0.5), divergent("1/(i+1)", Kind::Harmonic, 0.5),
                        divergent("0.45 - 0.1 / i", Kind::Constant, 0.35)}) {
    INFO(s.tail.generator().source());
    const CaseAConstruction c = build_case_a(s, 2);
    check_truncation(c.result, s);
    replay(c, c.complemented ? complement(s) : s);
  }
}

TEST_CASE("case A through complements") {
  const SequenceSpec high{{}, TailRule::divergent_high("1/3", {Kind::Constant, 1.0 / 3, 1})};
  const CaseAConstruction a = build_case_a(high, 2);
  CHECK(a.complemented);
  CHECK(a.result.pad == 1);
  check_truncation(a.result, high);

  const SequenceSpec rising = divergent("1/3 - 1/(i+10)", Kind::Constant, 0.2);
  const CaseAConstruction b = build_case_a(rising, 2);
  CHECK(b.complemented);
  check_truncation(b.result, rising);
  replay(b, complement(rising));

  const SequenceSpec mixed{{0.9, 0, 1}, TailRule::divergent_low("i % 2 == 0 ? 0.4 : 0.3", {Kind::Constant, 0.3, 1})};
  const CaseAConstruction m = build_case_a(mixed, 2);
  check_truncation(m.result, mixed);
}

TEST_CASE("kadison 13 and 14") {
  const TruncatedProjection e = kadison13({{1}, TailRule::zero()});
  CHECK(e.projection(0, 0) == Complex(1));
  CHECK(trace(e.projection).real() == doctest::Approx(1));
  CHECK(max_abs(e.projection - Matrix::diagonal(diagonal(e.projection))) == 0);

  try {
    kadison13({{}, TailRule::geometric_low(0.5, 0.5)});
    FAIL("expected an error");
  } catch (const PreconditionError& err) {
    CHECK(err.defect() == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(kadison13({{0.5, 0.5}, TailRule::geometric_low(0.5, 0.5)}), PreconditionError);
  const SequenceSpec four{{0.5, 0.5, 0.5, 0.5}, TailRule::zero()};
  const TruncatedProjection two = kadison13(four);
  CHECK(trace(two.projection).real() == doctest::Approx(2).epsilon(1e-10));
  check_truncation(two, four);

  const TruncatedProjection co = kadison14(complement(four));
  CHECK(co.pad == 1);
  check_truncation(co, complement(four));
  CHECK(static_cast<double>(co.projection.size()) - trace(co.projection).real() == doctest::Approx(2));
  CHECK_THROWS_AS(kadison13(halving_interleave()), PreconditionError);

  const SequenceSpec g{{0.75}, TailRule::geometric_low(0.25, 0.5)};
  REQUIRE(kadison_sums(g, 0.5).a_f.value == 0.25);
  const TruncatedProjection gp = kadison13(g);
  check_truncation(gp, g);
  CHECK(trace(gp.projection).real() == doctest::Approx(1).epsilon(1e-10));
}

TEST_CASE("entry bounds and diagonal readback") {
  CHECK(entry_bound_violation(carpenter_finite(RealVector{0.5, 0.5})) <= 1e-15);
  CHECK(entry_bound_violation(Matrix(2, {0.5, 1, 1, 0.5})) == doctest::Approx(0.5));
  const SequenceSpec d = diagonal_spec(Matrix::diagonal(RealVector{0.25, 1.0 + 1e-14, 0.5}));
  CHECK(d.prefix == RealVector{0.25, 1, 0.5});
  CHECK(column_residual(Matrix::identity(2), Matrix::identity(1), 1, 1.0) == 0);
  CHECK(column_residual(Matrix::identity(2), Matrix::identity(1), 1, 0.0) == 1);
  CHECK_THROWS_AS(column_residual(Matrix(1), Matrix(2), 0), DimensionError);
}
