#include <gtest/gtest.h>

#include <map>

#include "regseq/errors.hpp"
#include "regseq/maximal.hpp"
#include "support/oracles.hpp"

using namespace regseq;

namespace {

SequenceFamily canonical() { return SequenceFamily::regular(RegularFn::x_log_x()); }

// Direct definition with an independently enumerated B_N.
std::map<std::int64_t, Rational> brute_average(const std::vector<std::int64_t>& bn, const SignalF& f) {
  std::map<std::int64_t, Rational> out;
  const Rational w(1, static_cast<std::int64_t>(bn.size()));
  for (const auto& [p, v] : f.entries()) {
    for (std::int64_t n : bn) out[p - n] = out[p - n] + v * w;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == Rational(0); });
  return out;
}

std::vector<std::int64_t> brute_canonical(std::int64_t n) {
  return oracle::brute_window([](const oracle::hp& x) { return oracle::x_log_x(x); }, 2, 0, n);
}

SignalF mixed_signal() {
  return SignalF::from_entries({{0, Rational(3)}, {7, Rational(-2, 3)}, {-40, Rational(5, 7)}, {100, Rational(1, 2)}});
}

}  // namespace

TEST(Signal, BuildersAndNorm) {
  const SignalF f = SignalF::from_entries({{3, Rational(1)}, {-2, Rational(-1, 2)}, {3, Rational(-1)}, {5, Rational(0)}});
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.at(-2), Rational(-1, 2));
  EXPECT_EQ(f.at(3), Rational(0));
  EXPECT_EQ(f.l1_norm(), Rational(1, 2));
  EXPECT_FALSE(f.nonnegative());
  f.validate();

  const SignalF ind = interval_signal(-29, -1);
  EXPECT_EQ(ind.size(), 29u);
  EXPECT_EQ(ind.l1_norm(), Rational(29));
  EXPECT_EQ(delta_signal(4).shifted(3), delta_signal(7));
}

TEST(Signal, RandomIsDeterministicAndInRange) {
  const SignalF a = random_signal(7);
  EXPECT_EQ(a, random_signal(7));
  EXPECT_NE(a, random_signal(8));
  EXPECT_GE(a.size(), 60u);
  EXPECT_LE(a.size(), 64u);
  EXPECT_TRUE(a.nonnegative());
  for (const auto& [p, v] : a.entries()) {
    EXPECT_GE(p, -(1 << 16));
    EXPECT_LE(p, 1 << 16);
    EXPECT_EQ(v.den(), 1);
    EXPECT_GE(v.num(), 1);
    EXPECT_LE(v.num(), 16);
  }
}

TEST(ScaleSet, Validation) {
  EXPECT_EQ(ScaleSet::dyadic(3, 5).values(), (std::vector<std::int64_t>{8, 16, 32}));
  EXPECT_TRUE(ScaleSet::dyadic(3, 5).is_dyadic());
  EXPECT_FALSE(ScaleSet::range(8, 10).is_dyadic());
  EXPECT_THROW(ScaleSet({4, 8}), PreconditionError);
  EXPECT_THROW(ScaleSet({16, 8}), PreconditionError);
  EXPECT_THROW(ScaleSet({8, 8}), PreconditionError);
  EXPECT_THROW(ScaleSet({}), PreconditionError);
}

TEST(AverageAN, DeltaAtN32) {
  const SignalF a = average_AN(canonical(), 32, delta_signal());
  ASSERT_EQ(a.size(), 11u);
  for (std::int64_t n : {1, 3, 5, 8, 10, 13, 16, 19, 23, 26, 29}) EXPECT_EQ(a.at(-n), Rational(1, 11)) << n;
  EXPECT_EQ(a.at(0), Rational(0));
  EXPECT_EQ(a.at(-2), Rational(0));
}

TEST(AverageAN, ZeroSignal) {
  EXPECT_TRUE(average_AN(canonical(), 32, SignalF{}).empty());
  EXPECT_TRUE(average_AN(SequenceFamily::rosenblatt(), 64, SignalF{}).empty());
}

TEST(AverageAN, IndicatorAveragesUnderForwardShift) {
  // A_N f(x) reads f(x + n) with n in B_32 = {1, ..., 29}: the translates all
  // land in [-29, -1] at x = -30, and none does at x = 0.
  const SignalF a = average_AN(canonical(), 32, interval_signal(-29, -1));
  EXPECT_EQ(a.at(-30), Rational(1));
  EXPECT_EQ(a.at(0), Rational(0));
  EXPECT_EQ(a.at(-1), Rational(0));
  EXPECT_EQ(a.at(-2), Rational(1, 11));  // only n = 1 lands in range
  EXPECT_EQ(a.max_value(), Rational(1));
}

TEST(AverageAN, MatchesDirectDefinition) {
  for (std::int64_t n : {8, 32, 100, 1000}) {
    const auto bn = brute_canonical(n);
    for (const SignalF& f : {delta_signal(), interval_signal(-29, -1), mixed_signal(), random_signal(3)}) {
      const SignalF a = average_AN(canonical(), n, f, MaximalOptions{{}, 3});
      EXPECT_EQ(a, SignalF::from_map(brute_average(bn, f))) << n;
    }
  }
  const auto ctl = oracle::brute_control(0, 500);
  EXPECT_EQ(average_AN(SequenceFamily::rosenblatt(), 500, mixed_signal()),
            SignalF::from_map(brute_average(ctl, mixed_signal())));
}

TEST(AverageAN, DegenerateAndPrefix) {
  const auto empty = SequenceFamily::regular(RegularFn::make(1.0, ThetaSpec::log_power(20.0, 1.0)));
  EXPECT_THROW(average_AN(empty, 16, delta_signal()), DegenerateInputError);
  const WindowB prefix = enumerate_B(canonical(), 0, 4096);
  for (std::int64_t n : {8, 100, 4096}) {
    EXPECT_EQ(average_AN(prefix, n, mixed_signal()), average_AN(canonical(), n, mixed_signal()));
  }
  EXPECT_THROW(average_AN(prefix, 5000, delta_signal()), PreconditionError);
}

TEST(AverageAN, LinearPositiveContractive) {
  const SignalF f = mixed_signal();
  const SignalF g = random_signal(11);
  const Rational s(-3, 5);
  for (std::int64_t n : {16, 256, 4096}) {
    const SignalF af = average_AN(canonical(), n, f);
    const SignalF ag = average_AN(canonical(), n, g);
    std::map<std::int64_t, Rational> comb;
    const SignalF fs = f.scaled(s);
    const SignalF afs = af.scaled(s);
    for (const auto& [p, v] : fs.entries()) comb[p] = comb[p] + v;
    for (const auto& [p, v] : g.entries()) comb[p] = comb[p] + v;
    std::map<std::int64_t, Rational> expect;
    for (const auto& [p, v] : afs.entries()) expect[p] = expect[p] + v;
    for (const auto& [p, v] : ag.entries()) expect[p] = expect[p] + v;
    EXPECT_EQ(average_AN(canonical(), n, SignalF::from_map(comb)), SignalF::from_map(expect));
    EXPECT_TRUE(ag.nonnegative());
    EXPECT_LE(af.l1_norm(), f.l1_norm());
    EXPECT_LE(ag.l1_norm(), g.l1_norm());
    EXPECT_EQ(ag.l1_norm(), g.l1_norm());  // nonnegative: no cancellation
  }
}

TEST(AverageAN, TranslationEquivariance) {
  for (std::int64_t k : {-1000, -1, 0, 5, 77777}) {
    for (std::int64_t n : {32, 2048}) {
      const SignalF f = mixed_signal();
      EXPECT_EQ(average_AN(canonical(), n, f.shifted(k)), average_AN(canonical(), n, f).shifted(k));
    }
  }
}

TEST(AverageAN, ThreadCountDoesNotChangeResult) {
  const SignalF f = random_signal(5);
  const auto a = average_AN(canonical(), 1 << 18, f, MaximalOptions{{}, 1});
  const auto b = average_AN(canonical(), 1 << 18, f, MaximalOptions{{}, 4});
  EXPECT_EQ(a, b);
}

TEST(MaximalFn, SingletonScaleEqualsAbsoluteAverage) {
  const SignalF m = maximal_fn(canonical(), ScaleSet({32}), delta_signal());
  EXPECT_EQ(m, average_AN(canonical(), 32, delta_signal()));
  std::map<std::int64_t, Rational> abs_vals;
  const SignalF a64 = average_AN(canonical(), 64, mixed_signal());
  for (const auto& [p, v] : a64.entries()) abs_vals[p] = v.abs();
  EXPECT_EQ(maximal_fn(canonical(), ScaleSet({64}), mixed_signal()), SignalF::from_map(abs_vals));
}

TEST(MaximalFn, DeltaDyadic3To10) {
  const SignalF m = maximal_fn(canonical(), ScaleSet::dyadic(3, 10), delta_signal());
  EXPECT_EQ(m.at(-1), Rational(1, 4));
  EXPECT_EQ(m.max_value(), Rational(1, 4));
  // Direct: max over N of [n in B_N] / #B_N.
  std::map<std::int64_t, Rational> expect;
  for (int j = 3; j <= 10; ++j) {
    const auto bn = brute_canonical(std::int64_t{1} << j);
    const Rational w(1, static_cast<std::int64_t>(bn.size()));
    for (std::int64_t n : bn) expect[-n] = std::max(expect[-n], w);
  }
  EXPECT_EQ(m, SignalF::from_map(expect));
}

TEST(MaximalFn, DominatesEveryAverageForNonnegative) {
  const SignalF f = random_signal(21);
  const ScaleSet scales = ScaleSet::dyadic(3, 14);
  const SignalF m = maximal_fn(canonical(), scales, f, MaximalOptions{{}, 2});
  for (std::int64_t n : scales.values()) {
    const SignalF a = average_AN(canonical(), n, f);
    for (const auto& [p, v] : a.entries()) ASSERT_GE(m.at(p), v);
  }
  EXPECT_EQ(m, maximal_fn(canonical(), scales, f, MaximalOptions{{}, 1}));
  const WindowB prefix = enumerate_B(canonical(), 0, scales.max());
  EXPECT_EQ(m, maximal_fn(prefix, scales, f, 3));
}

TEST(Weak11, DeltaAtN32) {
  const SignalF m = maximal_fn(canonical(), ScaleSet({32}), delta_signal());
  const WeakTypeReport r = weak11_sweep(m, Rational(1), {Rational(1, 2), Rational(1, 11), Rational(1, 12)});
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].level_size, 0);  // above max Mf
  EXPECT_EQ(r.rows[1].level_size, 0);  // strict superlevel set
  EXPECT_EQ(r.rows[2].level_size, 11);
  EXPECT_EQ(r.rows[2].normalized, Rational(11, 12));
  EXPECT_EQ(r.empirical_constant, Rational(11, 12));
}

TEST(Weak11, DeltaDyadic3To10Levels) {
  const SignalF m = maximal_fn(canonical(), ScaleSet::dyadic(3, 10), delta_signal());
  const WeakTypeReport r = weak11_sweep(m, Rational(1), default_lambda_grid(m.max_value()));
  ASSERT_EQ(r.rows.front().lambda, Rational(1, 4));
  EXPECT_EQ(r.rows[0].level_size, 0);
  EXPECT_EQ(r.rows[1].lambda, Rational(1, 8));
  EXPECT_EQ(r.rows[1].level_size, 7);  // positions -B_16
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_GE(r.rows[i].level_size, r.rows[i - 1].level_size);
  EXPECT_GT(r.empirical_constant, Rational(0));
}

TEST(Weak11, GridAndDegenerateInputs) {
  const SignalF m = maximal_fn(canonical(), ScaleSet({32}), delta_signal());
  EXPECT_THROW(weak11_sweep(m, Rational(0), {Rational(1, 2)}), DegenerateInputError);
  EXPECT_THROW(weak11_sweep(SignalF{}, Rational(1), {Rational(1, 2)}), DegenerateInputError);
  EXPECT_THROW(weak11_sweep(m, Rational(1), {Rational(1, 4), Rational(1, 2)}), PreconditionError);
  EXPECT_THROW(weak11_sweep(m, Rational(1), {Rational(0)}), PreconditionError);
  const auto grid = default_lambda_grid(Rational(3, 10));
  EXPECT_EQ(grid.front(), Rational(1, 4));
  EXPECT_EQ(grid.back(), Rational(1, std::int64_t{1} << 40));
  EXPECT_EQ(grid.size(), 39u);
}

TEST(Weak11, HomogeneityUnderScaling) {
  const SignalF f = mixed_signal();
  const ScaleSet scales = ScaleSet::dyadic(3, 9);
  const SignalF m = maximal_fn(canonical(), scales, f);
  const auto grid = default_lambda_grid(m.max_value());
  const WeakTypeReport base = weak11_sweep(m, f.l1_norm(), grid);
  for (const Rational t : {Rational(3), Rational(2, 7)}) {
    const SignalF ft = f.scaled(t);
    const SignalF mt = maximal_fn(canonical(), scales, ft);
    EXPECT_EQ(mt, m.scaled(t));
    std::vector<Rational> scaled_grid;
    for (const auto& l : grid) scaled_grid.push_back(l * t);
    const WeakTypeReport r = weak11_sweep(mt, ft.l1_norm(), scaled_grid);
    EXPECT_EQ(r.empirical_constant, base.empirical_constant);
    for (std::size_t i = 0; i < r.rows.size(); ++i) EXPECT_EQ(r.rows[i].level_size, base.rows[i].level_size);
  }
}

TEST(Weak11, DeltaConstantStaysBoundedTo2pow22) {
  const WindowB prefix = enumerate_B(canonical(), 0, std::int64_t{1} << 22);
  auto constant = [&](int jmax) {
    const SignalF m = maximal_fn(prefix, ScaleSet::dyadic(3, jmax), delta_signal());
    return weak11_sweep(m, Rational(1), default_lambda_grid(m.max_value())).empirical_constant;
  };
  const Rational ref = constant(12);
  for (int jmax : {16, 20, 22}) {
    const Rational c = constant(jmax);
    EXPECT_LE(c, ref * Rational(4)) << jmax;
    EXPECT_GE(c * Rational(4), ref) << jmax;
  }
}

TEST(Signal, NormUnavailableWhenDenominatorsOverflow) {
  const SignalF m = maximal_fn(canonical(), ScaleSet::dyadic(3, 22), delta_signal());
  EXPECT_TRUE(average_AN(canonical(), 1 << 22, delta_signal()).has_l1_norm());
  if (!m.has_l1_norm()) EXPECT_THROW(m.l1_norm(), OverflowError);
  m.validate();
}
