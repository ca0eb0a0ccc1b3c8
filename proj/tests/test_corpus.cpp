#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hktaylor/corpus.hpp"
#include "hktaylor/error.hpp"
#include "hktaylor/weierstrass.hpp"
#include "support/oracles.hpp"

using namespace hktaylor;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::evaluation_failure;
}

}  // namespace

TEST(Registry, CanonicalLabels) {
  EXPECT_EQ(registry_lookup("poly:k=3").label(), "poly:k=3");
  EXPECT_EQ(registry_lookup("exp").label(), "exp");
  EXPECT_EQ(registry_lookup("bump:alpha=4,beta=2,c=0.05").label(), "bump:alpha=4,beta=2,c=0.05");
  EXPECT_EQ(registry_lookup("bump").label(), "bump:alpha=5.5,beta=2,c=0.05");
  EXPECT_EQ(registry_lookup("weier").label(), "weier:a=0.5,b=13,K=40,n=2");
}

TEST(Registry, DefaultCorpusResolves) {
  const auto labels = default_corpus();
  EXPECT_EQ(labels.size(), 15U);
  for (const auto& label : labels) EXPECT_EQ(registry_lookup(label).label(), label);
}

TEST(Registry, Errors) {
  EXPECT_EQ(code_of([] { (void)registry_lookup("nosuch"); }), ErrorCode::unknown_function);
  EXPECT_EQ(code_of([] { (void)registry_lookup("poly:z=1"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { (void)registry_lookup("poly:k"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { (void)registry_lookup("poly:k=x"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { (void)registry_lookup("poly:k=21"); }), ErrorCode::invalid_params);
  EXPECT_EQ(code_of([] { (void)registry_lookup("exp:k=1"); }), ErrorCode::parse_error);
}

TEST(Registry, EntriesDescribeEveryFamily) {
  const auto entries = registry_entries();
  EXPECT_EQ(entries.size(), 8U);
  for (const auto& e : entries) EXPECT_FALSE(e.summary.empty()) << e.name;
}

TEST(BumpSum, CasesAndValidation) {
  EXPECT_EQ(bump_case({5.5, 2.0, 0.05}), BumpCase::i);
  EXPECT_EQ(bump_case({4.0, 2.0, 0.05}), BumpCase::ii);
  EXPECT_EQ(code_of([] { validate(BumpSumParams{6.0, 2.0, 0.05}); }), ErrorCode::invalid_params);
  EXPECT_EQ(code_of([] { validate(BumpSumParams{1.0, 1.5, 0.05}); }), ErrorCode::invalid_params);
  EXPECT_EQ(code_of([] { validate(BumpSumParams{1.0, 2.0, 0.0}); }), ErrorCode::invalid_params);
  // Half-width 0.6 at n = 1 overlaps the bump at 1/2.
  EXPECT_EQ(code_of([] { validate(BumpSumParams{1.0, 2.0, 0.6}); }), ErrorCode::invalid_params);
}

TEST(BumpSum, IndexLookup) {
  const BumpSumParams p{5.5, 2.0, 0.05};
  EXPECT_EQ(bump_index(p, 1.0 / 7.0), 7);
  EXPECT_EQ(bump_index(p, 1.0 / 7.0 + 0.9 * 0.05 / 49.0), 7);
  EXPECT_FALSE(bump_index(p, 1.0 / 7.5).has_value());
  EXPECT_FALSE(bump_index(p, 0.0).has_value());
  EXPECT_EQ(bump_index(p, 1.0 / 123456.0), 123456);
}

TEST(BumpSum, FirstDerivativePeakHasClosedForm) {
  // On bump n, max |f'| = (8c^3/(3√3)) n^(α−3β).
  const BumpSumParams p{5.5, 2.0, 0.05};
  const Func f = make_bump_sum(p);
  for (int n : {2, 5, 9}) {
    const double b = p.c * std::pow(n, -p.beta);
    const double peak = oracle::sup_abs([&](double x) { return f.eval(1, x); }, 1.0 / n - b, 1.0 / n + b, 200'001);
    const double closed = 8.0 * std::pow(p.c, 3) / (3.0 * std::sqrt(3.0)) * std::pow(n, p.alpha - 3.0 * p.beta);
    EXPECT_NEAR(peak, closed, 1e-9 * closed) << "n " << n;
  }
}

TEST(BumpSum, CaseISecondDerivativeIsNotAbsolutelyIntegrable) {
  // ∫|f''| over bump n is C·n^(α−3β) = C·n^(−1/2), so the sum over bumps
  // diverges.
  const BumpSumParams p{5.5, 2.0, 0.05};
  const Func f = make_bump_sum(p);
  auto l1_over_bump = [&](int n) {
    const double b = p.c * std::pow(n, -p.beta);
    return oracle::riemann([&](double x) { return std::abs(f.eval(2, x)); }, 1.0 / n - b, 1.0 / n + b, 20'000);
  };
  const double scaled = l1_over_bump(25) * std::sqrt(25.0);
  EXPECT_GT(scaled, 0.0);
  for (int n : {100, 400}) EXPECT_NEAR(l1_over_bump(n) * std::sqrt(n), scaled, 1e-6 * scaled) << "n " << n;
  EXPECT_FALSE(f.derivative_exists(2, 0.0));
  EXPECT_EQ(f.regularity(2), Regularity::hk_not_l1);
}

TEST(BumpSum, CaseIISecondDerivativeExistsAtZero) {
  const Func f = make_bump_sum({4.0, 2.0, 0.05});
  EXPECT_TRUE(f.derivative_exists(2, 0.0));
  EXPECT_EQ(f.eval(2, 0.0), 0.0);
  EXPECT_EQ(f.regularity(2), Regularity::lebesgue);
}

TEST(Weierstrass, PhaseReductionMatchesNaiveSumForSmallK) {
  const WeierstrassParams p{0.5, 13, 3, 2};
  const WeierstrassSeries w(p);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    double naive = 0.0;
    for (int k = 0; k <= 3; ++k) naive += std::pow(0.5, k) * std::cos(std::pow(13.0, k) * kPi * t);
    EXPECT_NEAR(w.g(t), naive, 1e-11) << "t " << t;
  }
}

TEST(Weierstrass, IntegerArgumentsUseParity) {
  const WeierstrassSeries w(WeierstrassParams{});
  const double geometric = (1.0 - std::pow(0.5, 41)) / 0.5;
  EXPECT_NEAR(w.g(0.0), geometric, 1e-15);
  EXPECT_NEAR(w.g(1.0), -geometric, 1e-15);
  EXPECT_NEAR(w.g(2.0), geometric, 1e-15);
}

TEST(Weierstrass, IteratedPrimitivesMatchOracles) {
  const WeierstrassSeries w(WeierstrassParams{0.5, 13, 3, 2});
  for (double x : {0.013, 0.2, 0.77}) {
    double once = 0.0;
    double twice = 0.0;
    for (int k = 0; k <= 3; ++k) {
      const double omega = std::pow(13.0, k) * kPi;
      once += std::pow(0.5, k) * std::sin(omega * x) / omega;
      twice += std::pow(0.5, k) * (1.0 - std::cos(omega * x)) / (omega * omega);
    }
    EXPECT_NEAR(w.iterated(1, x), once, 1e-13) << "x " << x;
    EXPECT_NEAR(w.iterated(2, x), twice, 1e-13) << "x " << x;
    // The midpoint rule resolves the fastest mode only to about 1e-10.
    EXPECT_NEAR(w.iterated(1, x), oracle::riemann([&](double t) { return w.g(t); }, 0.0, x, 400'000), 1e-8);
    EXPECT_NEAR(w.iterated(2, x), oracle::riemann([&](double t) { return w.iterated(1, t); }, 0.0, x, 400'000), 1e-8);
  }
}

TEST(Weierstrass, SingleTermReducesToCosine) {
  const WeierstrassParams p{1e-13, 60000000000001ULL, 0, 1};
  const Func f = make_weierstrass_taylor(p);
  for (double x : {0.1, 0.37, 0.9}) {
    EXPECT_NEAR(f.eval(1, x), std::cos(kPi * x), 1e-15);
    EXPECT_NEAR(f.eval(0, x), std::sin(kPi * x) / kPi, 1e-15);
  }
}

TEST(Weierstrass, Validation) {
  EXPECT_EQ(code_of([] { validate(WeierstrassParams{0.5, 12, 40, 2}); }), ErrorCode::invalid_params);
  EXPECT_EQ(code_of([] { validate(WeierstrassParams{0.5, 3, 40, 2}); }), ErrorCode::invalid_params);
  EXPECT_EQ(code_of([] { validate(WeierstrassParams{0.5, 13, 10, 2}); }), ErrorCode::invalid_params);
  EXPECT_EQ(code_of([] { validate(WeierstrassParams{0.5, 13, 40, 0}); }), ErrorCode::invalid_params);
  EXPECT_NO_THROW(validate(WeierstrassParams{}));
}

TEST(Weierstrass, TopOrderIsOnlyContinuous) {
  const Func f = make_weierstrass_taylor(WeierstrassParams{});
  EXPECT_EQ(f.max_order(), 2);
  EXPECT_EQ(f.regularity(2), Regularity::c0_only);
  EXPECT_EQ(f.eval(0, 0.0), 0.0);
  EXPECT_EQ(f.eval(1, 0.0), 0.0);
}

TEST(HkOscillator, AnchorsInvertEachOther) {
  const AnchorMap anchors = cubic_phase_anchors(0.5);
  for (double x : {0.9, 0.3, 0.01}) EXPECT_NEAR(anchors.abscissa_at(anchors.index_of(x)), x, 1e-14 * x);
  EXPECT_FALSE(anchors.sign_invariant);
}

TEST(HkOscillator, VariationBoundIsBelowTheTrueL1IntegralAndGrows) {
  const Func f = make_hk_oscillator();
  const double delta = 0.05;
  const double l1 = oracle::riemann([&](double x) { return std::abs(f.eval(1, x)); }, delta, 1.0);
  const double bound = oscillator_variation_lower_bound(delta);
  EXPECT_LE(bound, l1);
  EXPECT_GT(bound, 0.5 * l1);
  EXPECT_GT(oscillator_variation_lower_bound(0.01), oscillator_variation_lower_bound(0.02));
  EXPECT_EQ(code_of([] { (void)oscillator_variation_lower_bound(0.0); }), ErrorCode::invalid_params);
}
