#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "hktaylor/bounds.hpp"
#include "hktaylor/corpus.hpp"
#include "hktaylor/error.hpp"
#include "support/oracles.hpp"

using namespace hktaylor;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-12;
const Interval kUnit{0.0, 1.0};

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::evaluation_failure;
}

void expect_pair(const BoundCheck& c, double lhs, double rhs, double tol = 1e-9) {
  EXPECT_NEAR(c.lhs.value, lhs, tol) << c.label;
  EXPECT_NEAR(c.rhs.value, rhs, tol) << c.label;
  EXPECT_NE(c.verdict, Verdict::violated) << c.label;
}

}  // namespace

TEST(Verdict, CalibratedThreeWaySplit) {
  EXPECT_EQ(make_check("t", {1.0, 0.0}, {2.0, 0.0}, {}).verdict, Verdict::holds);
  EXPECT_EQ(make_check("t", {1.0, 0.01}, {1.05, 0.0}, {}).verdict, Verdict::holds_within_error);
  EXPECT_EQ(make_check("t", {1.05, 0.0}, {1.0, 0.01}, {}).verdict, Verdict::holds_within_error);
  EXPECT_EQ(make_check("t", {1.2, 0.001}, {1.0, 0.001}, {}).verdict, Verdict::violated);
  const BoundCheck c = make_check("t", {1.0, 0.0}, {3.0, 0.0}, {});
  EXPECT_DOUBLE_EQ(c.slack, 2.0);
  EXPECT_EQ(to_string(Verdict::holds_within_error), "holds_within_error");
}

TEST(HolderPair, Conjugates) {
  EXPECT_EQ(HolderPair::conjugate(1.0).beta, kInf);
  EXPECT_DOUBLE_EQ(HolderPair::conjugate(2.0).beta, 2.0);
  EXPECT_DOUBLE_EQ(HolderPair::conjugate(kInf).beta, 1.0);
  EXPECT_DOUBLE_EQ(HolderPair::make(3.0, 1.5).beta, 1.5);
  EXPECT_EQ(code_of([] { (void)HolderPair::make(2.0, 3.0); }), ErrorCode::conjugate_mismatch);
}

TEST(SpotValues, CubeRemaindersWithDenseOracles) {
  const Func cube = make_polynomial(3);
  const BoundCheck t3 = bound_thm3_alexiewicz(cube, kUnit, 2, kTol);
  expect_pair(t3, 0.25, 1.0);
  EXPECT_NEAR(oracle::alexiewicz([](double t) { return t * t * t; }, 0.0, 1.0), 0.25, 1e-9);

  const BoundCheck t2 = bound_thm2_alexiewicz(cube, kUnit, 0.5, 2, kTol);
  expect_pair(t2, 0.25, 0.375);
  EXPECT_NEAR(oracle::alexiewicz([](double t) { return t * t * t - 1.5 * t * t; }, 0.0, 1.0), 0.25, 1e-9);
  EXPECT_NEAR(oracle::alexiewicz([](double t) { return 6.0 * t - 3.0; }, 0.0, 1.0) / 2.0, 0.375, 1e-9);
}

TEST(SpotValues, CubeLpBounds) {
  const Func cube = make_polynomial(3);
  // ‖x^3 − 3x^2/2‖_1 = 1/4 against ‖6t − 3‖/(1!·1) · 1/2 = 3/8.
  expect_pair(bound_thm2_lp(cube, kUnit, 0.5, 2, 1.0, kTol), 0.25, 0.375);
  EXPECT_NEAR(oracle::lp([](double t) { return t * t * t - 1.5 * t * t; }, 0.0, 1.0, 1.0), 0.25, 1e-9);
  // sup |x^3| = 1 against ‖6‖/2! = 3.
  expect_pair(bound_thm3_lp(cube, kUnit, 2, kInf, kTol), 1.0, 3.0);
}

TEST(SpotValues, CubeViaA4IsTightAtPEqualsOne) {
  const Func cube = make_polynomial(3);
  const BoundCheck c = bound_thm3_lp_via_A(cube, kUnit, 2, 1.0, 1.0, AChoice::a4, kTol);
  EXPECT_EQ(c.label, "thm3.lp.A4");
  expect_pair(c, 0.25, 0.25);
  EXPECT_EQ(c.verdict, Verdict::holds_within_error);
  // p = 2: (1/2!)(∫ 36 t^2 (1 − t)^2)^{1/2}.
  const BoundCheck c2 = bound_thm3_lp_via_A(cube, kUnit, 2, 2.0, 1.0, AChoice::a4, kTol);
  expect_pair(c2, 1.0 / std::sqrt(7.0), 0.5 * std::sqrt(36.0 / 30.0));
}

TEST(SpotValues, ExponentialAndKink) {
  const double e = std::numbers::e;
  expect_pair(bound_thm3_alexiewicz(make_exp(), kUnit, 1, kTol), e - 2.5, (e - 1.0) / 2.0);
  expect_pair(bound_thm4(make_kink(), kUnit, 1, kTol), 0.125, 0.25);
}

TEST(SpotValues, PointwiseBoundUsesTheRestrictedNorm) {
  // |R_1(x)| = e^x − 1 − x against (x − a)·‖e^t‖_[0,x] = x(e^x − 1).
  const double x = 0.5;
  const BoundCheck c = bound_thm3_pointwise(make_exp(), kUnit, 1, x, kTol);
  expect_pair(c, std::exp(x) - 1.0 - x, x * (std::exp(x) - 1.0));
  ASSERT_TRUE(c.params.x.has_value());
  EXPECT_EQ(*c.params.x, x);
}

TEST(Preconditions, SkipReasons) {
  const Func bump_i = make_bump_sum({5.5, 2.0, 0.05});
  EXPECT_EQ(code_of([&] { (void)bound_thm3_alexiewicz(bump_i, kUnit, 2, kTol); }),
            ErrorCode::derivative_unavailable_at_base);
  EXPECT_EQ(code_of([&] { require_thm3(make_kink(), kUnit, 2, true); }), ErrorCode::order_unavailable);
  EXPECT_EQ(code_of([&] { require_thm4(make_hk_oscillator(), kUnit, 1); }), ErrorCode::regularity_precondition);
  EXPECT_EQ(code_of([&] { require_thm2(make_kink(), kUnit, 2, 0.5); }), ErrorCode::derivative_unavailable_at_x0);
  EXPECT_EQ(code_of([&] { require_thm2(make_exp(), kUnit, 0, 0.5); }), ErrorCode::invalid_degree);
  EXPECT_EQ(code_of([&] { require_thm2(make_exp(), Interval{0.0, 1.0}, 1, 2.0); }), ErrorCode::invalid_point);
}

TEST(Preconditions, CaseIIsExactlyWhereTheModifiedFormIsNeeded) {
  // thm3 fails at n = 2 but thm2 with an interior x0 applies.
  const Func bump_i = make_bump_sum({5.5, 2.0, 0.05});
  const double x0 = auto_x0(bump_i, kUnit, 2);
  EXPECT_TRUE(bump_i.derivative_exists(2, x0));
  const BoundCheck c = bound_thm2_alexiewicz(bump_i, kUnit, x0, 2, 1e-10);
  EXPECT_NE(c.verdict, Verdict::violated);
  EXPECT_GT(c.slack, 0.0);
}

TEST(AutoX0, AvoidsPointsWithoutTheDerivative) {
  const Func kink = make_kink();
  const double x0 = auto_x0(kink, kUnit, 2);
  EXPECT_NE(x0, 0.5);
  EXPECT_TRUE(kink.derivative_exists(2, x0));
  EXPECT_EQ(code_of([&] { (void)auto_x0(kink, kUnit, 3); }), ErrorCode::order_unavailable);
}

TEST(AConstants, AreFiniteAndNonNegative) {
  const Func f = make_sin();
  for (double p : {1.0, 2.0, 3.0}) {
    for (double alpha : {1.0, 2.0, kInf}) {
      const AConstants a = a_constants(f, kUnit, 2, p, alpha, 1e-11);
      for (const Quantity& q : {a.a1, a.a2, a.a3, a.a4}) {
        EXPECT_TRUE(std::isfinite(q.value));
        EXPECT_GE(q.value, 0.0);
      }
    }
  }
}

TEST(AConstants, A2AtAlphaOneEqualsA1ForNAboveOne) {
  // With α = 1 the Hölder step degenerates to the L1 form of A1 when the
  // L1 and Alexiewicz norms of a non-negative f^(n) coincide.
  const Func f = make_exp();
  const AConstants a = a_constants(f, kUnit, 2, 2.0, 1.0, 1e-11);
  EXPECT_NEAR(a.a1.value, a.a2.value, 1e-9);
}

TEST(Soundness, SmoothFunctionsNeverViolate) {
  for (const Func& f : {make_exp(), make_sin(), make_cos(), make_polynomial(6)}) {
    Analysis A(f, kUnit, 1e-11);
    for (int n = 1; n <= 4; ++n) {
      std::vector<BoundCheck> checks{bound_thm2_alexiewicz(A, 0.3, n), bound_thm3_alexiewicz(A, n), bound_thm4(A, n)};
      for (double p : {1.0, 2.0, 4.0, kInf}) {
        checks.push_back(bound_thm2_lp(A, 0.3, n, p));
        checks.push_back(bound_thm3_lp(A, n, p));
      }
      for (double x : {0.1, 0.6, 1.0}) {
        checks.push_back(bound_thm2_pointwise(A, 0.3, n, x));
        checks.push_back(bound_thm3_pointwise(A, n, x));
      }
      for (AChoice which : {AChoice::a1, AChoice::a2, AChoice::a3, AChoice::a4}) {
        checks.push_back(bound_thm3_lp_via_A(A, n, 2.0, 2.0, which));
      }
      for (const BoundCheck& c : checks) {
        EXPECT_NE(c.verdict, Verdict::violated) << f.label() << " " << c.label << " n " << n;
        EXPECT_GE(c.lhs.value, 0.0);
      }
    }
  }
}

TEST(Soundness, Thm4RhsAgreesWithThm3RhsForSmoothFunctions) {
  for (const Func& f : {make_exp(), make_sin(), make_polynomial(4)}) {
    for (int n = 1; n <= 3; ++n) {
      const BoundCheck t4 = bound_thm4(f, kUnit, n, kTol);
      const BoundCheck t3 = bound_thm3_alexiewicz(f, kUnit, n, kTol);
      EXPECT_NEAR(t4.rhs.value, t3.rhs.value, kCalibration * (t4.rhs.error + t3.rhs.error) + 1e-15)
          << f.label() << " n " << n;
      EXPECT_NEAR(t4.lhs.value, t3.lhs.value, 1e-12);
    }
  }
}

TEST(Soundness, WeierstrassThm4HasPositiveSlack) {
  const BoundCheck c = bound_thm4(make_weierstrass_taylor({}), kUnit, 2, 1e-10);
  EXPECT_EQ(c.verdict, Verdict::holds);
  EXPECT_NEAR(c.rhs.value, 4.0 / 6.0, 1e-9);
}
