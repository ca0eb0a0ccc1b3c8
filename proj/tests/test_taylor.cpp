#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hktaylor/corpus.hpp"
#include "hktaylor/error.hpp"
#include "hktaylor/taylor.hpp"
#include "support/oracles.hpp"

using namespace hktaylor;

namespace {

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

TEST(Factorial, ExactUpToTheMaximumDegree) {
  EXPECT_EQ(factorial(0), 1.0);
  EXPECT_EQ(factorial(5), 120.0);
  EXPECT_EQ(factorial(20), 2432902008176640000.0);
}

TEST(TaylorData, ExponentialCoefficients) {
  const TaylorData P = taylor_data(make_exp(), 0.0, 6);
  ASSERT_EQ(P.coeffs.size(), 7U);
  for (int k = 0; k <= 6; ++k) EXPECT_DOUBLE_EQ(P.coeffs[static_cast<std::size_t>(k)], 1.0 / factorial(k));
  EXPECT_FALSE(P.top.has_value());
}

TEST(TaylorData, PolynomialIsItsOwnExpansion) {
  const Func f = make_polynomial(4);
  for (double x : {0.3, 0.5, 0.9}) {
    EXPECT_NEAR(taylor_poly(f, 0.2, 4, x), std::pow(x, 4), 1e-15);
    EXPECT_NEAR(remainder_direct(f, 0.2, 4, x), 0.0, 1e-15);
  }
}

TEST(TaylorData, PrimitiveMatchesRiemannOracle) {
  const TaylorData P = modified_taylor_data(make_sin(), 0.1, 0.6, 3);
  const double exact = P.primitive(0.9);
  const double reference = oracle::riemann([&](double t) { return P.eval(t); }, 0.1, 0.9);
  EXPECT_NEAR(exact, reference, 1e-12);
  EXPECT_EQ(P.primitive(0.1), 0.0);
}

TEST(TaylorData, ModifiedAtBaseEqualsPlain) {
  const Func f = make_cos();
  for (int n = 1; n <= 5; ++n) {
    for (double x : {0.3, 0.8}) {
      EXPECT_NEAR(modified_taylor_poly(f, 0.0, 0.0, n, x), taylor_poly(f, 0.0, n, x), 1e-15);
    }
  }
}

TEST(TaylorData, DegreeLimits) {
  EXPECT_EQ(code_of([] { (void)taylor_data(make_exp(), 0.0, kMaxDegree + 1); }), ErrorCode::invalid_degree);
  EXPECT_EQ(code_of([] { (void)taylor_data(make_exp(), 0.0, -1); }), ErrorCode::invalid_degree);
  EXPECT_EQ(code_of([] { (void)modified_taylor_data(make_exp(), 0.0, 0.5, 0); }), ErrorCode::invalid_degree);
  EXPECT_EQ(code_of([] { (void)taylor_data(make_kink(), 0.0, 3); }), ErrorCode::order_unavailable);
}

TEST(TaylorData, PointsBelowTheBaseAreRejected) {
  EXPECT_EQ(code_of([] { (void)remainder_integral(make_exp(), 0.5, 2, 0.25, 1e-10); }), ErrorCode::invalid_point);
}

TEST(TaylorData, MissingDerivativesAreNamed) {
  const Func bump = make_bump_sum(BumpSumParams{5.5, 2.0, 0.05});
  EXPECT_EQ(code_of([&] { (void)taylor_data(bump, 0.0, 2); }), ErrorCode::derivative_unavailable_at_base);
  EXPECT_EQ(code_of([] { (void)modified_taylor_data(make_kink(), 0.0, 0.5, 2); }),
            ErrorCode::derivative_unavailable_at_x0);
}

TEST(RemainderForms, AgreeOnSmoothFunctions) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Func& f : {make_exp(), make_sin(), make_cos(), make_polynomial(5)}) {
    for (int n = 0; n <= 4; ++n) {
      const double x = u(rng);
      const double direct = remainder_direct(f, 0.0, n, x);
      const IntegralEstimate integral = remainder_integral(f, 0.0, n, x, 1e-13);
      EXPECT_NEAR(integral.value, direct, 1e-13) << f.label() << " n " << n;
      if (n >= 1) {
        const IntegralEstimate parts = remainder_by_parts(f, 0.0, n, x, 1e-13);
        EXPECT_NEAR(parts.value, direct, 1e-13) << f.label() << " n " << n;
      }
    }
  }
}

TEST(RemainderForms, IntegralFormMatchesRiemannOracle) {
  // (1/2!) ∫_0^x e^t (x − t)^2 dt against the dense midpoint rule.
  const double x = 0.7;
  const IntegralEstimate est = remainder_integral(make_exp(), 0.0, 2, x, 1e-13);
  const double reference = oracle::riemann([&](double t) { return std::exp(t) * (x - t) * (x - t) / 2.0; }, 0.0, x);
  EXPECT_NEAR(est.value, reference, 1e-12);
}

TEST(RemainderForms, ModifiedIntegralMatchesDirect) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Func& f : {make_exp(), make_sin(), make_polynomial(3), make_kink()}) {
    for (int n = 1; n <= 2; ++n) {
      for (int i = 0; i < 8; ++i) {
        const double x = u(rng);
        double x0 = u(rng);
        if (!f.derivative_exists(n, x0)) x0 = 0.25;
        const double direct = modified_remainder_direct(f, 0.0, x0, n, x);
        const IntegralEstimate est = modified_remainder_integral(f, 0.0, x0, n, x, 1e-13);
        EXPECT_NEAR(est.value, direct, 1e-12) << f.label() << " n " << n << " x " << x;
      }
    }
  }
}

TEST(RemainderForms, HkOscillatorFirstOrder) {
  // R_0(x) = F(x) − F(0) = ∫_0^x F' with F' not Lebesgue integrable.
  const Func f = make_hk_oscillator();
  for (double x : {0.05, 0.3, 1.0}) {
    const IntegralEstimate est = remainder_integral(f, 0.0, 0, x, 1e-10);
    EXPECT_NEAR(est.value, remainder_direct(f, 0.0, 0, x), 1e-9);
  }
}
