#include <gtest/gtest.h>

#include <cmath>

#include "hktaylor/corpus.hpp"
#include "hktaylor/error.hpp"
#include "hktaylor/func.hpp"

using namespace hktaylor;

namespace {

DerivativeOrder order_of(Evaluator f, Regularity r = Regularity::smooth) {
  DerivativeOrder o;
  o.eval = std::move(f);
  o.regularity = r;
  return o;
}

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

TEST(Regularity, ClassPredicates) {
  EXPECT_TRUE(is_continuous(Regularity::c0_only));
  EXPECT_FALSE(is_continuous(Regularity::lebesgue));
  EXPECT_FALSE(is_continuous(Regularity::hk_not_l1));
  EXPECT_TRUE(is_acg_star(Regularity::acg_star));
  EXPECT_FALSE(is_acg_star(Regularity::c0_only));
  EXPECT_EQ(to_string(Regularity::hk_not_l1), "hk-not-l1");
}

TEST(Func, RejectsMalformedChains) {
  EXPECT_EQ(code_of([] { Func("empty", {}); }), ErrorCode::invalid_params);
  EXPECT_EQ(code_of([] {
              Func("c0 below top", {order_of([](double) { return 0.0; }, Regularity::c0_only),
                                    order_of([](double) { return 0.0; })});
            }),
            ErrorCode::invalid_params);
  EXPECT_EQ(code_of([] {
              Func("jump below top", {order_of([](double) { return 0.0; }, Regularity::lebesgue),
                                      order_of([](double) { return 0.0; })});
            }),
            ErrorCode::invalid_params);
}

TEST(Func, OrderBeyondMaxIsUnavailable) {
  const Func f = make_kink();
  EXPECT_EQ(f.max_order(), 2);
  EXPECT_EQ(code_of([&] { (void)f.eval(3, 0.2); }), ErrorCode::order_unavailable);
  EXPECT_FALSE(f.has_order(-1));
}

TEST(Func, DerivativeExistenceFollowsTheCorpusDescription) {
  const Func kink = make_kink();
  EXPECT_FALSE(kink.derivative_exists(2, 0.5));
  EXPECT_TRUE(kink.derivative_exists(2, 0.25));
  EXPECT_TRUE(kink.derivative_exists(1, 0.5));
  EXPECT_EQ(kink.regularity(2), Regularity::lebesgue);
}

TEST(Func, DomainIsEnforced) {
  const Func f = make_hk_oscillator();
  EXPECT_NO_THROW(f.check_interval(Interval{0.0, 1.0}));
  EXPECT_EQ(code_of([&] { f.check_interval(Interval{0.0, 2.0}); }), ErrorCode::invalid_interval);
}

TEST(DerivativeChain, CorpusChainsAreConsistent) {
  for (const std::string& label : default_corpus()) {
    const Func f = registry_lookup(label);
    for (std::uint64_t seed : {1U, 2U, 3U}) {
      const auto violations = check_derivative_chain(f, Interval{0.0, 1.0}, seed);
      EXPECT_TRUE(violations.empty()) << label << " seed " << seed << ": order " << violations.front().order
                                      << " at " << violations.front().x;
    }
  }
}

TEST(DerivativeChain, DetectsAWrongDerivative) {
  const Func bad("bad", {order_of([](double x) { return std::sin(x); }),
                         order_of([](double x) { return 1.001 * std::cos(x); })});
  EXPECT_FALSE(check_derivative_chain(bad, Interval{0.0, 1.0}, 5).empty());
}

TEST(DerivativeChain, DetectsASignError) {
  const Func bad("bad", {order_of([](double x) { return std::exp(-x); }),
                         order_of([](double x) { return std::exp(-x); })});
  const auto violations = check_derivative_chain(bad, Interval{0.0, 1.0}, 5);
  ASSERT_FALSE(violations.empty());
  EXPECT_EQ(violations.front().order, 1);
}
