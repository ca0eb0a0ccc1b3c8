#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "hktaylor/func.hpp"
#include "hktaylor/norms.hpp"
#include "hktaylor/taylor.hpp"

namespace hktaylor {

enum class Verdict { holds, holds_within_error, violated };
std::string_view to_string(Verdict v) noexcept;

/// A computed value with an absolute error bound.
struct Quantity {
  double value = 0.0;
  double error = 0.0;
  bool operator==(const Quantity&) const = default;
};

struct BoundParams {
  int n = 0;
  std::optional<double> p;
  std::optional<double> alpha;
  std::optional<double> x0;
  std::optional<double> x;
  bool operator==(const BoundParams&) const = default;
};

struct BoundCheck {
  std::string label;
  Quantity lhs;
  Quantity rhs;
  double slack = 0.0;  // rhs − lhs
  Verdict verdict = Verdict::holds;
  BoundParams params;
};

/// Verdict with combined error K·(lhs.error + rhs.error), K = kCalibration.
BoundCheck make_check(std::string label, Quantity lhs, Quantity rhs, BoundParams params);

/// Hölder exponents with 1/alpha + 1/beta = 1.
struct HolderPair {
  double alpha;
  double beta;
  static HolderPair conjugate(double alpha);
  /// Throws Error(conjugate_mismatch) unless the pair is conjugate to 1e-12.
  static HolderPair make(double alpha, double beta);
};

struct AConstants {
  Quantity a1, a2, a3, a4;
  HolderPair holder{1.0, 0.0};
};

enum class AChoice { a1, a2, a3, a4 };
std::string_view to_string(AChoice c) noexcept;

/// Shared state for all bound checks on one function and interval: tabulated
/// primitives per derivative order and cached norms, so restricted and
/// shifted norms reuse one cumulative pass.
class Analysis {
 public:
  Analysis(const Func& f, Interval iv, double tol);

  const Func& func() const noexcept { return f_; }
  const Interval& interval() const noexcept { return iv_; }
  double tol() const noexcept { return tol_; }

  /// Alexiewicz norm of f^(k) − c over [a, upto]. An only-continuous order is
  /// handled through its exact primitive f^(k−1), without quadrature.
  Quantity order_alexiewicz(int k, double c, double upto);
  Quantity order_alexiewicz(int k, double c = 0.0) { return order_alexiewicz(k, c, iv_.hi); }

  /// ‖f^(k) − c‖_p over [a, b], 1 ≤ p ≤ ∞.
  Quantity order_lp(int k, double p, double c = 0.0);

  /// ∫_a^b |f^(k)(t)|^p (b − t)^w dt.
  Quantity order_weighted_power(int k, double p, double w);

  /// Alexiewicz norm of f − P over [a, b], from the primitive of f minus the
  /// exact primitive of P.
  Quantity remainder_alexiewicz(const TaylorData& P);
  /// ‖f − P‖_p over [a, b].
  Quantity remainder_lp(const TaylorData& P, double p);
  /// |f(x) − P(x)| with a rounding bound.
  Quantity remainder_at(const TaylorData& P, double x) const;

  const Primitive& primitive(int k);

 private:
  const Func& f_;
  Interval iv_;
  double tol_;
  std::map<int, std::unique_ptr<Primitive>> primitives_;
  std::map<std::tuple<int, double, double>, Quantity> lp_cache_;
};

/// Auxiliary point for the modified polynomial: the function's own hint when
/// f^(n) exists there, otherwise the midpoint, otherwise the first golden-ratio
/// point of the interval at which f^(n) exists.
double auto_x0(const Func& f, Interval iv, int n);

BoundCheck bound_thm2_alexiewicz(Analysis& A, double x0, int n);
BoundCheck bound_thm2_pointwise(Analysis& A, double x0, int n, double x);
BoundCheck bound_thm2_lp(Analysis& A, double x0, int n, double p);
BoundCheck bound_thm3_alexiewicz(Analysis& A, int n);
BoundCheck bound_thm3_pointwise(Analysis& A, int n, double x);
BoundCheck bound_thm3_lp(Analysis& A, int n, double p);
AConstants a_constants(Analysis& A, int n, double p, HolderPair holder);
BoundCheck bound_thm3_lp_via_A(Analysis& A, int n, double p, double alpha, AChoice which);
BoundCheck bound_thm4(Analysis& A, int n);

// One-shot forms.
BoundCheck bound_thm2_alexiewicz(const Func& f, Interval iv, double x0, int n, double tol);
BoundCheck bound_thm2_pointwise(const Func& f, Interval iv, double x0, int n, double x, double tol);
BoundCheck bound_thm2_lp(const Func& f, Interval iv, double x0, int n, double p, double tol);
BoundCheck bound_thm3_alexiewicz(const Func& f, Interval iv, int n, double tol);
BoundCheck bound_thm3_pointwise(const Func& f, Interval iv, int n, double x, double tol);
BoundCheck bound_thm3_lp(const Func& f, Interval iv, int n, double p, double tol);
AConstants a_constants(const Func& f, Interval iv, int n, double p, double alpha, double tol);
BoundCheck bound_thm3_lp_via_A(const Func& f, Interval iv, int n, double p, double alpha, AChoice which, double tol);
BoundCheck bound_thm4(const Func& f, Interval iv, int n, double tol);

// Precondition checks; each throws the Error a caller would record as the
// skip reason.
void require_thm2(const Func& f, Interval iv, int n, double x0);
void require_thm3(const Func& f, Interval iv, int n, bool needs_top_order);
void require_thm4(const Func& f, Interval iv, int n);

}  // namespace hktaylor
