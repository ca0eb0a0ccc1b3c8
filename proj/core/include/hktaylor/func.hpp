#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hktaylor/norms.hpp"
#include "hktaylor/quadrature.hpp"

namespace hktaylor {

/// Function class of one derivative order f^(k).
enum class Regularity {
  smooth,      // continuously differentiable
  acg_star,    // continuous, differentiable nearly everywhere (derivative is HK integrable)
  lebesgue,    // Lebesgue integrable, possibly discontinuous
  hk_not_l1,   // Henstock–Kurzweil integrable but not absolutely
  c0_only,     // continuous and nowhere differentiable; no higher order exists
};

std::string_view to_string(Regularity r) noexcept;

/// True for the classes whose members are continuous functions.
constexpr bool is_continuous(Regularity r) noexcept {
  return r == Regularity::smooth || r == Regularity::acg_star || r == Regularity::c0_only;
}

/// True when the order's primitive is ACG*, i.e. when the next order up is
/// at least HK integrable.
constexpr bool is_acg_star(Regularity r) noexcept { return r == Regularity::smooth || r == Regularity::acg_star; }

struct DerivativeOrder {
  Evaluator eval;
  Regularity regularity = Regularity::smooth;
  SingularitySpec singularity;
  BreakpointFn breakpoints;
  /// Likely extrema of this order's evaluator, fed to sup searches.
  BreakpointFn landmarks;
  /// Empty means the derivative exists at every point of the domain.
  std::function<bool(double)> exists_at;
  /// Modulus of continuity ω(h) for orders that are only continuous; used to
  /// size the finite-difference allowance of the derivative-chain check.
  std::function<double(double)> modulus;
};

/// A real function bundled with exact evaluators for f, f', …, f^(max_order).
/// Immutable after construction and safe to share across threads.
class Func {
 public:
  Func(std::string label, std::vector<DerivativeOrder> orders, std::optional<Interval> domain = std::nullopt,
       std::optional<Evaluator> primitive_oracle = std::nullopt);

  const std::string& label() const noexcept { return label_; }
  int max_order() const noexcept { return static_cast<int>(orders_.size()) - 1; }
  const std::optional<Interval>& domain() const noexcept { return domain_; }

  bool has_order(int k) const noexcept { return k >= 0 && k <= max_order(); }
  const DerivativeOrder& order(int k) const;
  double eval(int k, double x) const;
  Regularity regularity(int k) const { return order(k).regularity; }
  bool derivative_exists(int k, double x) const;

  Integrand integrand(int k) const;
  SupSearchOptions search_options(int k, Interval iv) const;

  /// x ↦ ∫_0^x f^(max_order), exact.
  const std::optional<Evaluator>& primitive_oracle() const noexcept { return primitive_oracle_; }

  /// Abscissa preferred as the auxiliary point of a modified Taylor
  /// polynomial on `iv`, if the function has one.
  std::function<std::optional<double>(Interval)> x0_hint;

  /// Throws Error(invalid_interval) unless `iv` lies in the domain.
  void check_interval(Interval iv) const;

 private:
  std::string label_;
  std::vector<DerivativeOrder> orders_;
  std::optional<Interval> domain_;
  std::optional<Evaluator> primitive_oracle_;
};

struct ChainViolation {
  int order;
  double x;
  double finite_difference;
  double exact;
  double allowance;
};

/// Central-difference check that eval(k) is the derivative of eval(k-1) at
/// `samples` random non-singular points per order. Points within 2h of a
/// breakpoint or singular point, or where the derivative does not exist, are
/// redrawn.
std::vector<ChainViolation> check_derivative_chain(const Func& f, Interval iv, std::uint64_t seed,
                                                   int samples = 64, double h = 1e-5, double rel_tol = 1e-4);

}  // namespace hktaylor
