#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hktaylor/quadrature.hpp"

namespace hktaylor {

enum class NormKind { alexiewicz, subinterval, lp, linf };

struct NormEstimate {
  NormKind kind = NormKind::alexiewicz;
  double p = 1.0;  // meaningful for lp only
  double value = 0.0;
  double error_bound = 0.0;
  std::optional<double> witness;
  std::optional<std::pair<double, double>> witness_pair;  // (argmin, argmax) of the primitive
};

struct SupSearchOptions {
  std::size_t grid_points = 513;
  std::size_t brackets = 3;
  /// Extra abscissae (likely extrema) folded into the search grid.
  std::vector<double> landmarks;
  /// Upper bound on grid doublings for p = ∞.
  int max_doublings = 7;
};

/// Exact antiderivative of a term subtracted from the integrand, anchored so
/// that shift(base) = 0. Norms of f − q are computed from ∫f − Q without
/// feeding q through the quadrature.
using PrimitiveShift = std::function<double(double)>;

/// Tabulated primitive F(x) = ∫_a^x f on a search grid over [a, b]. One
/// cumulative pass builds the table; every later query (restricted norms,
/// refinement points, shifted integrands) integrates only from the nearest
/// tabulated node.
class Primitive {
 public:
  Primitive(Integrand integrand, Interval iv, double tol, const SupSearchOptions& options = {});

  const Interval& interval() const noexcept { return iv_; }
  double tolerance() const noexcept { return tol_; }

  IntegralEstimate at(double x) const;

  /// sup_{a ≤ x ≤ upto} |F(x) − shift(x)|.
  NormEstimate alexiewicz(double upto, const PrimitiveShift& shift = {}) const;
  NormEstimate alexiewicz(const PrimitiveShift& shift = {}) const { return alexiewicz(iv_.hi, shift); }

  /// max(F − shift) − min(F − shift) over [a, upto].
  NormEstimate subinterval(double upto, const PrimitiveShift& shift = {}) const;
  NormEstimate subinterval(const PrimitiveShift& shift = {}) const { return subinterval(iv_.hi, shift); }

 private:
  struct Extremum {
    double value;
    double at;
    double error;
  };
  Extremum search(double upto, const PrimitiveShift& shift, int sense) const;

  Integrand integrand_;
  Interval iv_;
  double tol_;
  std::size_t brackets_;
  std::vector<double> nodes_;
  std::vector<IntegralEstimate> table_;
};

NormEstimate alexiewicz_norm(const Integrand& integrand, Interval iv, double tol, const SupSearchOptions& options = {});
NormEstimate alexiewicz_norm(const Evaluator& f, Interval iv, const SingularitySpec& sing, double tol);

NormEstimate subinterval_norm(const Integrand& integrand, Interval iv, double tol, const SupSearchOptions& options = {});
NormEstimate subinterval_norm(const Evaluator& f, Interval iv, const SingularitySpec& sing, double tol);

/// (∫|f|^p)^{1/p} for finite p; for p = ∞ the refined grid maximum of |f| as
/// an essential-sup approximation, throwing Error(unbounded_sample) when the
/// grid maximum keeps growing under refinement.
NormEstimate lp_norm(const Integrand& integrand, Interval iv, double p, double tol,
                     const SupSearchOptions& options = {});
NormEstimate lp_norm(const Evaluator& f, Interval iv, double p, double tol);

/// Alexiewicz norm of the order-1 distribution F' as max|F| over the
/// interval. No quadrature: F must be continuous with F(a) = 0.
NormEstimate alexiewicz_norm_from_primitive(const Evaluator& primitive, Interval iv, double tol,
                                            const SupSearchOptions& options = {});

/// Golden-section maximisation of `objective` on [lo, hi]; returns
/// (argmax, max, spread of the final bracket). Exposed for reuse.
struct GoldenResult {
  double at;
  double value;
  double spread;
};
GoldenResult golden_maximize(const std::function<double(double)>& objective, double lo, double hi, double width_tol);

}  // namespace hktaylor
