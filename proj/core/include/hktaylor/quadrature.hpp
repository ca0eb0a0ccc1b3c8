#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hktaylor {

using Evaluator = std::function<double(double)>;

/// Known interior kinks or jumps of an integrand inside [lo, hi]. Panels are
/// split there before any adaptive refinement.
using BreakpointFn = std::function<std::vector<double>(double lo, double hi)>;

/// Compact interval with lo < hi, both finite.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  /// Throws Error(invalid_interval) unless lo < hi and both are finite.
  static Interval make(double lo, double hi);

  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return lo + 0.5 * (hi - lo); }
  bool operator==(const Interval&) const = default;
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

enum class Side { left, right, interior };
enum class SingularityKind { none, oscillatory_improper, unbounded };

/// Monotone reparametrisation of a one-sided neighbourhood of a singular
/// point. `index_of` grows toward the singularity and `abscissa_at` is its
/// inverse; the partial integrals of a Hake limit are anchored at the
/// abscissae of consecutive integer indices. Anchoring at phase points of an
/// oscillating integrand turns the partial sums into a regular sequence that
/// the extrapolation can accelerate.
struct AnchorMap {
  std::function<double(double)> index_of;
  std::function<double(double)> abscissa_at;
  /// True when the integrand vanishes around every anchor, so the same
  /// anchors also suit |f|^p. Phase anchors of an oscillation are not.
  bool sign_invariant = false;

  explicit operator bool() const noexcept { return index_of && abscissa_at; }
};

struct SingularitySpec {
  std::optional<double> location;
  Side side = Side::left;
  SingularityKind kind = SingularityKind::none;
  /// Empty means geometric anchors a + w·2^-k.
  AnchorMap anchors;

  static SingularitySpec none() { return {}; }
  static SingularitySpec left(double at, SingularityKind kind, AnchorMap anchors = {});
  static SingularitySpec right(double at, SingularityKind kind, AnchorMap anchors = {});

  bool active() const noexcept { return kind != SingularityKind::none && location.has_value(); }

  /// Singularity handling for a magnitude |f|^p of the integrand: anchors that
  /// rely on cancellation fall back to geometric ones.
  SingularitySpec for_magnitude() const;
};

/// An evaluator together with the structural hints the integrator may use.
struct Integrand {
  Evaluator f;
  SingularitySpec singularity;
  BreakpointFn breakpoints;
};

struct IntegralEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t subdivisions = 0;
  bool converged = true;
  bool limit_extrapolated = false;
};

/// Audit factor applied to reported error bounds wherever a computed value is
/// judged against an exact one.
inline constexpr double kCalibration = 10.0;

struct QuadratureLimits {
  int max_depth = 60;
  int max_acceleration_depth = 24;
  std::size_t max_panels = std::size_t{1} << 17;
  std::size_t max_anchors = 4096;
};

/// ∫ f over `iv`. Singular endpoints are evaluated as limits of proper
/// integrals with iterated Δ² acceleration. Throws Error(non_convergence)
/// when the tolerance cannot be met within `limits`.
IntegralEstimate integrate(const Integrand& integrand, Interval iv, double tol,
                           const QuadratureLimits& limits = {});

IntegralEstimate integrate(const Evaluator& f, Interval iv, const SingularitySpec& sing, double tol,
                           const QuadratureLimits& limits = {});

/// F(x_i) = ∫_a^{x_i} f for a sorted list of abscissae, sharing one adaptive
/// partition so the whole list costs a single pass. Entries with x_i = a are 0.
std::vector<IntegralEstimate> cumulative(const Integrand& integrand, double a, std::span<const double> xs,
                                         double tol, const QuadratureLimits& limits = {});

std::vector<IntegralEstimate> cumulative(const Evaluator& f, double a, std::span<const double> xs,
                                         const SingularitySpec& sing, double tol,
                                         const QuadratureLimits& limits = {});

/// Iterated Aitken Δ² applied to a sequence of partial sums; returns the
/// deepest available transform of the tail. Exposed for testing.
double iterated_aitken(std::span<const double> partial_sums, int max_depth);

}  // namespace hktaylor
