#include "hktaylor/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hktaylor/error.hpp"

namespace hktaylor {

Interval Interval::make(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    std::ostringstream os;
    os << "interval [" << lo << ", " << hi << "] must satisfy lo < hi with finite ends";
    throw Error(ErrorCode::invalid_interval, os.str());
  }
  return Interval{lo, hi};
}

SingularitySpec SingularitySpec::left(double at, SingularityKind kind, AnchorMap anchors) {
  return SingularitySpec{at, Side::left, kind, std::move(anchors)};
}

SingularitySpec SingularitySpec::right(double at, SingularityKind kind, AnchorMap anchors) {
  return SingularitySpec{at, Side::right, kind, std::move(anchors)};
}

SingularitySpec SingularitySpec::for_magnitude() const {
  SingularitySpec out = *this;
  if (!out.anchors.sign_invariant) out.anchors = {};
  return out;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  double resabs;
  int depth;
};

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

double evaluate(const Evaluator& f, double x) {
  double y;
  try {
    y = f(x);
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "integrand raised at x = " << x << ": " << e.what();
    throw Error(ErrorCode::evaluation_failure, os.str());
  }
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "integrand is not finite at x = " << x;
    throw Error(ErrorCode::evaluation_failure, os.str());
  }
  return y;
}

// Gauss–Kronrod 7/15 on one panel; error = |K15 - G7|.
Panel gauss_kronrod(const Evaluator& f, double lo, double hi, int depth) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  static const auto& xk = Kronrod::abscissa();
  static const auto& wk = Kronrod::weights();
  static const auto& wg = Gauss::weights();

  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = evaluate(f, center);
  double kronrod = wk[0] * fc;
  double gauss = wg[0] * fc;
  double resabs = wk[0] * std::abs(fc);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    const double f1 = evaluate(f, center - dx);
    const double f2 = evaluate(f, center + dx);
    kronrod += wk[i] * (f1 + f2);
    resabs += wk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 0) gauss += wg[i / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  resabs *= std::abs(half);
  const double err = std::max(std::abs(kronrod - gauss), 2.0 * kEps * resabs);
  return Panel{lo, hi, kronrod, err, resabs, depth};
}

[[noreturn]] void fail_convergence(const char* what, double value, double error, double tol) {
  std::ostringstream os;
  os.precision(12);
  os << what << ": estimate " << value << " with error " << error << " exceeds tolerance " << tol;
  throw Error(ErrorCode::non_convergence, os.str());
}

std::vector<double> panel_bounds(double lo, double hi, const BreakpointFn& breaks,
                                 std::span<const double> extra = {}) {
  std::vector<double> pts{lo, hi};
  if (breaks) {
    for (double b : breaks(lo, hi)) {
      if (b > lo && b < hi) pts.push_back(b);
    }
  }
  for (double b : extra) {
    if (b > lo && b < hi) pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

struct PanelSet {
  std::vector<Panel> panels;  // sorted by lo
  double error = 0.0;
};

// Globally adaptive bisection of the worst panel until the summed error
// meets `tol` (or the roundoff floor of the integrand's magnitude).
PanelSet adapt(const Evaluator& f, const std::vector<double>& bounds, double tol, const QuadratureLimits& limits) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  std::vector<Panel> frozen;
  double total_error = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    Panel p = gauss_kronrod(f, bounds[i], bounds[i + 1], 0);
    total_error += p.error;
    total_abs += p.resabs;
    heap.push(p);
  }
  std::size_t count = heap.size();
  auto target = [&] { return std::max(tol, 50.0 * kEps * total_abs); };

  while (total_error > target() && !heap.empty()) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (worst.depth >= limits.max_depth || !(mid > worst.lo && mid < worst.hi)) {
      frozen.push_back(worst);
      continue;
    }
    if (count >= limits.max_panels) {
      heap.push(worst);
      break;
    }
    Panel left = gauss_kronrod(f, worst.lo, mid, worst.depth + 1);
    Panel right = gauss_kronrod(f, mid, worst.hi, worst.depth + 1);
    total_error += left.error + right.error - worst.error;
    total_abs += left.resabs + right.resabs - worst.resabs;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  PanelSet out;
  out.panels = std::move(frozen);
  out.panels.reserve(out.panels.size() + heap.size());
  while (!heap.empty()) {
    out.panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(out.panels.begin(), out.panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  long double err = 0.0L;
  long double abs_sum = 0.0L;
  long double value = 0.0L;
  for (const Panel& p : out.panels) {
    err += p.error;
    abs_sum += p.resabs;
    value += p.value;
  }
  out.error = static_cast<double>(err);
  const double floor = 50.0 * kEps * static_cast<double>(abs_sum);
  if (out.error > std::max(tol, floor)) {
    fail_convergence("adaptive quadrature did not converge", static_cast<double>(value), out.error, tol);
  }
  return out;
}

IntegralEstimate proper_integral(const Evaluator& f, double lo, double hi, const BreakpointFn& breaks, double tol,
                                 const QuadratureLimits& limits) {
  if (lo == hi) return {};
  const PanelSet set = adapt(f, panel_bounds(lo, hi, breaks), tol, limits);
  long double value = 0.0L;
  for (const Panel& p : set.panels) value += p.value;
  return IntegralEstimate{static_cast<double>(value), set.error, set.panels.size(), true, false};
}

// Limit of proper integrals over the part of [min(s,far), max(s,far)] away
// from the singular point s, anchored at a sequence approaching s.
IntegralEstimate hake_limit(const Evaluator& f, const BreakpointFn& breaks, double s, double far,
                            const AnchorMap& anchors, double tol, const QuadratureLimits& limits) {
  const double direction = far > s ? 1.0 : -1.0;

  const bool custom = static_cast<bool>(anchors);
  const std::size_t max_anchors = custom ? limits.max_anchors : static_cast<std::size_t>(limits.max_depth);
  double next_index = custom ? std::floor(anchors.index_of(far)) + 1.0 : 1.0;
  auto anchor_at = [&](double index) {
    return custom ? anchors.abscissa_at(index) : s + (far - s) * std::ldexp(1.0, -static_cast<int>(index));
  };

  std::vector<double> partial;
  partial.reserve(64);
  std::vector<double> extrapolated;
  long double sum = 0.0L;
  double piece_error = 0.0;
  std::size_t panels = 0;
  double previous = far;

  for (std::size_t k = 0; k < max_anchors; ++k) {
    double z = anchor_at(next_index);
    next_index += 1.0;
    // Anchors must move strictly toward s.
    const double dz = (z - s) * direction;
    const double dprev = (previous - s) * direction;
    if (!(dz > 0.0) || !(dz < dprev) || !std::isfinite(z)) {
      if (dz > 0.0 && dz >= dprev) continue;
      break;
    }
    const double lo = std::min(z, previous);
    const double hi = std::max(z, previous);
    // Summable schedule: Σ 1/(k+1)² < 1.65, so pieces use under half of tol.
    const double piece_tol = 0.25 * tol / static_cast<double>((k + 1) * (k + 1));
    const IntegralEstimate piece = proper_integral(f, lo, hi, breaks, piece_tol, limits);
    sum += piece.value;
    piece_error += piece.error_bound;
    panels += piece.subdivisions;
    partial.push_back(static_cast<double>(sum));
    extrapolated.push_back(iterated_aitken(partial, limits.max_acceleration_depth));
    previous = z;

    const std::size_t n = extrapolated.size();
    if (n >= 3) {
      const double d1 = std::abs(extrapolated[n - 1] - extrapolated[n - 2]);
      const double d2 = std::abs(extrapolated[n - 2] - extrapolated[n - 3]);
      if (d1 < 0.5 * tol && d2 < 0.5 * tol) {
        return IntegralEstimate{extrapolated.back(), std::max(d1, d2) + piece_error, panels, true, true};
      }
    }
  }
  const double last = extrapolated.empty() ? 0.0 : extrapolated.back();
  const double spread = extrapolated.size() >= 2
                            ? std::abs(extrapolated.back() - extrapolated[extrapolated.size() - 2])
                            : std::numeric_limits<double>::infinity();
  fail_convergence("limit of proper integrals did not converge", last, spread, tol);
}

struct Segment {
  double lo;
  double hi;
  enum class Kind { proper, left_singular, right_singular, limit_difference } kind;
};

// A segment spanning more anchor periods than this is not resolved as a
// proper integral; see integrate_segments.
constexpr double kDenseAnchorSpan = 64.0;

// Integrates consecutive segments between `points`, taking the Hake limit on
// the segments touching the singular point. Returns one estimate per segment.
std::vector<IntegralEstimate> integrate_segments(const Integrand& in, const std::vector<double>& points, double tol,
                                                 const QuadratureLimits& limits) {
  const SingularitySpec& sing = in.singularity;
  const bool singular = sing.active() && *sing.location >= points.front() && *sing.location <= points.back();
  const double s = sing.active() ? *sing.location : 0.0;
  const AnchorMap& anchors = sing.anchors;

  // Near an oscillatory singularity a short segment can still hold millions
  // of anchor periods. Such a segment on the anchored side is integrated as
  // the difference of two limits taken from the singular point.
  auto dense = [&](double lo, double hi) {
    if (!sing.active() || !anchors) return false;
    const bool on_side = sing.side == Side::left ? lo >= s : hi <= s;
    if (!on_side || lo == s || hi == s) return false;
    return std::abs(anchors.index_of(lo) - anchors.index_of(hi)) > kDenseAnchorSpan;
  };

  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Segment seg{points[i], points[i + 1], Segment::Kind::proper};
    if (singular && seg.lo == s) seg.kind = Segment::Kind::left_singular;
    if (singular && seg.hi == s) seg.kind = Segment::Kind::right_singular;
    if (seg.kind == Segment::Kind::proper && dense(seg.lo, seg.hi)) seg.kind = Segment::Kind::limit_difference;
    segments.push_back(seg);
  }
  std::size_t singular_count = 0;
  double proper_width = 0.0;
  for (const Segment& seg : segments) {
    if (seg.kind == Segment::Kind::proper) {
      proper_width += seg.hi - seg.lo;
    } else {
      ++singular_count;
    }
  }
  const double proper_tol = singular_count ? 0.5 * tol : tol;
  const double limit_tol = singular_count ? 0.5 * tol / static_cast<double>(singular_count) : 0.0;

  // ∫ from the singular point to x, memoised per abscissa.
  std::vector<std::pair<double, IntegralEstimate>> from_singular;
  auto limit_to = [&](double x) -> IntegralEstimate {
    for (const auto& [at, est] : from_singular) {
      if (at == x) return est;
    }
    IntegralEstimate est = hake_limit(in.f, in.breakpoints, s, x, anchors, limit_tol, limits);
    if (x < s) est.value = -est.value;
    from_singular.emplace_back(x, est);
    return est;
  };

  std::vector<IntegralEstimate> out(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& seg = segments[i];
    if (seg.kind == Segment::Kind::left_singular) {
      const AnchorMap use = sing.side == Side::left ? anchors : AnchorMap{};
      out[i] = hake_limit(in.f, in.breakpoints, seg.lo, seg.hi, use, limit_tol, limits);
    } else if (seg.kind == Segment::Kind::right_singular) {
      const AnchorMap use = sing.side == Side::right ? anchors : AnchorMap{};
      out[i] = hake_limit(in.f, in.breakpoints, seg.hi, seg.lo, use, limit_tol, limits);
    } else if (seg.kind == Segment::Kind::limit_difference) {
      const IntegralEstimate hi = limit_to(seg.hi);
      const IntegralEstimate lo = limit_to(seg.lo);
      out[i] = IntegralEstimate{hi.value - lo.value, hi.error_bound + lo.error_bound,
                                hi.subdivisions + lo.subdivisions, true, true};
    }
  }

  // Each maximal run of proper segments is one adaptive partition; panels
  // never straddle a segment boundary.
  std::size_t i = 0;
  while (i < segments.size()) {
    if (segments[i].kind != Segment::Kind::proper) {
      ++i;
      continue;
    }
    std::size_t last = i;
    while (last + 1 < segments.size() && segments[last + 1].kind == Segment::Kind::proper) ++last;

    std::vector<double> bounds;
    for (std::size_t k = i; k <= last; ++k) {
      const std::vector<double> local = panel_bounds(segments[k].lo, segments[k].hi, in.breakpoints);
      bounds.insert(bounds.end(), local.begin(), local.end());
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

    const double share = proper_tol * (segments[last].hi - segments[i].lo) / proper_width;
    const PanelSet set = adapt(in.f, bounds, share, limits);
    std::size_t seg = i;
    for (const Panel& p : set.panels) {
      while (seg < last && p.lo >= segments[seg].hi) ++seg;
      out[seg].value += p.value;
      out[seg].error_bound += p.error;
      out[seg].subdivisions += 1;
    }
    i = last + 1;
  }
  return out;
}

void check_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw Error(ErrorCode::invalid_params, "tolerance must be positive and finite");
  }
}

}  // namespace

double iterated_aitken(std::span<const double> partial_sums, int max_depth) {
  if (partial_sums.empty()) return 0.0;
  const std::size_t window = std::min(partial_sums.size(), static_cast<std::size_t>(2 * max_depth + 1));
  std::vector<double> current(partial_sums.end() - static_cast<std::ptrdiff_t>(window), partial_sums.end());
  while (current.size() >= 3) {
    std::vector<double> next(current.size() - 2);
    for (std::size_t i = 0; i + 2 < current.size(); ++i) {
      const double d1 = current[i + 1] - current[i];
      const double d2 = current[i + 2] - current[i + 1];
      const double denominator = d2 - d1;
      const double scale = std::max({std::abs(current[i]), std::abs(current[i + 1]), std::abs(current[i + 2])});
      if (std::abs(denominator) <= 8.0 * kEps * scale || denominator == 0.0) {
        next[i] = current[i + 2];
      } else {
        next[i] = current[i + 2] - d2 * d2 / denominator;
      }
    }
    current = std::move(next);
  }
  return current.back();
}

IntegralEstimate integrate(const Integrand& integrand, Interval iv, double tol, const QuadratureLimits& limits) {
  iv = Interval::make(iv.lo, iv.hi);
  check_tolerance(tol);
  std::vector<double> points{iv.lo, iv.hi};
  const SingularitySpec& sing = integrand.singularity;
  if (sing.active() && *sing.location > iv.lo && *sing.location < iv.hi) {
    points.insert(points.begin() + 1, *sing.location);
  }
  const std::vector<IntegralEstimate> parts = integrate_segments(integrand, points, tol, limits);
  IntegralEstimate total;
  for (const IntegralEstimate& p : parts) {
    total.value += p.value;
    total.error_bound += p.error_bound;
    total.subdivisions += p.subdivisions;
    total.limit_extrapolated = total.limit_extrapolated || p.limit_extrapolated;
  }
  return total;
}

IntegralEstimate integrate(const Evaluator& f, Interval iv, const SingularitySpec& sing, double tol,
                           const QuadratureLimits& limits) {
  return integrate(Integrand{f, sing, {}}, iv, tol, limits);
}

std::vector<IntegralEstimate> cumulative(const Integrand& integrand, double a, std::span<const double> xs, double tol,
                                         const QuadratureLimits& limits) {
  check_tolerance(tol);
  if (!std::isfinite(a)) throw Error(ErrorCode::invalid_point, "base point must be finite");
  if (xs.empty()) return {};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) throw Error(ErrorCode::invalid_point, "grid abscissae must be finite");
    if (i > 0 && xs[i] < xs[i - 1]) throw Error(ErrorCode::unsorted_grid, "cumulative grid must be sorted ascending");
  }
  if (xs.front() < a) throw Error(ErrorCode::invalid_point, "cumulative grid must not extend left of the base point");

  std::vector<IntegralEstimate> out(xs.size());
  if (xs.back() == a) return out;

  std::vector<double> points{a};
  for (double x : xs) {
    if (x > points.back()) points.push_back(x);
  }
  const SingularitySpec& sing = integrand.singularity;
  if (sing.active() && *sing.location > a && *sing.location < points.back()) {
    points.insert(std::upper_bound(points.begin(), points.end(), *sing.location), *sing.location);
    points.erase(std::unique(points.begin(), points.end()), points.end());
  }

  const std::vector<IntegralEstimate> parts = integrate_segments(integrand, points, tol, limits);
  std::vector<IntegralEstimate> prefix(points.size());
  long double value = 0.0L;
  long double error = 0.0L;
  std::size_t panels = 0;
  bool extrapolated = false;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    value += parts[k].value;
    error += parts[k].error_bound;
    panels += parts[k].subdivisions;
    extrapolated = extrapolated || parts[k].limit_extrapolated;
    prefix[k + 1] = IntegralEstimate{static_cast<double>(value), static_cast<double>(error), panels, true,
                                     extrapolated};
  }
  std::size_t k = 0;
  for (std::size_t idx = 0; idx < xs.size(); ++idx) {
    while (points[k] < xs[idx]) ++k;
    out[idx] = prefix[k];
  }
  return out;
}

std::vector<IntegralEstimate> cumulative(const Evaluator& f, double a, std::span<const double> xs,
                                         const SingularitySpec& sing, double tol, const QuadratureLimits& limits) {
  return cumulative(Integrand{f, sing, {}}, a, xs, tol, limits);
}

}  // namespace hktaylor
