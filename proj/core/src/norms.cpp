#include "hktaylor/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hktaylor/error.hpp"

namespace hktaylor {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double roundoff(double value) { return 4.0 * kEps * std::abs(value); }

std::vector<double> search_grid(Interval iv, std::size_t points, const std::vector<double>& landmarks) {
  points = std::max<std::size_t>(points, 2);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = iv.lo + iv.width() * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  grid.back() = iv.hi;
  for (double x : landmarks) {
    if (x > iv.lo && x < iv.hi) grid.push_back(x);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// Indices of the `count` largest local maxima of `values`.
std::vector<std::size_t> best_local_maxima(const std::vector<double>& values, std::size_t count) {
  std::vector<std::size_t> peaks;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || values[i] >= values[i - 1];
    const bool right_ok = i + 1 == n || values[i] >= values[i + 1];
    if (left_ok && right_ok) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  if (peaks.size() > count) peaks.resize(count);
  return peaks;
}

void check_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw Error(ErrorCode::invalid_params, "tolerance must be positive and finite");
  }
}

}  // namespace

GoldenResult golden_maximize(const std::function<double(double)>& objective, double lo, double hi, double width_tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  GoldenResult best = f1 >= f2 ? GoldenResult{x1, f1, 0.0} : GoldenResult{x2, f2, 0.0};
  for (int iter = 0; iter < 200 && hi - lo > width_tol; ++iter) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      if (!(x1 > lo && x1 < x2)) break;
      f1 = objective(x1);
      if (f1 > best.value) best = {x1, f1, 0.0};
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      if (!(x2 > x1 && x2 < hi)) break;
      f2 = objective(x2);
      if (f2 > best.value) best = {x2, f2, 0.0};
    }
  }
  best.spread = std::abs(f1 - f2);
  return best;
}

Primitive::Primitive(Integrand integrand, Interval iv, double tol, const SupSearchOptions& options)
    : integrand_(std::move(integrand)), iv_(Interval::make(iv.lo, iv.hi)), tol_(tol), brackets_(options.brackets) {
  check_tolerance(tol);
  nodes_ = search_grid(iv_, options.grid_points, options.landmarks);
  table_ = cumulative(integrand_, iv_.lo, nodes_, tol_);
}

IntegralEstimate Primitive::at(double x) const {
  if (!(x >= iv_.lo && x <= iv_.hi)) {
    std::ostringstream os;
    os << "x = " << x << " lies outside the tabulated interval";
    throw Error(ErrorCode::invalid_point, os.str());
  }
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
  const auto k = static_cast<std::size_t>(it - nodes_.begin());
  if (it != nodes_.end() && *it == x) return table_[k];

  const double left = nodes_[k - 1];
  const double right = nodes_[k];
  const SingularitySpec& sing = integrand_.singularity;
  const bool singular_left = sing.active() && *sing.location == left;
  const double local_tol = 0.1 * tol_;
  IntegralEstimate out;
  if (singular_left) {
    const IntegralEstimate piece = integrate(integrand_, Interval{x, right}, local_tol);
    out.value = table_[k].value - piece.value;
    out.error_bound = table_[k].error_bound + piece.error_bound;
  } else {
    const IntegralEstimate piece = integrate(integrand_, Interval{left, x}, local_tol);
    out.value = table_[k - 1].value + piece.value;
    out.error_bound = table_[k - 1].error_bound + piece.error_bound;
  }
  out.subdivisions = 1;
  return out;
}

Primitive::Extremum Primitive::search(double upto, const PrimitiveShift& shift, int sense) const {
  // sense: 0 → |G|, +1 → G, -1 → -G, with G = F - shift.
  auto shape = [&](double g) { return sense == 0 ? std::abs(g) : sense * g; };
  auto shifted = [&](double x, const IntegralEstimate& est) { return est.value - (shift ? shift(x) : 0.0); };

  std::vector<double> xs;
  std::vector<double> values;
  std::vector<double> errors;
  for (std::size_t i = 0; i < nodes_.size() && nodes_[i] <= upto; ++i) {
    xs.push_back(nodes_[i]);
    values.push_back(shape(shifted(nodes_[i], table_[i])));
    errors.push_back(table_[i].error_bound);
  }
  if (xs.back() < upto) {
    const IntegralEstimate end = at(upto);
    xs.push_back(upto);
    values.push_back(shape(shifted(upto, end)));
    errors.push_back(end.error_bound);
  }

  Extremum best{values.front(), xs.front(), errors.front()};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (values[i] > best.value) best = {values[i], xs[i], errors[i]};
  }
  if (xs.size() < 2) return best;

  const double width_tol = tol_ * iv_.width();
  double spread = 0.0;
  for (std::size_t i : best_local_maxima(values, brackets_)) {
    const double lo = xs[i == 0 ? 0 : i - 1];
    const double hi = xs[std::min(i + 1, xs.size() - 1)];
    auto objective = [&](double x) { return shape(shifted(x, at(x))); };
    const GoldenResult g = golden_maximize(objective, lo, hi, width_tol);
    if (g.value > best.value) {
      best = {g.value, g.at, at(g.at).error_bound};
      spread = g.spread;
    }
  }
  best.error += spread;
  return best;
}

NormEstimate Primitive::alexiewicz(double upto, const PrimitiveShift& shift) const {
  if (!(upto >= iv_.lo && upto <= iv_.hi)) throw Error(ErrorCode::invalid_point, "restriction point outside interval");
  NormEstimate out;
  out.kind = NormKind::alexiewicz;
  if (upto == iv_.lo) {
    out.witness = upto;
    return out;
  }
  const Extremum e = search(upto, shift, 0);
  out.value = e.value;
  out.error_bound = e.error + roundoff(e.value);
  out.witness = e.at;
  return out;
}

NormEstimate Primitive::subinterval(double upto, const PrimitiveShift& shift) const {
  if (!(upto >= iv_.lo && upto <= iv_.hi)) throw Error(ErrorCode::invalid_point, "restriction point outside interval");
  NormEstimate out;
  out.kind = NormKind::subinterval;
  if (upto == iv_.lo) {
    out.witness_pair = std::pair{upto, upto};
    return out;
  }
  const Extremum hi = search(upto, shift, +1);
  const Extremum lo = search(upto, shift, -1);
  // F(a) = 0 belongs to the range, so both extrema straddle zero.
  const double max_value = std::max(hi.value, 0.0);
  const double min_value = std::min(-lo.value, 0.0);
  out.value = max_value - min_value;
  out.error_bound = hi.error + lo.error + roundoff(out.value);
  out.witness_pair = std::pair{lo.at, hi.at};
  return out;
}

NormEstimate alexiewicz_norm(const Integrand& integrand, Interval iv, double tol, const SupSearchOptions& options) {
  return Primitive(integrand, iv, tol, options).alexiewicz();
}

NormEstimate alexiewicz_norm(const Evaluator& f, Interval iv, const SingularitySpec& sing, double tol) {
  return alexiewicz_norm(Integrand{f, sing, {}}, iv, tol);
}

NormEstimate subinterval_norm(const Integrand& integrand, Interval iv, double tol, const SupSearchOptions& options) {
  return Primitive(integrand, iv, tol, options).subinterval();
}

NormEstimate subinterval_norm(const Evaluator& f, Interval iv, const SingularitySpec& sing, double tol) {
  return subinterval_norm(Integrand{f, sing, {}}, iv, tol);
}

namespace {

NormEstimate sup_norm(const Integrand& integrand, Interval iv, double tol, const SupSearchOptions& options) {
  const SingularitySpec& sing = integrand.singularity;
  auto sample = [&](double x) {
    if (sing.active() && *sing.location == x) return 0.0;
    const double y = integrand.f(x);
    if (!std::isfinite(y)) {
      std::ostringstream os;
      os << "non-finite sample at x = " << x;
      throw Error(ErrorCode::unbounded_sample, os.str());
    }
    return std::abs(y);
  };

  std::vector<double> maxima;
  std::vector<double> grid;
  std::vector<double> values;
  std::size_t points = options.grid_points;
  bool converged = false;
  for (int level = 0; level <= options.max_doublings; ++level) {
    grid = search_grid(iv, points, options.landmarks);
    values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = sample(grid[i]);
    maxima.push_back(*std::max_element(values.begin(), values.end()));
    const std::size_t n = maxima.size();
    if (n >= 2 && std::abs(maxima[n - 1] - maxima[n - 2]) <= tol) {
      converged = true;
      break;
    }
    points = 2 * points - 1;
  }
  const std::size_t n = maxima.size();
  // A bounded maximum settles with shrinking increments; a power or log
  // blow-up gains at least as much on every halving of the grid step.
  if (!converged && n >= 5) {
    bool growing = true;
    for (std::size_t i = n - 3; i < n; ++i) {
      const double step = maxima[i] - maxima[i - 1];
      growing = growing && step > tol && step >= maxima[i - 1] - maxima[i - 2];
    }
    if (growing) {
      std::ostringstream os;
      os << "grid maximum keeps growing under refinement (last " << maxima.back() << ")";
      throw Error(ErrorCode::unbounded_sample, os.str());
    }
  }

  NormEstimate out;
  out.kind = NormKind::linf;
  out.p = std::numeric_limits<double>::infinity();
  const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  out.value = values[best];
  out.witness = grid[best];
  double spread = 0.0;
  for (std::size_t i : best_local_maxima(values, options.brackets)) {
    const double lo = grid[i == 0 ? 0 : i - 1];
    const double hi = grid[std::min(i + 1, grid.size() - 1)];
    const GoldenResult g = golden_maximize(sample, lo, hi, tol * iv.width());
    if (g.value > out.value) {
      out.value = g.value;
      out.witness = g.at;
      spread = g.spread;
    }
  }
  const double delta = n >= 2 ? std::abs(maxima[n - 1] - maxima[n - 2]) : 0.0;
  out.error_bound = std::max(delta, spread) + roundoff(out.value);
  return out;
}

}  // namespace

NormEstimate lp_norm(const Integrand& integrand, Interval iv, double p, double tol, const SupSearchOptions& options) {
  iv = Interval::make(iv.lo, iv.hi);
  check_tolerance(tol);
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_params, "p must satisfy 1 <= p <= inf");
  if (std::isinf(p)) return sup_norm(integrand, iv, tol, options);

  const Evaluator& f = integrand.f;
  Evaluator power;
  if (p == 1.0) {
    power = [f](double x) { return std::abs(f(x)); };
  } else if (p == 2.0) {
    power = [f](double x) {
      const double y = f(x);
      return y * y;
    };
  } else {
    power = [f, p](double x) { return std::pow(std::abs(f(x)), p); };
  }
  const IntegralEstimate I = integrate(Integrand{power, integrand.singularity.for_magnitude(), integrand.breakpoints}, iv, tol);
  const double integral = std::max(I.value, 0.0);
  NormEstimate out;
  out.kind = NormKind::lp;
  out.p = p;
  out.value = std::pow(integral, 1.0 / p);
  const double upper = std::pow(integral + I.error_bound, 1.0 / p) - out.value;
  const double lower = out.value - std::pow(std::max(integral - I.error_bound, 0.0), 1.0 / p);
  out.error_bound = std::max(upper, lower) + roundoff(out.value);
  return out;
}

NormEstimate lp_norm(const Evaluator& f, Interval iv, double p, double tol) {
  return lp_norm(Integrand{f, {}, {}}, iv, p, tol);
}

NormEstimate alexiewicz_norm_from_primitive(const Evaluator& primitive, Interval iv, double tol,
                                            const SupSearchOptions& options) {
  iv = Interval::make(iv.lo, iv.hi);
  check_tolerance(tol);
  const double anchor = primitive(iv.lo);
  if (!(std::abs(anchor) <= tol)) {
    std::ostringstream os;
    os << "primitive must vanish at the left end; F(a) = " << anchor;
    throw Error(ErrorCode::primitive_not_anchored, os.str());
  }
  auto objective = [&](double x) { return std::abs(primitive(x)); };
  const std::vector<double> grid = search_grid(iv, options.grid_points, options.landmarks);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = objective(grid[i]);

  NormEstimate out;
  out.kind = NormKind::alexiewicz;
  const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  out.value = values[best];
  out.witness = grid[best];
  double spread = 0.0;
  for (std::size_t i : best_local_maxima(values, options.brackets)) {
    const double lo = grid[i == 0 ? 0 : i - 1];
    const double hi = grid[std::min(i + 1, grid.size() - 1)];
    const GoldenResult g = golden_maximize(objective, lo, hi, tol * iv.width());
    if (g.value > out.value) {
      out.value = g.value;
      out.witness = g.at;
      spread = g.spread;
    }
  }
  out.error_bound = spread + std::abs(anchor) + roundoff(out.value);
  return out;
}

}  // namespace hktaylor
