#include "hktaylor/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "hktaylor/error.hpp"

namespace hktaylor {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double roundoff(double v) { return 4.0 * kEps * std::abs(v); }

Quantity scaled(double factor, const Quantity& q) {
  const double value = factor * q.value;
  return {value, std::abs(factor) * q.error + roundoff(value)};
}

Quantity sum(const Quantity& a, const Quantity& b) {
  const double value = a.value + b.value;
  return {value, a.error + b.error + roundoff(value)};
}

// q^{1/p} with the error of q pushed through the root.
Quantity root(const Quantity& q, double p) {
  const double base = std::max(q.value, 0.0);
  const double value = std::pow(base, 1.0 / p);
  const double up = std::pow(base + q.error, 1.0 / p) - value;
  const double down = value - std::pow(std::max(base - q.error, 0.0), 1.0 / p);
  return {value, std::max(up, down) + roundoff(value)};
}

Quantity from(const NormEstimate& e) { return {e.value, e.error_bound}; }

Quantity from(const IntegralEstimate& e) { return {e.value, e.error_bound}; }

[[noreturn]] void fail(ErrorCode code, const Func& f, const std::string& what) {
  throw Error(code, f.label() + ": " + what);
}

void require_degree(int n, int lowest) {
  if (n < lowest || n > kMaxDegree) {
    std::ostringstream os;
    os << "degree n = " << n << " outside [" << lowest << ", " << kMaxDegree << "]";
    throw Error(ErrorCode::invalid_degree, os.str());
  }
}

// f^(k)(a) must exist for k = 0..top.
void require_base(const Func& f, double a, int top) {
  for (int k = 0; k <= top; ++k) {
    if (!f.has_order(k)) {
      std::ostringstream os;
      os << "order " << k << " is not available";
      fail(ErrorCode::order_unavailable, f, os.str());
    }
    if (!f.derivative_exists(k, a)) {
      std::ostringstream os;
      os << "f^(" << k << ") does not exist at the base point " << a;
      fail(ErrorCode::derivative_unavailable_at_base, f, os.str());
    }
  }
}

void require_inside(Interval iv, double x, const char* what) {
  if (!(x >= iv.lo && x <= iv.hi)) {
    std::ostringstream os;
    os << what << " = " << x << " lies outside [" << iv.lo << ", " << iv.hi << "]";
    throw Error(ErrorCode::invalid_point, os.str());
  }
}

double lp_factor(double width, int n_minus, double p) {
  // width^{m+1/p} / [mp+1]^{1/p}, and width^m for p = ∞
  if (std::isinf(p)) return std::pow(width, n_minus);
  return std::pow(width, n_minus + 1.0 / p) / std::pow(n_minus * p + 1.0, 1.0 / p);
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::holds_within_error: return "holds_within_error";
    case Verdict::violated: return "violated";
  }
  return "unknown";
}

std::string_view to_string(AChoice c) noexcept {
  switch (c) {
    case AChoice::a1: return "A1";
    case AChoice::a2: return "A2";
    case AChoice::a3: return "A3";
    case AChoice::a4: return "A4";
  }
  return "A?";
}

BoundCheck make_check(std::string label, Quantity lhs, Quantity rhs, BoundParams params) {
  BoundCheck out;
  out.label = std::move(label);
  out.lhs = lhs;
  out.rhs = rhs;
  out.params = params;
  out.slack = rhs.value - lhs.value;
  const double combined = kCalibration * (lhs.error + rhs.error);
  if (out.slack > combined) {
    out.verdict = Verdict::holds;
  } else if (out.slack < -combined) {
    out.verdict = Verdict::violated;
  } else {
    out.verdict = Verdict::holds_within_error;
  }
  return out;
}

HolderPair HolderPair::conjugate(double alpha) {
  if (!(alpha >= 1.0)) throw Error(ErrorCode::invalid_params, "alpha must satisfy 1 <= alpha <= inf");
  if (alpha == 1.0) return {1.0, std::numeric_limits<double>::infinity()};
  if (std::isinf(alpha)) return {alpha, 1.0};
  return {alpha, alpha / (alpha - 1.0)};
}

HolderPair HolderPair::make(double alpha, double beta) {
  if (!(alpha >= 1.0) || !(beta >= 1.0)) throw Error(ErrorCode::invalid_params, "Hölder exponents must be >= 1");
  const double total = 1.0 / alpha + 1.0 / beta;
  if (!(std::abs(total - 1.0) <= 1e-12)) {
    std::ostringstream os;
    os << "1/alpha + 1/beta = " << total << ", not 1";
    throw Error(ErrorCode::conjugate_mismatch, os.str());
  }
  return {alpha, beta};
}

// ---- Analysis -------------------------------------------------------------

Analysis::Analysis(const Func& f, Interval iv, double tol) : f_(f), iv_(Interval::make(iv.lo, iv.hi)), tol_(tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorCode::invalid_params, "tolerance must be positive");
  f_.check_interval(iv_);
}

const Primitive& Analysis::primitive(int k) {
  auto it = primitives_.find(k);
  if (it != primitives_.end()) return *it->second;
  SupSearchOptions options;
  // Extrema of ∫f^(k) sit at extrema of f^(k−1).
  if (k >= 1 && f_.order(k - 1).landmarks) options.landmarks = f_.order(k - 1).landmarks(iv_.lo, iv_.hi);
  if (f_.order(k).breakpoints) {
    const auto extra = f_.order(k).breakpoints(iv_.lo, iv_.hi);
    options.landmarks.insert(options.landmarks.end(), extra.begin(), extra.end());
  }
  auto made = std::make_unique<Primitive>(f_.integrand(k), iv_, tol_, options);
  return *primitives_.emplace(k, std::move(made)).first->second;
}

Quantity Analysis::order_alexiewicz(int k, double c, double upto) {
  require_inside(iv_, upto, "restriction point");
  if (upto == iv_.lo) return {};
  const double a = iv_.lo;
  if (f_.regularity(k) == Regularity::c0_only && k >= 1) {
    // Norm of the order-1 distribution: max of its continuous primitive.
    const Evaluator& below = f_.order(k - 1).eval;
    const double base = below(a);
    Evaluator G = [&below, base, c, a](double x) { return below(x) - base - c * (x - a); };
    const Interval sub = Interval::make(a, upto);
    return from(alexiewicz_norm_from_primitive(G, sub, tol_, f_.search_options(k - 1, sub)));
  }
  PrimitiveShift shift;
  if (c != 0.0) shift = [c, a](double x) { return c * (x - a); };
  return from(primitive(k).alexiewicz(upto, shift));
}

Quantity Analysis::order_lp(int k, double p, double c) {
  const auto key = std::make_tuple(k, p, c);
  if (auto it = lp_cache_.find(key); it != lp_cache_.end()) return it->second;
  Integrand in = f_.integrand(k);
  if (c != 0.0) {
    const Evaluator g = in.f;
    in.f = [g, c](double t) { return g(t) - c; };
  }
  const Quantity q = from(lp_norm(in, iv_, p, tol_, f_.search_options(k, iv_)));
  lp_cache_.emplace(key, q);
  return q;
}

Quantity Analysis::order_weighted_power(int k, double p, double w) {
  Integrand in = f_.integrand(k);
  in.singularity = in.singularity.for_magnitude();
  const Evaluator g = in.f;
  const double b = iv_.hi;
  in.f = [g, p, w, b](double t) {
    const double y = std::abs(g(t));
    const double yp = p == 1.0 ? y : (p == 2.0 ? y * y : std::pow(y, p));
    return yp * std::pow(b - t, w);
  };
  return from(integrate(in, iv_, tol_));
}

namespace {

// Largest |P| and |∫P| on the interval, bounded termwise; evaluating f − P
// near cancellation carries rounding of order eps times these.
std::pair<double, double> polynomial_scale(const TaylorData& P, double width) {
  double value = 0.0;
  double primitive = 0.0;
  double hk = 1.0;
  int k = 0;
  for (double c : P.coeffs) {
    value += std::abs(c) * hk;
    primitive += std::abs(c) * hk * width / (k + 1);
    hk *= width;
    ++k;
  }
  if (P.top) {
    value += std::abs(*P.top) * hk;
    primitive += std::abs(*P.top) * hk * width / (k + 1);
  }
  return {value, primitive};
}

}  // namespace

Quantity Analysis::remainder_alexiewicz(const TaylorData& P) {
  PrimitiveShift shift = [P](double x) { return P.primitive(x); };
  Quantity q = from(primitive(0).alexiewicz(shift));
  const double scale = polynomial_scale(P, iv_.width()).second;
  q.error += 4.0 * kEps * (q.value + 2.0 * scale);
  return q;
}

Quantity Analysis::remainder_lp(const TaylorData& P, double p) {
  Integrand in = f_.integrand(0);
  const Evaluator g = in.f;
  in.f = [g, P](double x) { return g(x) - P.eval(x); };
  Quantity q = from(lp_norm(in, iv_, p, tol_, f_.search_options(0, iv_)));
  // Pointwise rounding ρ moves the p-norm by at most ρ (b − a)^{1/p}.
  const double rho = 4.0 * kEps * (2.0 * polynomial_scale(P, iv_.width()).first);
  const double measure = std::isinf(p) ? 1.0 : std::pow(iv_.width(), 1.0 / p);
  q.error += rho * measure + 4.0 * kEps * q.value;
  return q;
}

Quantity Analysis::remainder_at(const TaylorData& P, double x) const {
  const double fx = f_.eval(0, x);
  const double px = P.eval(x);
  const double h = std::abs(x - P.base);
  double magnitude = std::abs(fx);
  double hk = 1.0;
  for (double c : P.coeffs) {
    magnitude += std::abs(c) * hk;
    hk *= h;
  }
  if (P.top) magnitude += std::abs(*P.top) * hk;
  const double value = std::abs(fx - px);
  return {value, 4.0 * kEps * magnitude};
}

// ---- x0 selection -----------------------------------------------------------

double auto_x0(const Func& f, Interval iv, int n) {
  iv = Interval::make(iv.lo, iv.hi);
  if (!f.has_order(n)) fail(ErrorCode::order_unavailable, f, "order n is not available");
  if (f.x0_hint) {
    if (const auto hint = f.x0_hint(iv); hint && iv.contains(*hint) && f.derivative_exists(n, *hint)) return *hint;
  }
  if (f.derivative_exists(n, iv.midpoint())) return iv.midpoint();
  // Fractional parts of k/φ spread evenly and avoid rational kinks.
  constexpr double kInvPhi = 0.6180339887498949;
  for (int k = 1; k <= 256; ++k) {
    const double frac = std::fmod(k * kInvPhi, 1.0);
    const double x = iv.lo + frac * iv.width();
    if (f.derivative_exists(n, x)) return x;
  }
  fail(ErrorCode::derivative_unavailable_at_x0, f, "no admissible x0 found");
}

// ---- preconditions ----------------------------------------------------------

void require_thm2(const Func& f, Interval iv, int n, double x0) {
  require_degree(n, 1);
  f.check_interval(iv);
  require_base(f, iv.lo, n - 1);
  if (!f.has_order(n)) fail(ErrorCode::order_unavailable, f, "order n is not available");
  if (!is_acg_star(f.regularity(n - 1))) {
    fail(ErrorCode::regularity_precondition, f, "f^(n-1) is not ACG*");
  }
  require_inside(iv, x0, "x0");
  if (!f.derivative_exists(n, x0)) {
    std::ostringstream os;
    os << "f^(" << n << ") does not exist at x0 = " << x0;
    fail(ErrorCode::derivative_unavailable_at_x0, f, os.str());
  }
}

void require_thm3(const Func& f, Interval iv, int n, bool needs_top_order) {
  require_degree(n, 0);
  f.check_interval(iv);
  require_base(f, iv.lo, n);
  if (needs_top_order && !f.has_order(n + 1)) fail(ErrorCode::order_unavailable, f, "order n+1 is not available");
  if (!is_acg_star(f.regularity(n))) fail(ErrorCode::regularity_precondition, f, "f^(n) is not ACG*");
}

void require_thm4(const Func& f, Interval iv, int n) {
  require_degree(n, 0);
  f.check_interval(iv);
  require_base(f, iv.lo, n);
  if (!is_continuous(f.regularity(n))) fail(ErrorCode::regularity_precondition, f, "f^(n) is not continuous");
}

// ---- bounds -----------------------------------------------------------------

BoundCheck bound_thm2_alexiewicz(Analysis& A, double x0, int n) {
  const Func& f = A.func();
  const Interval& iv = A.interval();
  require_thm2(f, iv, n, x0);
  const TaylorData P = modified_taylor_data(f, iv.lo, x0, n);
  const Quantity lhs = A.remainder_alexiewicz(P);
  const Quantity norm = A.order_alexiewicz(n, f.eval(n, x0));
  const Quantity rhs = scaled(std::pow(iv.width(), n) / factorial(n), norm);
  return make_check("thm2.alexiewicz", lhs, rhs, {n, std::nullopt, std::nullopt, x0, std::nullopt});
}

BoundCheck bound_thm2_pointwise(Analysis& A, double x0, int n, double x) {
  const Func& f = A.func();
  const Interval& iv = A.interval();
  require_thm2(f, iv, n, x0);
  require_inside(iv, x, "x");
  const TaylorData P = modified_taylor_data(f, iv.lo, x0, n);
  const Quantity lhs = A.remainder_at(P, x);
  const Quantity norm = A.order_alexiewicz(n, f.eval(n, x0), x);
  const Quantity rhs = scaled(std::pow(x - iv.lo, n - 1) / factorial(n - 1), norm);
  return make_check("thm2.pointwise", lhs, rhs, {n, std::nullopt, std::nullopt, x0, x});
}

BoundCheck bound_thm2_lp(Analysis& A, double x0, int n, double p) {
  const Func& f = A.func();
  const Interval& iv = A.interval();
  require_thm2(f, iv, n, x0);
  const TaylorData P = modified_taylor_data(f, iv.lo, x0, n);
  const Quantity lhs = A.remainder_lp(P, p);
  const Quantity norm = A.order_alexiewicz(n, f.eval(n, x0));
  const Quantity rhs = scaled(lp_factor(iv.width(), n - 1, p) / factorial(n - 1), norm);
  return make_check("thm2.lp", lhs, rhs, {n, p, std::nullopt, x0, std::nullopt});
}

BoundCheck bound_thm3_alexiewicz(Analysis& A, int n) {
  const Func& f = A.func();
  const Interval& iv = A.interval();
  require_thm3(f, iv, n, true);
  const TaylorData P = taylor_data(f, iv.lo, n);
  const Quantity lhs = A.remainder_alexiewicz(P);
  const Quantity rhs = scaled(std::pow(iv.width(), n + 1) / factorial(n + 1), A.order_alexiewicz(n + 1));
  return make_check("thm3.alexiewicz", lhs, rhs, {n, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
}

BoundCheck bound_thm3_pointwise(Analysis& A, int n, double x) {
  const Func& f = A.func();
  const Interval& iv = A.interval();
  require_thm3(f, iv, n, true);
  require_inside(iv, x, "x");
  const TaylorData P = taylor_data(f, iv.lo, n);
  const Quantity lhs = A.remainder_at(P, x);
  const Quantity rhs = scaled(std::pow(x - iv.lo, n) / factorial(n), A.order_alexiewicz(n + 1, 0.0, x));
  return make_check("thm3.pointwise", lhs, rhs, {n, std::nullopt, std::nullopt, std::nullopt, x});
}

BoundCheck bound_thm3_lp(Analysis& A, int n, double p) {
  const Func& f = A.func();
  const Interval& iv = A.interval();
  require_thm3(f, iv, n, true);
  const TaylorData P = taylor_data(f, iv.lo, n);
  const Quantity lhs = A.remainder_lp(P, p);
  const Quantity rhs = scaled(lp_factor(iv.width(), n, p) / factorial(n), A.order_alexiewicz(n + 1));
  return make_check("thm3.lp", lhs, rhs, {n, p, std::nullopt, std::nullopt, std::nullopt});
}

namespace {

Quantity a_constant(Analysis& A, int n, double p, const HolderPair& holder, AChoice which) {
  const Func& f = A.func();
  const Interval& iv = A.interval();
  const double w = iv.width();
  const double fact = factorial(n - 1);
  switch (which) {
    case AChoice::a1:
      if (n == 1) return A.order_lp(0, p, f.eval(0, iv.lo));
      return scaled(lp_factor(w, n - 1, p) / fact, A.order_alexiewicz(n));
    case AChoice::a2: {
      if (holder.alpha == 1.0) return scaled(lp_factor(w, n - 1, p) / fact, A.order_lp(n, 1.0));
      const double inv_beta = 1.0 / holder.beta;
      const double factor = std::pow(w, n - 1 + 1.0 / p + inv_beta) /
                            (fact * std::pow((n - 1) * holder.beta + 1.0, inv_beta) *
                             std::pow((n - 1 + inv_beta) * p + 1.0, 1.0 / p));
      return scaled(factor, A.order_lp(n, holder.alpha));
    }
    case AChoice::a3: {
      const Quantity W = A.order_weighted_power(n, p, (n - 1) * p + 1.0);
      const double factor = std::pow(w, 1.0 - 1.0 / p) / (fact * std::pow((n - 1) * p + 1.0, 1.0 / p));
      return scaled(factor, root(W, p));
    }
    case AChoice::a4: {
      const Quantity W = A.order_weighted_power(n, p, n);
      return scaled(std::pow(w, n * (1.0 - 1.0 / p)) / factorial(n), root(W, p));
    }
  }
  throw Error(ErrorCode::invalid_params, "unknown A constant");
}

void require_finite_p(double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw Error(ErrorCode::invalid_params, "A constants need 1 <= p < inf");
}

}  // namespace

AConstants a_constants(Analysis& A, int n, double p, HolderPair holder) {
  require_thm3(A.func(), A.interval(), n, false);
  require_degree(n, 1);
  require_finite_p(p);
  holder = HolderPair::make(holder.alpha, holder.beta);
  AConstants out;
  out.holder = holder;
  out.a1 = a_constant(A, n, p, holder, AChoice::a1);
  out.a2 = a_constant(A, n, p, holder, AChoice::a2);
  out.a3 = a_constant(A, n, p, holder, AChoice::a3);
  out.a4 = a_constant(A, n, p, holder, AChoice::a4);
  return out;
}

BoundCheck bound_thm3_lp_via_A(Analysis& A, int n, double p, double alpha, AChoice which) {
  const Func& f = A.func();
  const Interval& iv = A.interval();
  require_thm3(f, iv, n, false);
  require_degree(n, 1);
  if (!(p >= 1.0)) throw Error(ErrorCode::invalid_params, "p must satisfy 1 <= p <= inf");
  const TaylorData P = taylor_data(f, iv.lo, n);
  const double top = std::abs(f.eval(n, iv.lo));
  const Quantity lhs = A.remainder_lp(P, p);
  if (std::isinf(p)) {
    const double factor = std::pow(iv.width(), n) / factorial(n);
    const Quantity rhs = sum(Quantity{factor * top, roundoff(factor * top)}, scaled(factor, A.order_lp(n, p)));
    return make_check("thm3.lp.Ainf", lhs, rhs, {n, p, std::nullopt, std::nullopt, std::nullopt});
  }
  const HolderPair holder = HolderPair::conjugate(alpha);
  const double lead = lp_factor(iv.width(), n, p) / factorial(n) * top;
  const Quantity rhs = sum(Quantity{lead, roundoff(lead)}, a_constant(A, n, p, holder, which));
  std::optional<double> shown_alpha;
  if (which == AChoice::a2) shown_alpha = alpha;
  return make_check("thm3.lp." + std::string(to_string(which)), lhs, rhs,
                    {n, p, shown_alpha, std::nullopt, std::nullopt});
}

BoundCheck bound_thm4(Analysis& A, int n) {
  const Func& f = A.func();
  const Interval& iv = A.interval();
  require_thm4(f, iv, n);
  const TaylorData P = taylor_data(f, iv.lo, n);
  const Quantity lhs = A.remainder_alexiewicz(P);
  const Evaluator& top = f.order(n).eval;
  const double base = top(iv.lo);
  Evaluator G = [&top, base](double x) { return top(x) - base; };
  const Quantity norm = from(alexiewicz_norm_from_primitive(G, iv, A.tol(), f.search_options(n, iv)));
  const Quantity rhs = scaled(std::pow(iv.width(), n + 1) / factorial(n + 1), norm);
  return make_check("thm4.alexiewicz", lhs, rhs, {n, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
}

// ---- one-shot forms ---------------------------------------------------------

BoundCheck bound_thm2_alexiewicz(const Func& f, Interval iv, double x0, int n, double tol) {
  Analysis A(f, iv, tol);
  return bound_thm2_alexiewicz(A, x0, n);
}
BoundCheck bound_thm2_pointwise(const Func& f, Interval iv, double x0, int n, double x, double tol) {
  Analysis A(f, iv, tol);
  return bound_thm2_pointwise(A, x0, n, x);
}
BoundCheck bound_thm2_lp(const Func& f, Interval iv, double x0, int n, double p, double tol) {
  Analysis A(f, iv, tol);
  return bound_thm2_lp(A, x0, n, p);
}
BoundCheck bound_thm3_alexiewicz(const Func& f, Interval iv, int n, double tol) {
  Analysis A(f, iv, tol);
  return bound_thm3_alexiewicz(A, n);
}
BoundCheck bound_thm3_pointwise(const Func& f, Interval iv, int n, double x, double tol) {
  Analysis A(f, iv, tol);
  return bound_thm3_pointwise(A, n, x);
}
BoundCheck bound_thm3_lp(const Func& f, Interval iv, int n, double p, double tol) {
  Analysis A(f, iv, tol);
  return bound_thm3_lp(A, n, p);
}
AConstants a_constants(const Func& f, Interval iv, int n, double p, double alpha, double tol) {
  Analysis A(f, iv, tol);
  return a_constants(A, n, p, HolderPair::conjugate(alpha));
}
BoundCheck bound_thm3_lp_via_A(const Func& f, Interval iv, int n, double p, double alpha, AChoice which,
                               double tol) {
  Analysis A(f, iv, tol);
  return bound_thm3_lp_via_A(A, n, p, alpha, which);
}
BoundCheck bound_thm4(const Func& f, Interval iv, int n, double tol) {
  Analysis A(f, iv, tol);
  return bound_thm4(A, n);
}

}  // namespace hktaylor
