#include "hktaylor/taylor.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "hktaylor/error.hpp"

namespace hktaylor {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

constexpr std::array<double, kMaxDegree + 1> kFactorials = [] {
  std::array<double, kMaxDegree + 1> out{};
  out[0] = 1.0;
  for (int k = 1; k <= kMaxDegree; ++k) out[k] = out[k - 1] * k;
  return out;
}();

void check_degree(int n, int lowest) {
  if (n < lowest || n > kMaxDegree) {
    std::ostringstream os;
    os << "degree n = " << n << " outside [" << lowest << ", " << kMaxDegree << "]";
    throw Error(ErrorCode::invalid_degree, os.str());
  }
}

void check_point(const Func& f, double a, double x) {
  if (!std::isfinite(a) || !std::isfinite(x) || x < a) {
    std::ostringstream os;
    os << "evaluation point x = " << x << " must satisfy x >= a = " << a;
    throw Error(ErrorCode::invalid_point, os.str());
  }
  if (f.domain() && !(f.domain()->contains(a) && f.domain()->contains(x))) {
    throw Error(ErrorCode::invalid_point, f.label() + ": point outside the domain");
  }
}

double base_derivative(const Func& f, int k, double a) {
  if (!f.has_order(k)) {
    std::ostringstream os;
    os << f.label() << ": order " << k << " is not available";
    throw Error(ErrorCode::order_unavailable, os.str());
  }
  if (!f.derivative_exists(k, a)) {
    std::ostringstream os;
    os << f.label() << ": f^(" << k << ") does not exist at the base point " << a;
    throw Error(ErrorCode::derivative_unavailable_at_base, os.str());
  }
  return f.eval(k, a);
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// (1/m!) ∫_a^x f^(order)(t)(x − t)^m dt
IntegralEstimate kernel_integral(const Func& f, int order, int m, double a, double x, double tol) {
  if (x == a) return {};
  if (!f.has_order(order)) {
    std::ostringstream os;
    os << f.label() << ": order " << order << " is not available";
    throw Error(ErrorCode::order_unavailable, os.str());
  }
  Integrand in = f.integrand(order);
  const Evaluator g = in.f;
  const double scale = 1.0 / kFactorials[m];
  in.f = [g, x, m, scale](double t) { return scale * g(t) * ipow(x - t, m); };
  return integrate(in, Interval::make(a, x), tol);
}

}  // namespace

double factorial(int n) {
  if (n < 0 || n > kMaxDegree) throw Error(ErrorCode::invalid_degree, "factorial argument out of range");
  return kFactorials[n];
}

double TaylorData::eval(double x) const {
  const double h = x - base;
  double acc = top.value_or(0.0);
  bool started = top.has_value();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = started ? acc * h + *it : *it;
    started = true;
  }
  return acc;
}

double TaylorData::primitive(double x) const {
  const double h = x - base;
  // ∫ c_k h^k = c_k h^{k+1}/(k+1)
  const std::size_t top_index = coeffs.size();
  double acc = top ? *top / static_cast<double>(top_index + 1) : 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * h + coeffs[k] / static_cast<double>(k + 1);
  return acc * h;
}

TaylorData taylor_data(const Func& f, double a, int n) {
  check_degree(n, 0);
  check_point(f, a, a);
  TaylorData out;
  out.base = a;
  out.degree = n;
  out.coeffs.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out.coeffs[k] = base_derivative(f, k, a) / kFactorials[k];
  return out;
}

TaylorData modified_taylor_data(const Func& f, double a, double x0, int n) {
  check_degree(n, 1);
  check_point(f, a, a);
  TaylorData out;
  out.base = a;
  out.degree = n;
  out.x0 = x0;
  out.coeffs.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.coeffs[k] = base_derivative(f, k, a) / kFactorials[k];
  if (!f.has_order(n)) throw Error(ErrorCode::order_unavailable, f.label() + ": top order not available");
  if (!std::isfinite(x0) || !f.derivative_exists(n, x0)) {
    std::ostringstream os;
    os << f.label() << ": f^(" << n << ") does not exist at x0 = " << x0;
    throw Error(ErrorCode::derivative_unavailable_at_x0, os.str());
  }
  out.top = f.eval(n, x0) / kFactorials[n];
  return out;
}

double taylor_poly(const Func& f, double a, int n, double x) {
  check_point(f, a, x);
  return taylor_data(f, a, n).eval(x);
}

double modified_taylor_poly(const Func& f, double a, double x0, int n, double x) {
  check_point(f, a, x);
  return modified_taylor_data(f, a, x0, n).eval(x);
}

double remainder_direct(const Func& f, double a, int n, double x) {
  check_point(f, a, x);
  return f.eval(0, x) - taylor_data(f, a, n).eval(x);
}

double modified_remainder_direct(const Func& f, double a, double x0, int n, double x) {
  check_point(f, a, x);
  return f.eval(0, x) - modified_taylor_data(f, a, x0, n).eval(x);
}

IntegralEstimate remainder_integral(const Func& f, double a, int n, double x, double tol) {
  check_degree(n, 0);
  check_point(f, a, x);
  for (int k = 0; k <= n; ++k) base_derivative(f, k, a);
  return kernel_integral(f, n + 1, n, a, x, tol);
}

IntegralEstimate modified_remainder_integral(const Func& f, double a, double x0, int n, double x, double tol) {
  check_point(f, a, x);
  const TaylorData data = modified_taylor_data(f, a, x0, n);
  IntegralEstimate out = kernel_integral(f, n, n - 1, a, x, tol);
  const double constant = *data.top * ipow(x - a, n);
  out.value -= constant;
  out.error_bound += 2.0 * kEps * std::abs(constant);
  return out;
}

IntegralEstimate remainder_by_parts(const Func& f, double a, int n, double x, double tol) {
  check_degree(n, 1);
  check_point(f, a, x);
  for (int k = 0; k <= n; ++k) base_derivative(f, k, a);
  IntegralEstimate out = kernel_integral(f, n, n - 1, a, x, tol);
  const double constant = f.eval(n, a) * ipow(x - a, n) / kFactorials[n];
  out.value -= constant;
  out.error_bound += 2.0 * kEps * std::abs(constant);
  return out;
}

}  // namespace hktaylor
