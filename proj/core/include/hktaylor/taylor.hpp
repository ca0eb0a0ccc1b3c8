#pragma once

#include <optional>
#include <vector>

#include "hktaylor/func.hpp"
#include "hktaylor/quadrature.hpp"

namespace hktaylor {

/// Factorials are tabulated exactly up to this degree.
inline constexpr int kMaxDegree = 20;

double factorial(int n);

/// Coefficients of a Taylor polynomial about `base`.
///   plain:    coeffs[k] = f^(k)(a)/k!, k = 0..n
///   modified: coeffs[k] = f^(k)(a)/k!, k = 0..n-1, with the top coefficient
///             f^(n)(x0)/n! held in `top`
struct TaylorData {
  double base = 0.0;
  int degree = 0;
  std::optional<double> x0;
  std::vector<double> coeffs;
  std::optional<double> top;

  double eval(double x) const;
  /// ∫_base^x P, exact.
  double primitive(double x) const;
};

TaylorData taylor_data(const Func& f, double a, int n);
TaylorData modified_taylor_data(const Func& f, double a, double x0, int n);

double taylor_poly(const Func& f, double a, int n, double x);
double modified_taylor_poly(const Func& f, double a, double x0, int n, double x);

/// f(x) − P_n(x), computed directly.
double remainder_direct(const Func& f, double a, int n, double x);
double modified_remainder_direct(const Func& f, double a, double x0, int n, double x);

/// (1/n!) ∫_a^x f^(n+1)(t)(x − t)^n dt.
IntegralEstimate remainder_integral(const Func& f, double a, int n, double x, double tol);

/// (1/(n−1)!) ∫_a^x [f^(n)(t) − f^(n)(x0)](x − t)^{n−1} dt. The constant
/// f^(n)(x0) is integrated in closed form.
IntegralEstimate modified_remainder_integral(const Func& f, double a, double x0, int n, double x, double tol);

/// −f^(n)(a)(x − a)^n/n! + (1/(n−1)!) ∫_a^x f^(n)(t)(x − t)^{n−1} dt.
IntegralEstimate remainder_by_parts(const Func& f, double a, int n, double x, double tol);

}  // namespace hktaylor
