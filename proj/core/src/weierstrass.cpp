#include "hktaylor/weierstrass.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>

#include "hktaylor/error.hpp"

namespace hktaylor {
namespace {

__extension__ using u128 = unsigned __int128;

constexpr long double kPiL = std::numbers::pi_v<long double>;

// Below this |ωx| the closed form cancels badly; sum the power series instead.
constexpr double kSeriesCutoff = 2.0;

// Re of x^j Σ_m (iωx)^m/(m+j)!
double iterated_series(int j, double omega, double x) {
  const double z = omega * x;
  double fact = 1.0;
  for (int i = 2; i <= j; ++i) fact *= i;
  double term = std::pow(x, j) / fact;  // m = 0
  double sum = term;
  for (int m = 2; m < 60; m += 2) {
    term *= -z * z / ((m + j - 1.0) * (m + j));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Re of (e^{iωx} − Σ_{m<j}(iωx)^m/m!)/(iω)^j, with e^{iωx} = cos + i sin given.
double iterated_closed(int j, double omega, double x, double c, double s) {
  double head = 0.0;
  switch (j % 4) {
    case 0: head = c; break;
    case 1: head = s; break;
    case 2: head = -c; break;
    default: head = -s; break;
  }
  head /= std::pow(omega, j);
  double poly = 0.0;
  double xm = 1.0;
  double mfact = 1.0;
  for (int m = 0; m < j; ++m) {
    if (m > 0) {
      xm *= x;
      mfact *= m;
    }
    const int d = j - m;
    if (d % 2 != 0) continue;
    const double sign = (d / 2) % 2 == 0 ? 1.0 : -1.0;
    poly += sign * xm / (mfact * std::pow(omega, d));
  }
  return head - poly;
}

}  // namespace

WeierstrassSeries::WeierstrassSeries(const WeierstrassParams& p) : p_(p) {
  amplitudes_.resize(static_cast<std::size_t>(p.terms) + 1);
  frequencies_.resize(amplitudes_.size());
  double amp = 1.0;
  double freq = std::numbers::pi;
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
    amplitudes_[k] = amp;
    frequencies_[k] = freq;
    amp *= p.amp_ratio;
    freq *= static_cast<double>(p.freq_base);
  }
}

std::vector<long double> WeierstrassSeries::reduced_phases(double t) const {
  const std::size_t count = amplitudes_.size();
  std::vector<long double> out(count, 0.0L);
  t = std::abs(t);
  if (t == 0.0) return out;

  int exponent = 0;
  const double mantissa = std::frexp(t, &exponent);
  auto m = static_cast<std::uint64_t>(std::ldexp(mantissa, 53));
  int e = exponent - 53;
  while (e < 0 && (m & 1U) == 0) {
    m >>= 1;
    ++e;
  }
  if (e >= 0) {
    // Integer t; b is odd so b^k t ≡ t (mod 2).
    const long double r = (e > 0) ? 0.0L : static_cast<long double>(m & 1U);
    std::fill(out.begin(), out.end(), r);
    return out;
  }

  const int s = -e;
  if (s + 1 <= 127) {
    // b^k m mod 2^{s+1}; wrapping 128-bit products keep the low bits exact.
    const u128 mask = (u128{1} << (s + 1)) - 1;
    u128 power = 1;
    for (std::size_t k = 0; k < count; ++k) {
      const u128 r = (power * m) & mask;
      out[k] = std::ldexp(static_cast<long double>(r), -s);
      power *= p_.freq_base;
    }
    return out;
  }

  namespace mp = boost::multiprecision;
  const mp::cpp_int modulus = mp::cpp_int(1) << (s + 1);
  mp::cpp_int power = 1;
  const int shift = s + 1 - 64;
  for (std::size_t k = 0; k < count; ++k) {
    const mp::cpp_int r = (power * m) % modulus;
    const auto top = static_cast<std::uint64_t>(r >> shift);
    out[k] = std::ldexp(static_cast<long double>(top), shift - s);
    power = (power * p_.freq_base) % modulus;
  }
  return out;
}

double WeierstrassSeries::g(double t) const {
  const std::vector<long double> phase = reduced_phases(t);
  long double sum = 0.0L;
  for (std::size_t k = 0; k < phase.size(); ++k) sum += amplitudes_[k] * std::cos(kPiL * phase[k]);
  return static_cast<double>(sum);
}

double WeierstrassSeries::iterated(int j, double x) const {
  if (j == 0) return g(x);
  if (!(x >= 0.0)) throw Error(ErrorCode::invalid_point, "iterated primitive is defined for x >= 0");
  const std::vector<long double> phase = reduced_phases(x);
  long double sum = 0.0L;
  for (std::size_t k = 0; k < phase.size(); ++k) {
    const double omega = frequencies_[k];
    double term = 0.0;
    if (omega * x < kSeriesCutoff) {
      term = iterated_series(j, omega, x);
    } else {
      const long double angle = kPiL * phase[k];
      term = iterated_closed(j, omega, x, static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
    }
    sum += amplitudes_[k] * term;
  }
  return static_cast<double>(sum);
}

double WeierstrassSeries::modulus(double h) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) sum += amplitudes_[k] * std::min(2.0, frequencies_[k] * h);
  return sum;
}

}  // namespace hktaylor
