#pragma once

#include <cstdint>
#include <vector>

#include "hktaylor/corpus.hpp"

namespace hktaylor {

/// Truncated Weierstrass series with exact phase reduction and closed-form
/// iterated primitives. Arguments are expected in [0, ∞).
class WeierstrassSeries {
 public:
  explicit WeierstrassSeries(const WeierstrassParams& p);

  /// g(t) = Σ a^k cos(b^k π t)
  double g(double t) const;
  /// j-fold iterated primitive of g from 0; j = 0 gives g.
  double iterated(int j, double x) const;
  /// Σ a^k min(2, π b^k h), a bound on |g(s) − g(t)| for |s − t| ≤ h.
  double modulus(double h) const;

  /// b^k t mod 2 for k = 0..K, computed exactly from the binary expansion of t.
  std::vector<long double> reduced_phases(double t) const;

 private:
  WeierstrassParams p_;
  std::vector<double> amplitudes_;   // a^k
  std::vector<double> frequencies_;  // π b^k
};

}  // namespace hktaylor
