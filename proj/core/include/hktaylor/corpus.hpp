#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hktaylor/func.hpp"

namespace hktaylor {

/// Σ n^α f_n(x) with f_n(x) = (x − a_n + b_n)²(x − a_n − b_n)² on
/// |x − a_n| ≤ b_n, a_n = 1/n, b_n = c·n^{−β}.
struct BumpSumParams {
  double alpha = 5.5;
  double beta = 2.0;
  double c = 0.05;
};

/// Case i: f'' is HK integrable but not Lebesgue integrable (3β−1 ≤ α < 3β).
/// Case ii: f'' is Lebesgue integrable (0 < α < 3β−1).
enum class BumpCase { i, ii };

BumpCase bump_case(const BumpSumParams& p);
void validate(const BumpSumParams& p);
Func make_bump_sum(const BumpSumParams& p);

/// Index of the bump containing x, if any. Constant time.
std::optional<long long> bump_index(const BumpSumParams& p, double x);

/// f = n-fold iterated primitive from 0 of g(t) = Σ_{k=0}^{K} a^k cos(b^k π t).
struct WeierstrassParams {
  double amp_ratio = 0.5;
  std::uint64_t freq_base = 13;
  int terms = 40;  // K, the highest retained index
  int n_fold = 2;
};

void validate(const WeierstrassParams& p);
Func make_weierstrass_taylor(const WeierstrassParams& p);

Func make_polynomial(int k);
Func make_exp();
Func make_sin();
Func make_cos();
/// f(x) = ∫_0^x |t − 1/2| dt; f'' = sign(x − 1/2) jumps at 1/2.
Func make_kink();
/// F(x) = x² sin(x^{−3}), F(0) = 0. F' is HK integrable but not Lebesgue.
Func make_hk_oscillator();

/// Anchors for integrands oscillating in the phase u = x^{−3}: abscissae where
/// u = (j + offset)π.
AnchorMap cubic_phase_anchors(double offset);

/// Lower bound for ∫_δ^1 |F'| of the oscillator: the variation of F across
/// consecutive lobe anchors in [δ, 1].
double oscillator_variation_lower_bound(double delta);

/// Builds a Func from `name[:key=value,...]`, e.g. "poly:k=3" or
/// "bump:alpha=5.5,beta=2,c=0.05".
Func registry_lookup(std::string_view label);

struct RegistryEntry {
  std::string name;
  std::string keys;  // comma separated, empty if none
  std::string summary;
};
std::vector<RegistryEntry> registry_entries();

/// The default verification corpus.
std::vector<std::string> default_corpus();

}  // namespace hktaylor
