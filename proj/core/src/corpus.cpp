#include "hktaylor/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

#include "hktaylor/error.hpp"
#include "hktaylor/weierstrass.hpp"

namespace hktaylor {
namespace {

constexpr int kSmoothOrders = 8;
// Bumps contributing breakpoints or landmarks to a single query.
constexpr long long kMaxHintBumps = 4096;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

BreakpointFn fixed_points(std::vector<double> points) {
  return [points = std::move(points)](double lo, double hi) {
    std::vector<double> out;
    for (double p : points) {
      if (p > lo && p < hi) out.push_back(p);
    }
    return out;
  };
}

// ---- smooth suite -------------------------------------------------------

Func smooth_func(std::string label, std::function<double(int, double)> derivative) {
  std::vector<DerivativeOrder> orders(kSmoothOrders + 1);
  for (int k = 0; k <= kSmoothOrders; ++k) {
    orders[k].eval = [derivative, k](double x) { return derivative(k, x); };
  }
  Evaluator oracle = [derivative](double x) {
    return derivative(kSmoothOrders - 1, x) - derivative(kSmoothOrders - 1, 0.0);
  };
  return Func(std::move(label), std::move(orders), std::nullopt, std::move(oracle));
}

// ---- bump sum -----------------------------------------------------------

struct Bump {
  double centre;
  double half_width;
  double weight;
};

Bump bump(const BumpSumParams& p, long long n) {
  const auto nd = static_cast<double>(n);
  return {1.0 / nd, p.c * std::pow(nd, -p.beta), std::pow(nd, p.alpha)};
}

// Bumps meeting [lo, hi], smallest index first, at most kMaxHintBumps.
std::vector<long long> bumps_meeting(const BumpSumParams& p, double lo, double hi) {
  std::vector<long long> out;
  if (hi <= 0.0) return out;
  const auto first = static_cast<long long>(std::max(1.0, std::floor(1.0 / (hi + p.c))));
  const double last_d = lo > 0.0 ? std::floor(1.0 / lo) + 2.0 : 1e18;
  const auto last = static_cast<long long>(std::min(last_d, static_cast<double>(first + kMaxHintBumps)));
  for (long long n = first; n <= last; ++n) {
    const Bump b = bump(p, n);
    if (b.centre + b.half_width >= lo && b.centre - b.half_width <= hi) out.push_back(n);
  }
  return out;
}

BreakpointFn bump_points(const BumpSumParams& p, std::function<void(const Bump&, std::vector<double>&)> emit) {
  return [p, emit = std::move(emit)](double lo, double hi) {
    std::vector<double> raw;
    for (long long n : bumps_meeting(p, lo, hi)) emit(bump(p, n), raw);
    std::vector<double> out;
    for (double x : raw) {
      if (x > lo && x < hi) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
}

// Anchors at 1/(j + 1/2), strictly between bumps j and j+1, where f and all
// its derivatives vanish.
AnchorMap between_bumps() {
  return AnchorMap{[](double t) { return 1.0 / t - 0.5; }, [](double j) { return 1.0 / (j + 0.5); }, true};
}

// ---- registry parsing ---------------------------------------------------

struct ParsedLabel {
  std::string name;
  std::map<std::string, std::pair<std::string, std::size_t>> values;  // key → (text, position)
};

[[noreturn]] void parse_fail(std::size_t pos, const std::string& message) {
  std::ostringstream os;
  os << "at position " << pos << ": " << message;
  throw Error(ErrorCode::parse_error, os.str());
}

ParsedLabel split_label(std::string_view label) {
  ParsedLabel out;
  const std::size_t colon = label.find(':');
  out.name = std::string(label.substr(0, colon));
  if (out.name.empty()) parse_fail(0, "missing function name");
  if (colon == std::string_view::npos) return out;
  std::size_t pos = colon + 1;
  if (pos >= label.size()) parse_fail(pos, "expected key=value after ':'");
  while (pos <= label.size()) {
    const std::size_t comma = std::min(label.find(',', pos), label.size());
    const std::string_view item = label.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size()) {
      parse_fail(pos, "expected key=value, got '" + std::string(item) + "'");
    }
    const std::string key(item.substr(0, eq));
    if (out.values.count(key)) parse_fail(pos, "duplicate key '" + key + "'");
    out.values[key] = {std::string(item.substr(eq + 1)), pos + eq + 1};
    pos = comma + 1;
  }
  return out;
}

class KeyReader {
 public:
  KeyReader(ParsedLabel parsed, std::vector<std::string> allowed)
      : parsed_(std::move(parsed)), allowed_(std::move(allowed)) {
    for (const auto& [key, value] : parsed_.values) {
      if (std::find(allowed_.begin(), allowed_.end(), key) == allowed_.end()) {
        parse_fail(value.second - key.size() - 1,
                   "unknown key '" + key + "' for " + parsed_.name + " (expected " + expected() + ")");
      }
    }
  }

  double real(const std::string& key, double fallback) const {
    const auto it = parsed_.values.find(key);
    if (it == parsed_.values.end()) return fallback;
    const std::string& text = it->second.first;
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(v)) {
      parse_fail(it->second.second, "'" + text + "' is not a number (key " + key + ")");
    }
    return v;
  }

  long long integer(const std::string& key, long long fallback) const {
    const auto it = parsed_.values.find(key);
    if (it == parsed_.values.end()) return fallback;
    const std::string& text = it->second.first;
    long long v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) {
      parse_fail(it->second.second, "'" + text + "' is not an integer (key " + key + ")");
    }
    return v;
  }

 private:
  std::string expected() const {
    if (allowed_.empty()) return "no keys";
    std::string out;
    for (const auto& k : allowed_) out += (out.empty() ? "" : ", ") + k;
    return out;
  }

  ParsedLabel parsed_;
  std::vector<std::string> allowed_;
};

}  // namespace

// ---- smooth suite -------------------------------------------------------

Func make_polynomial(int k) {
  if (k < 0 || k > 20) throw Error(ErrorCode::invalid_params, "polynomial degree must lie in [0, 20]");
  return smooth_func("poly:k=" + std::to_string(k), [k](int d, double x) {
    if (d > k) return 0.0;
    double coeff = 1.0;
    for (int i = 0; i < d; ++i) coeff *= k - i;
    return coeff * std::pow(x, k - d);
  });
}

Func make_exp() {
  return smooth_func("exp", [](int, double x) { return std::exp(x); });
}

Func make_sin() {
  return smooth_func("sin", [](int d, double x) {
    switch (d % 4) {
      case 0: return std::sin(x);
      case 1: return std::cos(x);
      case 2: return -std::sin(x);
      default: return -std::cos(x);
    }
  });
}

Func make_cos() {
  return smooth_func("cos", [](int d, double x) {
    switch (d % 4) {
      case 0: return std::cos(x);
      case 1: return -std::sin(x);
      case 2: return -std::cos(x);
      default: return std::sin(x);
    }
  });
}

Func make_kink() {
  const BreakpointFn half = fixed_points({0.5});
  std::vector<DerivativeOrder> orders(3);
  orders[0].eval = [](double x) {
    const double d = x - 0.5;
    return x <= 0.5 ? 0.125 - 0.5 * d * d : 0.125 + 0.5 * d * d;
  };
  orders[1].eval = [](double x) { return std::abs(x - 0.5); };
  orders[1].regularity = Regularity::acg_star;
  orders[2].eval = [](double x) { return x > 0.5 ? 1.0 : (x < 0.5 ? -1.0 : 0.0); };
  orders[2].regularity = Regularity::lebesgue;
  orders[2].exists_at = [](double x) { return x != 0.5; };
  for (auto& o : orders) o.breakpoints = half;
  Evaluator oracle = [](double x) { return std::abs(x - 0.5) - 0.5; };
  return Func("kink", std::move(orders), std::nullopt, std::move(oracle));
}

AnchorMap cubic_phase_anchors(double offset) {
  return AnchorMap{[offset](double t) { return 1.0 / (std::numbers::pi * t * t * t) - offset; },
                   [offset](double j) { return std::cbrt(1.0 / (std::numbers::pi * (j + offset))); }};
}

Func make_hk_oscillator() {
  std::vector<DerivativeOrder> orders(2);
  orders[0].eval = [](double x) { return x == 0.0 ? 0.0 : x * x * std::sin(1.0 / (x * x * x)); };
  orders[0].regularity = Regularity::acg_star;
  orders[0].singularity = SingularitySpec::left(0.0, SingularityKind::oscillatory_improper, cubic_phase_anchors(1.0));
  orders[1].eval = [](double x) {
    if (x == 0.0) return 0.0;
    const double u = 1.0 / (x * x * x);
    return 2.0 * x * std::sin(u) - 3.0 * std::cos(u) / (x * x);
  };
  orders[1].regularity = Regularity::hk_not_l1;
  orders[1].singularity = SingularitySpec::left(0.0, SingularityKind::oscillatory_improper, cubic_phase_anchors(0.5));
  Evaluator oracle = orders[0].eval;
  return Func("hkosc", std::move(orders), Interval::make(0.0, 1.0), std::move(oracle));
}

double oscillator_variation_lower_bound(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::invalid_params, "delta must lie in (0, 1)");
  auto F = [](double x) { return x * x * std::sin(1.0 / (x * x * x)); };
  // Lobe anchors u = (j + 1/2)π, j = 0, 1, …, inside [delta, 1].
  const AnchorMap anchors = cubic_phase_anchors(0.5);
  const auto last = static_cast<long long>(std::floor(anchors.index_of(delta)));
  long double total = 0.0L;
  double previous_x = 1.0;
  double previous_f = F(1.0);
  for (long long j = 0; j <= last; ++j) {
    const double z = anchors.abscissa_at(static_cast<double>(j));
    if (z >= previous_x) continue;
    const double fz = F(z);
    total += std::abs(fz - previous_f);
    previous_x = z;
    previous_f = fz;
  }
  total += std::abs(F(delta) - previous_f);
  return static_cast<double>(total);
}

// ---- bump sum -----------------------------------------------------------

BumpCase bump_case(const BumpSumParams& p) {
  validate(p);
  return p.alpha >= 3.0 * p.beta - 1.0 ? BumpCase::i : BumpCase::ii;
}

void validate(const BumpSumParams& p) {
  if (!(p.alpha > 0.0) || !(p.beta >= 2.0) || !(p.c > 0.0) || !std::isfinite(p.alpha) || !std::isfinite(p.beta) ||
      !std::isfinite(p.c)) {
    throw Error(ErrorCode::invalid_params, "bump sum requires alpha > 0, beta >= 2, c > 0");
  }
  if (!(p.alpha < 3.0 * p.beta)) {
    // n^alpha b_n^3 must vanish for f to be continuously differentiable.
    throw Error(ErrorCode::invalid_params, "bump sum requires alpha < 3 beta");
  }
  // Supports [a_n − b_n, a_n + b_n] must be pairwise disjoint; with beta >= 2
  // the gap condition only tightens with n, so a finite scan suffices.
  for (long long n = 1; n <= 1000000; ++n) {
    const Bump b = bump(p, n);
    const Bump next = bump(p, n + 1);
    if (b.centre - b.half_width <= next.centre + next.half_width) {
      std::ostringstream os;
      os << "bump supports " << n << " and " << n + 1 << " overlap";
      throw Error(ErrorCode::invalid_params, os.str());
    }
    if (n > 64 && b.half_width + next.half_width < 0.25 * (b.centre - next.centre)) break;
  }
}

std::optional<long long> bump_index(const BumpSumParams& p, double x) {
  if (!(x > 0.0) || x > 1.0 + p.c) return std::nullopt;
  const double inv = 1.0 / x;
  if (inv > 1e15) return std::nullopt;
  const auto n0 = static_cast<long long>(std::floor(inv));
  for (long long n = std::max(1LL, n0 - 1); n <= n0 + 1; ++n) {
    const Bump b = bump(p, n);
    if (std::abs(x - b.centre) <= b.half_width) return n;
  }
  return std::nullopt;
}

Func make_bump_sum(const BumpSumParams& p) {
  const BumpCase kase = bump_case(p);
  auto term = [p](int k) {
    return [p, k](double x) {
      const auto n = bump_index(p, x);
      if (!n) return 0.0;
      const Bump b = bump(p, *n);
      const double s = x - b.centre;
      const double q = s * s - b.half_width * b.half_width;
      switch (k) {
        case 0: return b.weight * q * q;
        case 1: return 4.0 * b.weight * s * q;
        default: return 4.0 * b.weight * (3.0 * s * s - b.half_width * b.half_width);
      }
    };
  };

  const BreakpointFn edges = bump_points(p, [](const Bump& b, std::vector<double>& out) {
    out.push_back(b.centre - b.half_width);
    out.push_back(b.centre);
    out.push_back(b.centre + b.half_width);
  });

  std::vector<DerivativeOrder> orders(3);
  for (int k = 0; k < 3; ++k) {
    orders[k].eval = term(k);
    orders[k].breakpoints = edges;
    orders[k].singularity = SingularitySpec::left(
        0.0, (k == 2 && kase == BumpCase::i) ? SingularityKind::unbounded : SingularityKind::oscillatory_improper,
        between_bumps());
  }
  orders[0].landmarks = bump_points(p, [](const Bump& b, std::vector<double>& out) { out.push_back(b.centre); });
  orders[1].regularity = Regularity::acg_star;
  orders[1].landmarks = bump_points(p, [](const Bump& b, std::vector<double>& out) {
    const double off = b.half_width / std::numbers::sqrt3;
    out.push_back(b.centre - off);
    out.push_back(b.centre + off);
  });
  orders[2].regularity = kase == BumpCase::i ? Regularity::hk_not_l1 : Regularity::lebesgue;
  orders[2].landmarks = orders[0].landmarks;
  // f'' jumps at every support edge; at 0 it exists only when the weighted
  // bump heights n^alpha b_n^3 / a_n tend to zero (case ii).
  orders[2].exists_at = [p, kase](double x) {
    if (x == 0.0) return kase == BumpCase::ii;
    const auto n = bump_index(p, x);
    if (!n) return true;
    const Bump b = bump(p, *n);
    return std::abs(x - b.centre) != b.half_width;
  };

  Evaluator oracle = orders[1].eval;
  Func f("bump:alpha=" + fmt(p.alpha) + ",beta=" + fmt(p.beta) + ",c=" + fmt(p.c), std::move(orders),
         Interval::make(0.0, 1.0), std::move(oracle));
  // Zero of f'' on the rising flank of the bump nearest the midpoint.
  f.x0_hint = [p](Interval iv) -> std::optional<double> {
    const double mid = iv.midpoint();
    if (!(mid > 0.0)) return std::nullopt;
    const auto m = static_cast<long long>(std::llround(1.0 / mid));
    std::optional<double> best;
    for (long long n = std::max(1LL, m - 1); n <= m + 1; ++n) {
      const Bump b = bump(p, n);
      const double x = b.centre + b.half_width / std::numbers::sqrt3;
      if (!iv.contains(x)) continue;
      if (!best || std::abs(x - mid) < std::abs(*best - mid)) best = x;
    }
    return best;
  };
  return f;
}

// ---- Weierstrass --------------------------------------------------------

void validate(const WeierstrassParams& p) {
  if (!(p.amp_ratio > 0.0 && p.amp_ratio < 1.0)) throw Error(ErrorCode::invalid_params, "amp_ratio must lie in (0, 1)");
  if (p.freq_base < 3 || p.freq_base % 2 == 0) {
    throw Error(ErrorCode::invalid_params, "freq_base must be an odd integer >= 3");
  }
  if (!(p.amp_ratio * static_cast<double>(p.freq_base) > 1.0 + 1.5 * std::numbers::pi)) {
    throw Error(ErrorCode::invalid_params, "nowhere differentiability needs a*b > 1 + 3pi/2");
  }
  if (p.terms < 0 || p.n_fold < 1 || p.n_fold > 20) {
    throw Error(ErrorCode::invalid_params, "terms must be >= 0 and n_fold in [1, 20]");
  }
  const double tail = std::pow(p.amp_ratio, p.terms + 1) / (1.0 - p.amp_ratio);
  if (!(tail < 1e-12)) {
    std::ostringstream os;
    os << "truncation tail " << tail << " is not below 1e-12";
    throw Error(ErrorCode::invalid_params, os.str());
  }
  if (!(std::pow(static_cast<double>(p.freq_base), p.terms) < 1e290)) {
    throw Error(ErrorCode::invalid_params, "highest frequency overflows");
  }
}

Func make_weierstrass_taylor(const WeierstrassParams& p) {
  validate(p);
  auto series = std::make_shared<const WeierstrassSeries>(p);
  const int n = p.n_fold;
  std::vector<DerivativeOrder> orders(static_cast<std::size_t>(n) + 1);
  for (int d = 0; d < n; ++d) {
    orders[d].eval = [series, j = n - d](double x) { return series->iterated(j, x); };
  }
  orders[n].eval = [series](double t) { return series->g(t); };
  orders[n].regularity = Regularity::c0_only;
  orders[n].modulus = [series](double h) { return series->modulus(h); };
  Evaluator oracle = [series](double x) { return series->iterated(1, x); };
  return Func("weier:a=" + fmt(p.amp_ratio) + ",b=" + std::to_string(p.freq_base) + ",K=" + std::to_string(p.terms) +
                  ",n=" + std::to_string(n),
              std::move(orders), Interval::make(0.0, 1.0), std::move(oracle));
}

// ---- registry -----------------------------------------------------------

std::vector<RegistryEntry> registry_entries() {
  return {
      {"poly", "k", "x^k, 0 <= k <= 20"},
      {"exp", "", "e^x"},
      {"sin", "", "sin x"},
      {"cos", "", "cos x"},
      {"kink", "", "antiderivative of |x - 1/2|; second derivative jumps at 1/2"},
      {"bump", "alpha,beta,c", "sum of n^alpha-weighted quartic bumps at 1/n with half-width c n^-beta"},
      {"weier", "a,b,K,n", "n-fold primitive of the truncated Weierstrass series"},
      {"hkosc", "", "x^2 sin(x^-3); derivative HK integrable but not Lebesgue"},
  };
}

std::vector<std::string> default_corpus() {
  std::vector<std::string> out;
  for (int k = 0; k <= 6; ++k) out.push_back("poly:k=" + std::to_string(k));
  for (const char* name : {"exp", "sin", "cos", "kink"}) out.emplace_back(name);
  out.emplace_back("bump:alpha=5.5,beta=2,c=0.05");
  out.emplace_back("bump:alpha=4,beta=2,c=0.05");
  out.emplace_back("weier:a=0.5,b=13,K=40,n=2");
  out.emplace_back("hkosc");
  return out;
}

Func registry_lookup(std::string_view label) {
  ParsedLabel parsed = split_label(label);
  const std::string name = parsed.name;
  if (name == "poly") {
    const KeyReader keys(std::move(parsed), {"k"});
    return make_polynomial(static_cast<int>(keys.integer("k", 3)));
  }
  if (name == "exp" || name == "sin" || name == "cos" || name == "kink" || name == "hkosc") {
    const KeyReader keys(std::move(parsed), {});
    if (name == "exp") return make_exp();
    if (name == "sin") return make_sin();
    if (name == "cos") return make_cos();
    if (name == "kink") return make_kink();
    return make_hk_oscillator();
  }
  if (name == "bump") {
    const KeyReader keys(std::move(parsed), {"alpha", "beta", "c"});
    BumpSumParams p;
    p.alpha = keys.real("alpha", p.alpha);
    p.beta = keys.real("beta", p.beta);
    p.c = keys.real("c", p.c);
    return make_bump_sum(p);
  }
  if (name == "weier") {
    const KeyReader keys(std::move(parsed), {"a", "b", "K", "n"});
    WeierstrassParams p;
    p.amp_ratio = keys.real("a", p.amp_ratio);
    const long long b = keys.integer("b", static_cast<long long>(p.freq_base));
    if (b < 0) throw Error(ErrorCode::invalid_params, "b must be positive");
    p.freq_base = static_cast<std::uint64_t>(b);
    p.terms = static_cast<int>(keys.integer("K", p.terms));
    p.n_fold = static_cast<int>(keys.integer("n", p.n_fold));
    return make_weierstrass_taylor(p);
  }
  std::string known;
  for (const auto& e : registry_entries()) known += (known.empty() ? "" : ", ") + e.name;
  throw Error(ErrorCode::unknown_function, "unknown function '" + name + "' (known: " + known + ")");
}

}  // namespace hktaylor
