#include "hktaylor/func.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hktaylor/error.hpp"

namespace hktaylor {

std::string_view to_string(Regularity r) noexcept {
  switch (r) {
    case Regularity::smooth: return "smooth";
    case Regularity::acg_star: return "acg-star";
    case Regularity::lebesgue: return "lebesgue";
    case Regularity::hk_not_l1: return "hk-not-l1";
    case Regularity::c0_only: return "c0-only";
  }
  return "unknown";
}

Func::Func(std::string label, std::vector<DerivativeOrder> orders, std::optional<Interval> domain,
           std::optional<Evaluator> primitive_oracle)
    : label_(std::move(label)), orders_(std::move(orders)), domain_(domain),
      primitive_oracle_(std::move(primitive_oracle)) {
  if (orders_.empty()) throw Error(ErrorCode::invalid_params, label_ + ": at least one evaluator is required");
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    if (!orders_[k].eval) throw Error(ErrorCode::invalid_params, label_ + ": missing evaluator");
    // Nothing differentiates a nowhere-differentiable order.
    if (orders_[k].regularity == Regularity::c0_only && k + 1 != orders_.size()) {
      throw Error(ErrorCode::invalid_params, label_ + ": only the top order may be c0-only");
    }
    // A non-continuous order cannot have a derivative in the list.
    if (k + 1 < orders_.size() && !is_continuous(orders_[k].regularity)) {
      throw Error(ErrorCode::invalid_params, label_ + ": a discontinuous order cannot be differentiated further");
    }
  }
}

const DerivativeOrder& Func::order(int k) const {
  if (!has_order(k)) {
    std::ostringstream os;
    os << label_ << ": derivative of order " << k << " is not available (max order " << max_order() << ")";
    throw Error(ErrorCode::order_unavailable, os.str());
  }
  return orders_[static_cast<std::size_t>(k)];
}

double Func::eval(int k, double x) const { return order(k).eval(x); }

bool Func::derivative_exists(int k, double x) const {
  if (!has_order(k)) return false;
  if (domain_ && !domain_->contains(x)) return false;
  const auto& o = orders_[static_cast<std::size_t>(k)];
  return !o.exists_at || o.exists_at(x);
}

Integrand Func::integrand(int k) const {
  const auto& o = order(k);
  return Integrand{o.eval, o.singularity, o.breakpoints};
}

SupSearchOptions Func::search_options(int k, Interval iv) const {
  SupSearchOptions options;
  const auto& o = order(k);
  if (o.landmarks) options.landmarks = o.landmarks(iv.lo, iv.hi);
  if (o.breakpoints) {
    const auto extra = o.breakpoints(iv.lo, iv.hi);
    options.landmarks.insert(options.landmarks.end(), extra.begin(), extra.end());
  }
  return options;
}

void Func::check_interval(Interval iv) const {
  iv = Interval::make(iv.lo, iv.hi);
  if (domain_ && !(iv.lo >= domain_->lo && iv.hi <= domain_->hi)) {
    std::ostringstream os;
    os << label_ << ": interval [" << iv.lo << ", " << iv.hi << "] leaves the domain [" << domain_->lo << ", "
       << domain_->hi << "]";
    throw Error(ErrorCode::invalid_interval, os.str());
  }
}

std::vector<ChainViolation> check_derivative_chain(const Func& f, Interval iv, std::uint64_t seed, int samples,
                                                   double h, double rel_tol) {
  iv = Interval::make(iv.lo, iv.hi);
  std::vector<ChainViolation> out;
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  for (int k = 1; k <= f.max_order(); ++k) {
    const DerivativeOrder& lower = f.order(k - 1);
    const DerivativeOrder& upper = f.order(k);
    std::vector<double> avoid;
    for (const auto* o : {&lower, &upper}) {
      if (o->breakpoints) {
        const auto b = o->breakpoints(iv.lo, iv.hi);
        avoid.insert(avoid.end(), b.begin(), b.end());
      }
      if (o->singularity.active()) avoid.push_back(*o->singularity.location);
    }
    std::sort(avoid.begin(), avoid.end());

    auto acceptable = [&](double x) {
      if (x - 2.0 * h < iv.lo || x + 2.0 * h > iv.hi) return false;
      if (!f.derivative_exists(k, x)) return false;
      const auto it = std::lower_bound(avoid.begin(), avoid.end(), x - 2.0 * h);
      return it == avoid.end() || *it > x + 2.0 * h;
    };

    int accepted = 0;
    for (int attempt = 0; accepted < samples && attempt < 64 * samples; ++attempt) {
      const double x = iv.lo + iv.width() * uniform();
      if (!acceptable(x)) continue;
      const double exact = upper.eval(x);
      const double tolerance = rel_tol * std::max(1.0, std::abs(exact));
      auto allowance_at = [&](double step) {
        // An only-continuous order can move by ω(step) inside each stencil.
        return upper.modulus ? tolerance + (5.0 / 3.0) * upper.modulus(step) : tolerance;
      };
      // The largest step across which the claimed derivative itself stays
      // within the allowance resolves the local oscillation. If none of the
      // candidate steps does, the sample is inconclusive, not a violation.
      double step = h;
      bool resolved = false;
      for (int i = 0; i < 8 && !resolved; ++i, step /= 8.0) {
        const double swing = std::abs(upper.eval(x + step) - exact) + std::abs(upper.eval(x - step) - exact);
        resolved = swing <= allowance_at(step);
        if (resolved) break;
      }
      if (!resolved) continue;
      ++accepted;
      // Richardson-combined central differences cancel the step^2 term.
      auto central = [&](double s) {
        const double xp = x + s;
        const double xm = x - s;
        return (lower.eval(xp) - lower.eval(xm)) / (xp - xm);
      };
      const double fd = (4.0 * central(0.5 * step) - central(step)) / 3.0;
      const double allowance = allowance_at(step);
      if (!(std::abs(fd - exact) <= allowance)) out.push_back({k, x, fd, exact, allowance});
    }
  }
  return out;
}

}  // namespace hktaylor
