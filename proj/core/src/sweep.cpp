#include "hktaylor/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "hktaylor/corpus.hpp"
#include "hktaylor/error.hpp"

namespace hktaylor {
namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::config_invalid, what); }

bool is_theorem(const std::string& t) { return t == "thm2" || t == "thm3" || t == "thm4"; }

bool wants(const SweepConfig& cfg, const char* theorem) {
  return std::find(cfg.theorems.begin(), cfg.theorems.end(), theorem) != cfg.theorems.end();
}

// Pointwise sample points in (a, b], shared by every function so that cells
// line up across the corpus.
std::vector<double> sample_points(const SweepConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(cfg.x_samples));
  for (int i = 0; i < cfg.x_samples; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double x = cfg.interval.lo + u * cfg.interval.width();
    if (!(x > cfg.interval.lo)) x = cfg.interval.hi;
    xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

class CellSink {
 public:
  CellSink(std::string function, std::vector<Cell>& out) : function_(std::move(function)), out_(out) {}

  // Runs one check; any library error becomes a skipped cell.
  void run(const std::string& label, const BoundParams& params, const std::function<BoundCheck()>& check) {
    Cell cell;
    cell.label = label;
    cell.function = function_;
    cell.params = params;
    try {
      BoundCheck c = check();
      cell.label = c.label;
      cell.params = c.params;
      cell.lhs = c.lhs;
      cell.rhs = c.rhs;
      cell.slack = c.slack;
      cell.verdict = c.verdict;
    } catch (const Error& e) {
      cell.reason = std::string(to_string(e.code()));
    } catch (const std::exception&) {
      cell.reason = std::string(to_string(ErrorCode::evaluation_failure));
    }
    out_.push_back(std::move(cell));
  }

  void skip(const std::string& label, const BoundParams& params, ErrorCode code) {
    Cell cell;
    cell.label = label;
    cell.function = function_;
    cell.params = params;
    cell.reason = std::string(to_string(code));
    out_.push_back(std::move(cell));
  }

 private:
  std::string function_;
  std::vector<Cell>& out_;
};

BoundParams params_of(int n, std::optional<double> p = {}, std::optional<double> alpha = {},
                      std::optional<double> x0 = {}, std::optional<double> x = {}) {
  BoundParams bp;
  bp.n = n;
  bp.p = p;
  bp.alpha = alpha;
  bp.x0 = x0;
  bp.x = x;
  return bp;
}

void thm2_cells(const SweepConfig& cfg, Analysis& A, int n, const std::vector<double>& xs, CellSink& sink) {
  std::optional<double> x0 = cfg.x0;
  std::optional<ErrorCode> failure;
  if (!x0) {
    try {
      x0 = auto_x0(A.func(), A.interval(), n);
    } catch (const Error& e) {
      failure = e.code();
    }
  }
  auto emit = [&](const std::string& label, const BoundParams& bp, const std::function<BoundCheck()>& fn) {
    if (failure) {
      sink.skip(label, bp, *failure);
    } else {
      sink.run(label, bp, fn);
    }
  };
  const double x0v = x0.value_or(0.0);
  emit("thm2.alexiewicz", params_of(n, {}, {}, x0), [&] { return bound_thm2_alexiewicz(A, x0v, n); });
  for (double x : xs) {
    emit("thm2.pointwise", params_of(n, {}, {}, x0, x), [&] { return bound_thm2_pointwise(A, x0v, n, x); });
  }
  for (double p : cfg.p_values) {
    emit("thm2.lp", params_of(n, p, {}, x0), [&] { return bound_thm2_lp(A, x0v, n, p); });
  }
}

void thm3_cells(const SweepConfig& cfg, Analysis& A, int n, const std::vector<double>& xs, CellSink& sink) {
  sink.run("thm3.alexiewicz", params_of(n), [&] { return bound_thm3_alexiewicz(A, n); });
  for (double x : xs) {
    sink.run("thm3.pointwise", params_of(n, {}, {}, {}, x), [&] { return bound_thm3_pointwise(A, n, x); });
  }
  for (double p : cfg.p_values) {
    sink.run("thm3.lp", params_of(n, p), [&] { return bound_thm3_lp(A, n, p); });
  }
  for (double p : cfg.p_values) {
    if (std::isinf(p)) {
      sink.run("thm3.lp.Ainf", params_of(n, p), [&] { return bound_thm3_lp_via_A(A, n, p, 1.0, AChoice::a1); });
      continue;
    }
    sink.run("thm3.lp.A1", params_of(n, p), [&] { return bound_thm3_lp_via_A(A, n, p, 1.0, AChoice::a1); });
    for (double alpha : cfg.alpha_values) {
      sink.run("thm3.lp.A2", params_of(n, p, alpha),
               [&] { return bound_thm3_lp_via_A(A, n, p, alpha, AChoice::a2); });
    }
    sink.run("thm3.lp.A3", params_of(n, p), [&] { return bound_thm3_lp_via_A(A, n, p, 1.0, AChoice::a3); });
    sink.run("thm3.lp.A4", params_of(n, p), [&] { return bound_thm3_lp_via_A(A, n, p, 1.0, AChoice::a4); });
  }
}

std::vector<Cell> evaluate_task(const SweepConfig& cfg, const Func& f, int n, const std::vector<double>& xs) {
  std::vector<Cell> cells;
  CellSink sink(f.label(), cells);
  Analysis A(f, cfg.interval, cfg.tol);
  if (wants(cfg, "thm2")) thm2_cells(cfg, A, n, xs, sink);
  if (wants(cfg, "thm3")) thm3_cells(cfg, A, n, xs, sink);
  if (wants(cfg, "thm4")) sink.run("thm4.alexiewicz", params_of(n), [&] { return bound_thm4(A, n); });
  return cells;
}

}  // namespace

ReportFormat parse_format(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  invalid("format must be json or csv, got '" + std::string(s) + "'");
}

std::string_view to_string(ReportFormat f) noexcept { return f == ReportFormat::csv ? "csv" : "json"; }

std::vector<std::string> SweepConfig::labels() const {
  return function_labels.empty() ? default_corpus() : function_labels;
}

void SweepConfig::validate() const {
  for (const std::string& label : labels()) {
    try {
      (void)registry_lookup(label);
    } catch (const Error& e) {
      invalid("function '" + label + "': " + e.what());
    }
  }
  for (const std::string& t : theorems) {
    if (!is_theorem(t)) invalid("unknown theorem '" + t + "' (expected thm2, thm3 or thm4)");
  }
  for (double p : p_values) {
    if (!(p >= 1.0)) invalid("p values must be >= 1");
  }
  for (double a : alpha_values) {
    if (!(a >= 1.0)) invalid("alpha values must be >= 1");
  }
  if (x_samples < 0) invalid("x_samples must be non-negative");
  if (!(std::isfinite(interval.lo) && std::isfinite(interval.hi) && interval.lo < interval.hi)) {
    invalid("interval must satisfy a < b with both finite");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) invalid("tol must be positive");
  if (x0 && !(std::isfinite(*x0) && *x0 >= interval.lo && *x0 <= interval.hi)) {
    invalid("x0 must lie in the interval");
  }
  if (threads == 0) invalid("threads must be at least 1");
}

Summary tally(const std::vector<Cell>& cells) {
  Summary s;
  for (const Cell& c : cells) {
    if (c.skipped() || !c.verdict) {
      ++s.skipped;
      continue;
    }
    switch (*c.verdict) {
      case Verdict::holds: ++s.holds; break;
      case Verdict::holds_within_error: ++s.holds_within_error; break;
      case Verdict::violated: ++s.violated; break;
    }
  }
  return s;
}

Report run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  Report report;
  report.config = cfg;
  report.config.function_labels = cfg.labels();

  std::vector<Func> funcs;
  for (const std::string& label : report.config.function_labels) funcs.push_back(registry_lookup(label));
  const std::vector<double> xs = sample_points(cfg);

  struct Task {
    std::size_t func;
    int n;
  };
  std::vector<Task> tasks;
  if (!cfg.theorems.empty()) {
    for (std::size_t i = 0; i < funcs.size(); ++i) {
      for (int n : cfg.n_values) tasks.push_back({i, n});
    }
  }

  // Each task writes only its own slot; assembly follows task order.
  std::vector<std::vector<Cell>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      slots[t] = evaluate_task(cfg, funcs[tasks[t].func], tasks[t].n, xs);
    }
  };
  const unsigned workers = std::min<std::size_t>(cfg.threads, std::max<std::size_t>(tasks.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  for (auto& slot : slots) {
    for (auto& cell : slot) report.cells.push_back(std::move(cell));
  }
  report.summary = tally(report.cells);
  return report;
}

}  // namespace hktaylor
