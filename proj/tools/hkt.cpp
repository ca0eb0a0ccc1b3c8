// hkt: verification sweeps of Taylor remainder bounds.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "hktaylor/corpus.hpp"
#include "hktaylor/error.hpp"
#include "hktaylor/func.hpp"
#include "hktaylor/sweep.hpp"

namespace {

using namespace hktaylor;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitViolated = 2;

double parse_real(const std::string& s, const char* what) {
  if (s == "inf" || s == "∞") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::config_invalid, std::string(what) + ": cannot parse '" + s + "'");
}

Interval parse_interval(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::config_invalid, "--interval expects a,b");
  const double a = parse_real(s.substr(0, comma), "--interval");
  const double b = parse_real(s.substr(comma + 1), "--interval");
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
    throw Error(ErrorCode::config_invalid, "--interval needs finite a < b");
  }
  return Interval{a, b};
}

struct VerifyOptions {
  std::string config_path;
  std::string function;
  std::vector<std::string> theorems;
  std::vector<int> n_values;
  std::vector<std::string> p_values;
  std::vector<std::string> alpha_values;
  std::string x0 = "auto";
  std::string interval = "0,1";
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int x_samples = 4;
  std::string out;
  std::string format;
  unsigned threads = 1;
};

SweepConfig build_config(const VerifyOptions& o, const CLI::App& cmd) {
  SweepConfig cfg;
  if (!o.config_path.empty()) {
    cfg = load_config(o.config_path);
    if (cmd.count("--out") > 0) cfg.output_path = o.out;
    if (cmd.count("--format") > 0) cfg.output_format = parse_format(o.format);
    if (cmd.count("--threads") > 0) cfg.threads = o.threads;
    cfg.validate();
    return cfg;
  }
  if (o.function.empty()) throw Error(ErrorCode::config_invalid, "verify needs --config or --function");
  cfg.function_labels = {o.function};
  if (!o.theorems.empty()) cfg.theorems = o.theorems;
  if (!o.n_values.empty()) cfg.n_values = o.n_values;
  if (!o.p_values.empty()) {
    cfg.p_values.clear();
    for (const auto& p : o.p_values) cfg.p_values.push_back(parse_real(p, "--p"));
  }
  if (!o.alpha_values.empty()) {
    cfg.alpha_values.clear();
    for (const auto& a : o.alpha_values) cfg.alpha_values.push_back(parse_real(a, "--alpha"));
  }
  if (o.x0 != "auto") cfg.x0 = parse_real(o.x0, "--x0");
  cfg.interval = parse_interval(o.interval);
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  cfg.x_samples = o.x_samples;
  cfg.output_path = o.out;
  if (!o.format.empty()) cfg.output_format = parse_format(o.format);
  cfg.threads = o.threads;
  cfg.validate();
  return cfg;
}

int run_verify(const VerifyOptions& o, const CLI::App& cmd) {
  SweepConfig cfg;
  try {
    cfg = build_config(o, cmd);
  } catch (const Error& e) {
    std::cerr << "hkt: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitConfig;
  }
  const Report report = run_sweep(cfg);
  try {
    write_report(report, cfg);
  } catch (const Error& e) {
    std::cerr << "hkt: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitConfig;
  }
  const Summary& s = report.summary;
  std::cerr << "holds " << s.holds << ", holds_within_error " << s.holds_within_error << ", violated " << s.violated
            << ", skipped " << s.skipped << "\n";
  return s.violated == 0 ? kExitOk : kExitViolated;
}

int run_list() {
  for (const RegistryEntry& e : registry_entries()) {
    std::cout << e.name;
    if (!e.keys.empty()) std::cout << " [" << e.keys << "]";
    std::cout << "\n    " << e.summary << "\n";
  }
  std::cout << "\ndefault corpus:\n";
  for (const std::string& label : default_corpus()) std::cout << "  " << label << "\n";
  return kExitOk;
}

// Finite-difference consistency of every derivative chain, and the top
// order's cumulative integral against its closed-form primitive.
int run_selftest(std::uint64_t seed, double tol) {
  int failures = 0;
  auto line = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  };
  const Interval iv{0.0, 1.0};
  for (const std::string& label : default_corpus()) {
    const Func f = registry_lookup(label);
    const auto violations = check_derivative_chain(f, iv, seed);
    std::string detail = "chain " + label;
    if (!violations.empty()) {
      const ChainViolation& v = violations.front();
      char buf[160];
      std::snprintf(buf, sizeof buf, " (order %d at x=%.6g: fd %.6g vs %.6g)", v.order, v.x, v.finite_difference,
                    v.exact);
      detail += buf;
    }
    line(violations.empty(), detail);

    const int top = f.max_order();
    if (!f.primitive_oracle() || f.regularity(top) == Regularity::c0_only) continue;
    const Evaluator& oracle = *f.primitive_oracle();
    std::vector<double> xs;
    for (int i = 1; i <= 16; ++i) xs.push_back(i / 16.0);
    bool ok = true;
    double worst = 0.0;
    try {
      const auto est = cumulative(f.integrand(top), iv.lo, xs, tol);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double exact = oracle(xs[i]) - oracle(iv.lo);
        const double err = std::abs(est[i].value - exact);
        worst = std::max(worst, err);
        if (err > kCalibration * est[i].error_bound + 1e-12 * std::max(1.0, std::abs(exact))) ok = false;
      }
    } catch (const Error& e) {
      ok = false;
      std::cout << "  " << to_string(e.code()) << ": " << e.what() << "\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, " (max error %.3g)", worst);
    line(ok, "primitive " + label + buf);
  }
  std::cout << (failures == 0 ? "selftest passed" : "selftest failed") << "\n";
  return failures == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify Taylor remainder bounds under the Henstock-Kurzweil integral"};
  app.require_subcommand(1);

  VerifyOptions vo;
  CLI::App* verify = app.add_subcommand("verify", "Run a verification sweep and emit a report");
  verify->add_option("--config", vo.config_path, "JSON file mirroring the sweep configuration");
  verify->add_option("--function", vo.function, "Function label, e.g. poly:k=3");
  verify->add_option("--theorem", vo.theorems, "thm2, thm3 or thm4 (repeatable; default all)");
  verify->add_option("--n", vo.n_values, "Taylor degree (repeatable; default 1 2 3)");
  verify->add_option("--p", vo.p_values, "Lp exponent, 1 <= p <= inf (repeatable; default 1 2 inf)");
  verify->add_option("--alpha", vo.alpha_values, "Hoelder exponent for A2 (repeatable; default 1 2 inf)");
  verify->add_option("--x0", vo.x0, "Auxiliary point, a number or auto")->capture_default_str();
  verify->add_option("--interval", vo.interval, "Interval a,b with a < b")->capture_default_str();
  verify->add_option("--tol", vo.tol, "Absolute quadrature tolerance")->capture_default_str();
  verify->add_option("--seed", vo.seed, "Seed for pointwise sample points")->capture_default_str();
  verify->add_option("--x-samples", vo.x_samples, "Pointwise samples per cell family")->capture_default_str();
  verify->add_option("--out", vo.out, "Output file (default standard output)");
  verify->add_option("--format", vo.format, "json or csv (default json)");
  verify->add_option("--threads", vo.threads, "Worker threads")->capture_default_str();

  app.add_subcommand("list-functions", "List registered functions and the default corpus");

  std::uint64_t st_seed = 1;
  double st_tol = 1e-10;
  CLI::App* selftest = app.add_subcommand("selftest", "Check derivative chains and primitives of the corpus");
  selftest->add_option("--seed", st_seed, "Seed for sample points")->capture_default_str();
  selftest->add_option("--tol", st_tol, "Quadrature tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (verify->parsed()) return run_verify(vo, *verify);
    if (selftest->parsed()) return run_selftest(st_seed, st_tol);
    return run_list();
  } catch (const Error& e) {
    std::cerr << "hkt: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitConfig;
  }
}
