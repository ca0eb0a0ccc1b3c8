#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hktaylor/bounds.hpp"
#include "hktaylor/quadrature.hpp"

namespace hktaylor {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ReportFormat { json, csv };
ReportFormat parse_format(std::string_view s);
std::string_view to_string(ReportFormat f) noexcept;

struct SweepConfig {
  std::vector<std::string> function_labels;  // empty means the default corpus
  std::vector<std::string> theorems{"thm2", "thm3", "thm4"};
  std::vector<int> n_values{1, 2, 3};
  std::vector<double> p_values{1.0, 2.0, std::numeric_limits<double>::infinity()};
  std::vector<double> alpha_values{1.0, 2.0, std::numeric_limits<double>::infinity()};
  int x_samples = 4;
  Interval interval{0.0, 1.0};
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::optional<double> x0;  // unset means automatic selection
  std::string output_path;   // empty means standard output
  ReportFormat output_format = ReportFormat::json;
  /// Worker threads; reports do not depend on it.
  unsigned threads = 1;

  /// Throws Error(config_invalid) on any invalid field, including labels the
  /// registry cannot resolve.
  void validate() const;
  std::vector<std::string> labels() const;
};

struct Cell {
  std::string label;
  std::string function;
  BoundParams params;
  std::optional<Quantity> lhs;
  std::optional<Quantity> rhs;
  std::optional<double> slack;
  std::optional<Verdict> verdict;
  std::optional<std::string> reason;  // set exactly when the cell was skipped

  bool skipped() const noexcept { return reason.has_value(); }
  bool operator==(const Cell&) const = default;
};

struct Summary {
  std::size_t holds = 0;
  std::size_t holds_within_error = 0;
  std::size_t violated = 0;
  std::size_t skipped = 0;
  bool operator==(const Summary&) const = default;
};

struct Report {
  std::string version{kVersion};
  SweepConfig config;
  std::vector<Cell> cells;
  Summary summary;
};

Summary tally(const std::vector<Cell>& cells);

/// Evaluates every cell of the grid. Precondition failures and numerical
/// failures become skipped cells carrying the error's reason code.
Report run_sweep(const SweepConfig& cfg);

std::string emit_report(const Report& r, ReportFormat format);
/// Writes to cfg.output_path, or standard output when it is empty. Throws
/// Error(output_unwritable).
void write_report(const Report& r, const SweepConfig& cfg);

nlohmann::ordered_json config_to_json(const SweepConfig& cfg);
/// Reads a config; keys mirror the SweepConfig fields. Throws
/// Error(config_invalid).
SweepConfig config_from_json(const nlohmann::json& j);
SweepConfig load_config(const std::string& path);

Report parse_report_json(std::string_view text);

/// Compares everything a serialized report carries; the output path and thread
/// count are delivery settings and are not echoed.
bool operator==(const Report& a, const Report& b);

}  // namespace hktaylor
