#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "hktaylor/error.hpp"
#include "hktaylor/sweep.hpp"

using namespace hktaylor;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::evaluation_failure;
}

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.function_labels = {"poly:k=3", "kink", "sin"};
  cfg.n_values = {1, 2};
  cfg.p_values = {1.0, kInf};
  cfg.alpha_values = {2.0};
  cfg.x_samples = 2;
  cfg.tol = 1e-10;
  cfg.seed = 42;
  return cfg;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Sweep, EmptyTheoremSetGivesEmptyReport) {
  SweepConfig cfg = small_config();
  cfg.theorems.clear();
  const Report r = run_sweep(cfg);
  EXPECT_TRUE(r.cells.empty());
  EXPECT_EQ(r.summary, Summary{});
  const std::string json = emit_report(r, ReportFormat::json);
  EXPECT_NE(json.find("\"cells\": []"), std::string::npos);
  EXPECT_EQ(count_lines(emit_report(r, ReportFormat::csv)), 1U);
}

TEST(Sweep, CubeThm3CellsMatchTheBoundValues) {
  SweepConfig cfg;
  cfg.function_labels = {"poly:k=3"};
  cfg.theorems = {"thm3"};
  cfg.n_values = {2};
  cfg.p_values = {1.0, kInf};
  cfg.x_samples = 0;
  cfg.tol = 1e-12;
  const Report r = run_sweep(cfg);
  ASSERT_FALSE(r.cells.empty());
  for (const Cell& c : r.cells) {
    ASSERT_FALSE(c.skipped()) << c.label << ": " << *c.reason;
    EXPECT_NE(*c.verdict, Verdict::violated) << c.label;
  }
  const Cell& first = r.cells.front();
  EXPECT_EQ(first.label, "thm3.alexiewicz");
  EXPECT_NEAR(first.lhs->value, 0.25, 1e-10);
  EXPECT_NEAR(first.rhs->value, 1.0, 1e-10);
  const auto sup = std::find_if(r.cells.begin(), r.cells.end(),
                                [](const Cell& c) { return c.label == "thm3.lp" && c.params.p == kInf; });
  ASSERT_NE(sup, r.cells.end());
  EXPECT_NEAR(sup->lhs->value, 1.0, 1e-10);
  EXPECT_NEAR(sup->rhs->value, 3.0, 1e-10);
}

TEST(Sweep, BumpCaseIThm3AtTwoIsSkippedForMissingBaseDerivative) {
  SweepConfig cfg;
  cfg.function_labels = {"bump:alpha=5.5,beta=2,c=0.05"};
  cfg.theorems = {"thm3"};
  cfg.n_values = {2};
  const Report r = run_sweep(cfg);
  ASSERT_FALSE(r.cells.empty());
  for (const Cell& c : r.cells) {
    ASSERT_TRUE(c.skipped()) << c.label;
    EXPECT_EQ(*c.reason, "derivative-missing-at-base") << c.label;
    EXPECT_FALSE(c.lhs.has_value());
  }
  EXPECT_EQ(r.summary.skipped, r.cells.size());
}

TEST(Sweep, SkipReasonsComeFromTheClosedEnumeration) {
  SweepConfig cfg = small_config();
  cfg.function_labels = {"kink", "hkosc", "weier"};
  cfg.n_values = {1, 2, 3};
  const Report r = run_sweep(cfg);
  std::vector<std::string> known;
  for (int code = 0; code <= static_cast<int>(ErrorCode::output_unwritable); ++code) {
    known.emplace_back(to_string(static_cast<ErrorCode>(code)));
  }
  std::size_t skipped = 0;
  for (const Cell& c : r.cells) {
    if (!c.skipped()) continue;
    ++skipped;
    EXPECT_NE(std::find(known.begin(), known.end(), *c.reason), known.end()) << *c.reason;
  }
  EXPECT_GT(skipped, 0U);
  EXPECT_EQ(r.summary.violated, 0U);
}

TEST(Sweep, SummaryEqualsCellTallies) {
  const Report r = run_sweep(small_config());
  EXPECT_EQ(r.summary, tally(r.cells));
  EXPECT_EQ(r.summary.holds + r.summary.holds_within_error + r.summary.violated + r.summary.skipped, r.cells.size());
}

TEST(Sweep, ByteIdenticalAcrossRunsAndThreadCounts) {
  SweepConfig cfg = small_config();
  const std::string a = emit_report(run_sweep(cfg), ReportFormat::json);
  const std::string b = emit_report(run_sweep(cfg), ReportFormat::json);
  cfg.threads = 3;
  const std::string c = emit_report(run_sweep(cfg), ReportFormat::json);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(emit_report(run_sweep(cfg), ReportFormat::csv), emit_report(run_sweep(small_config()), ReportFormat::csv));
}

TEST(Sweep, SeedMovesThePointwiseSamples) {
  SweepConfig cfg = small_config();
  cfg.theorems = {"thm3"};
  const Report a = run_sweep(cfg);
  cfg.seed = 43;
  const Report b = run_sweep(cfg);
  auto first_x = [](const Report& r) {
    for (const Cell& c : r.cells) {
      if (c.params.x) return *c.params.x;
    }
    return -1.0;
  };
  EXPECT_NE(first_x(a), first_x(b));
}

TEST(Report, JsonRoundTrip) {
  const Report r = run_sweep(small_config());
  const std::string json = emit_report(r, ReportFormat::json);
  const Report back = parse_report_json(json);
  EXPECT_TRUE(back == r);
  EXPECT_EQ(emit_report(back, ReportFormat::json), json);
}

TEST(Report, SingleCellRoundTripIncludingSkipAndInfinity) {
  Report r;
  Cell c;
  c.label = "thm3.lp";
  c.function = "bump:alpha=5.5,beta=2,c=0.05";
  c.params.n = 2;
  c.params.p = kInf;
  c.reason = "derivative-missing-at-base";
  r.cells.push_back(c);
  Cell d;
  d.label = "thm2.pointwise";
  d.function = "exp";
  d.params.n = 1;
  d.params.x0 = 0.5;
  d.params.x = 0.1 + 0.2;
  d.lhs = Quantity{1.0 / 3.0, 1e-17};
  d.rhs = Quantity{2.0 / 3.0, 0.0};
  d.slack = 1.0 / 3.0;
  d.verdict = Verdict::holds;
  r.cells.push_back(d);
  r.summary = tally(r.cells);
  const Report back = parse_report_json(emit_report(r, ReportFormat::json));
  EXPECT_TRUE(back == r);
  ASSERT_EQ(back.cells.size(), 2U);
  EXPECT_EQ(back.cells[0].params.p, kInf);
  EXPECT_EQ(back.cells[1].params.x, 0.1 + 0.2);
}

TEST(Report, MalformedJsonIsAParseError) {
  EXPECT_EQ(code_of([] { (void)parse_report_json("{\"version\": 1"); }), ErrorCode::parse_error);
}

TEST(Report, CsvHasOneRowPerCellAndQuotesLabels) {
  const Report r = run_sweep(small_config());
  const std::string csv = emit_report(r, ReportFormat::csv);
  EXPECT_EQ(count_lines(csv), r.cells.size() + 1);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "function,label,n,p,alpha,x0,x,lhs,lhs_err,rhs,rhs_err,slack,verdict,reason");

  Report q;
  Cell c;
  c.label = "thm4.alexiewicz";
  c.function = "bump:alpha=4,beta=2,c=0.05";
  c.params.n = 3;
  c.reason = "order-unavailable";
  q.cells.push_back(c);
  const std::string row = emit_report(q, ReportFormat::csv);
  EXPECT_NE(row.find("\"bump:alpha=4,beta=2,c=0.05\",thm4.alexiewicz,3,,,,,,,,,,skipped,order-unavailable"),
            std::string::npos);
}

TEST(Config, ValidationErrors) {
  auto bad = [](const char* text) {
    return code_of([&] { (void)config_from_json(nlohmann::json::parse(text)); });
  };
  EXPECT_EQ(bad(R"({"nonsense": 1})"), ErrorCode::config_invalid);
  EXPECT_EQ(bad(R"({"theorems": ["thm5"]})"), ErrorCode::config_invalid);
  EXPECT_EQ(bad(R"({"tol": 0})"), ErrorCode::config_invalid);
  EXPECT_EQ(bad(R"({"p_values": [0.5]})"), ErrorCode::config_invalid);
  EXPECT_EQ(bad(R"({"function_labels": ["nosuch"]})"), ErrorCode::config_invalid);
  EXPECT_EQ(bad(R"({"interval": [1, 0]})"), ErrorCode::config_invalid);
  EXPECT_EQ(bad(R"({"x0": 2, "interval": [0, 1]})"), ErrorCode::config_invalid);
  EXPECT_EQ(bad(R"({"output_format": "xml"})"), ErrorCode::config_invalid);
  EXPECT_EQ(bad(R"({"n_values": "three"})"), ErrorCode::config_invalid);
  EXPECT_EQ(code_of([] { (void)load_config("/nonexistent/config.json"); }), ErrorCode::config_invalid);
}

TEST(Config, ReadsEveryField) {
  const SweepConfig cfg = config_from_json(nlohmann::json::parse(R"({
    "function_labels": ["exp"], "theorems": ["thm2"], "n_values": [2], "p_values": [1, "inf"],
    "alpha_values": ["inf"], "x_samples": 3, "interval": [0, 2], "tol": 1e-8, "seed": 5, "x0": 0.25,
    "output_path": "out.csv", "output_format": "csv", "threads": 2})"));
  EXPECT_EQ(cfg.function_labels, std::vector<std::string>{"exp"});
  EXPECT_EQ(cfg.p_values.back(), kInf);
  EXPECT_EQ(cfg.alpha_values.front(), kInf);
  EXPECT_EQ(cfg.interval, (Interval{0.0, 2.0}));
  EXPECT_EQ(cfg.x0, 0.25);
  EXPECT_EQ(cfg.output_format, ReportFormat::csv);
  EXPECT_EQ(cfg.threads, 2U);
  const SweepConfig defaults = config_from_json(nlohmann::json::object());
  EXPECT_FALSE(defaults.x0.has_value());
  EXPECT_EQ(defaults.labels().size(), 15U);
}

TEST(Config, FixedX0IsUsedByThm2Cells) {
  SweepConfig cfg = small_config();
  cfg.theorems = {"thm2"};
  cfg.x0 = 0.25;
  for (const Cell& c : run_sweep(cfg).cells) EXPECT_EQ(c.params.x0, 0.25) << c.label;
}

TEST(Output, UnwritablePathIsReported) {
  SweepConfig cfg = small_config();
  cfg.theorems.clear();
  cfg.output_path = "/nonexistent-dir/report.json";
  const Report r = run_sweep(cfg);
  EXPECT_EQ(code_of([&] { write_report(r, cfg); }), ErrorCode::output_unwritable);
}

TEST(Output, WritesTheEmittedBytes) {
  SweepConfig cfg = small_config();
  cfg.theorems = {"thm4"};
  cfg.output_path = ::testing::TempDir() + "hkt_report.csv";
  cfg.output_format = ReportFormat::csv;
  const Report r = run_sweep(cfg);
  write_report(r, cfg);
  std::ifstream in(cfg.output_path, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, emit_report(r, ReportFormat::csv));
  std::remove(cfg.output_path.c_str());
}
