#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "hktaylor/error.hpp"
#include "hktaylor/sweep.hpp"

namespace hktaylor {
namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::config_invalid, what); }

// JSON has no infinities; they travel as strings.
ojson number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ojson optional_number(const std::optional<double>& v) { return v ? number(*v) : ojson(nullptr); }

double read_number(const nlohmann::json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "∞") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  invalid(what + " must be a number or \"inf\"");
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return read_number(j.at(key), what + "." + key);
}

ojson quantity(const std::optional<Quantity>& q) {
  if (!q) return nullptr;
  ojson o;
  o["value"] = number(q->value);
  o["err"] = number(q->error);
  return o;
}

std::optional<Quantity> read_quantity(const nlohmann::json& j, const std::string& what) {
  if (j.is_null()) return std::nullopt;
  return Quantity{read_number(j.at("value"), what + ".value"), read_number(j.at("err"), what + ".err")};
}

std::optional<Verdict> read_verdict(const std::string& s) {
  if (s == "holds") return Verdict::holds;
  if (s == "holds_within_error") return Verdict::holds_within_error;
  if (s == "violated") return Verdict::violated;
  if (s == "skipped") return std::nullopt;
  invalid("unknown verdict '" + s + "'");
}

std::string verdict_text(const Cell& c) { return c.verdict ? std::string(to_string(*c.verdict)) : "skipped"; }

ojson cell_json(const Cell& c) {
  ojson o;
  o["label"] = c.label;
  o["function"] = c.function;
  ojson params;
  params["n"] = c.params.n;
  params["p"] = optional_number(c.params.p);
  params["alpha"] = optional_number(c.params.alpha);
  params["x0"] = optional_number(c.params.x0);
  params["x"] = optional_number(c.params.x);
  o["params"] = std::move(params);
  o["lhs"] = quantity(c.lhs);
  o["rhs"] = quantity(c.rhs);
  o["slack"] = optional_number(c.slack);
  o["verdict"] = verdict_text(c);
  if (c.reason) o["reason"] = *c.reason;
  return o;
}

Cell read_cell(const nlohmann::json& j) {
  Cell c;
  c.label = j.at("label").get<std::string>();
  c.function = j.at("function").get<std::string>();
  const auto& params = j.at("params");
  c.params.n = params.at("n").get<int>();
  c.params.p = read_optional(params, "p", "params");
  c.params.alpha = read_optional(params, "alpha", "params");
  c.params.x0 = read_optional(params, "x0", "params");
  c.params.x = read_optional(params, "x", "params");
  c.lhs = read_quantity(j.at("lhs"), "lhs");
  c.rhs = read_quantity(j.at("rhs"), "rhs");
  c.slack = read_optional(j, "slack", "cell");
  c.verdict = read_verdict(j.at("verdict").get<std::string>());
  if (j.contains("reason")) c.reason = j.at("reason").get<std::string>();
  return c;
}

// %.17g round-trips every double.
std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  if (std::isnan(*v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string emit_csv(const Report& r) {
  std::ostringstream os;
  os << "function,label,n,p,alpha,x0,x,lhs,lhs_err,rhs,rhs_err,slack,verdict,reason\n";
  for (const Cell& c : r.cells) {
    auto part = [](const std::optional<Quantity>& q, bool err) -> std::optional<double> {
      if (!q) return std::nullopt;
      return err ? q->error : q->value;
    };
    os << csv_field(c.function) << ',' << csv_field(c.label) << ',' << c.params.n << ',' << csv_number(c.params.p)
       << ',' << csv_number(c.params.alpha) << ',' << csv_number(c.params.x0) << ',' << csv_number(c.params.x) << ','
       << csv_number(part(c.lhs, false)) << ',' << csv_number(part(c.lhs, true)) << ','
       << csv_number(part(c.rhs, false)) << ',' << csv_number(part(c.rhs, true)) << ',' << csv_number(c.slack)
       << ',' << verdict_text(c) << ',' << csv_field(c.reason.value_or("")) << '\n';
  }
  return os.str();
}

template <class T>
T read_field(const nlohmann::json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    invalid(std::string("config key '") + key + "' has the wrong type");
  }
}

std::vector<double> read_reals(const nlohmann::json& j, const char* key, const std::vector<double>& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_array()) invalid(std::string("config key '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) out.push_back(read_number(v, key));
  return out;
}

}  // namespace

ojson config_to_json(const SweepConfig& cfg) {
  ojson o;
  o["function_labels"] = cfg.labels();
  o["theorems"] = cfg.theorems;
  o["n_values"] = cfg.n_values;
  ojson ps = ojson::array();
  for (double p : cfg.p_values) ps.push_back(number(p));
  o["p_values"] = std::move(ps);
  ojson as = ojson::array();
  for (double a : cfg.alpha_values) as.push_back(number(a));
  o["alpha_values"] = std::move(as);
  o["x_samples"] = cfg.x_samples;
  o["interval"] = {number(cfg.interval.lo), number(cfg.interval.hi)};
  o["tol"] = number(cfg.tol);
  o["seed"] = cfg.seed;
  o["x0"] = cfg.x0 ? number(*cfg.x0) : ojson("auto");
  o["output_format"] = std::string(to_string(cfg.output_format));
  return o;
}

SweepConfig config_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known{"function_labels", "theorems", "n_values", "p_values", "alpha_values",
                                              "x_samples", "interval", "tol", "seed", "x0", "output_path",
                                              "output_format", "threads"};
  if (!j.is_object()) invalid("config must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      invalid("unknown config key '" + item.key() + "'");
    }
  }
  SweepConfig cfg;
  cfg.function_labels = read_field(j, "function_labels", cfg.function_labels);
  cfg.theorems = read_field(j, "theorems", cfg.theorems);
  cfg.n_values = read_field(j, "n_values", cfg.n_values);
  cfg.p_values = read_reals(j, "p_values", cfg.p_values);
  cfg.alpha_values = read_reals(j, "alpha_values", cfg.alpha_values);
  cfg.x_samples = read_field(j, "x_samples", cfg.x_samples);
  if (j.contains("interval")) {
    const std::vector<double> iv = read_reals(j, "interval", {});
    if (iv.size() != 2) invalid("interval must be [a, b]");
    cfg.interval = Interval{iv[0], iv[1]};
  }
  if (j.contains("tol")) cfg.tol = read_number(j.at("tol"), "tol");
  cfg.seed = read_field(j, "seed", cfg.seed);
  if (j.contains("x0") && !(j.at("x0").is_string() && j.at("x0").get<std::string>() == "auto")) {
    cfg.x0 = read_number(j.at("x0"), "x0");
  }
  cfg.output_path = read_field(j, "output_path", cfg.output_path);
  if (j.contains("output_format")) cfg.output_format = parse_format(read_field<std::string>(j, "output_format", ""));
  cfg.threads = read_field(j, "threads", cfg.threads);
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    invalid("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::string emit_report(const Report& r, ReportFormat format) {
  if (format == ReportFormat::csv) return emit_csv(r);
  ojson o;
  o["version"] = r.version;
  o["config"] = config_to_json(r.config);
  o["cells"] = ojson::array();
  for (const Cell& c : r.cells) o["cells"].push_back(cell_json(c));
  ojson s;
  s["holds"] = r.summary.holds;
  s["holds_within_error"] = r.summary.holds_within_error;
  s["violated"] = r.summary.violated;
  s["skipped"] = r.summary.skipped;
  o["summary"] = std::move(s);
  return o.dump(2) + "\n";
}

void write_report(const Report& r, const SweepConfig& cfg) {
  const std::string text = emit_report(r, cfg.output_format);
  if (cfg.output_path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::output_unwritable, "cannot write to standard output");
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::output_unwritable, "cannot write '" + cfg.output_path + "'");
}

Report parse_report_json(std::string_view text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    Report r;
    r.version = j.at("version").get<std::string>();
    r.config = config_from_json(j.at("config"));
    for (const auto& c : j.at("cells")) r.cells.push_back(read_cell(c));
    const auto& s = j.at("summary");
    r.summary.holds = s.at("holds").get<std::size_t>();
    r.summary.holds_within_error = s.at("holds_within_error").get<std::size_t>();
    r.summary.violated = s.at("violated").get<std::size_t>();
    r.summary.skipped = s.at("skipped").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed report: ") + e.what());
  }
}

bool operator==(const Report& a, const Report& b) {
  return a.version == b.version && config_to_json(a.config) == config_to_json(b.config) && a.cells == b.cells &&
         a.summary == b.summary;
}

}  // namespace hktaylor
