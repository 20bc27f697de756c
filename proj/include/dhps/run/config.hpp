#pragma once

// JSON run configuration. Unknown keys are rejected; every error names the
// offending field as a JSON pointer.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "dhps/dh/params.hpp"
#include "dhps/error.hpp"

namespace dhps {

struct Budgets {
  std::size_t memory_mb = 2048;
  int max_nodes = 1024;
  double time_s = 3600.0;
  /// Partial sums allowed for the direct evaluation of Gamma.
  double max_evaluations = 1e9;

  friend bool operator==(const Budgets&, const Budgets&) = default;
};

/// The search radius: a number, or the existence statement's own radius.
struct Radius {
  bool theorem = true;
  double value = 0.0;

  static Radius of(double v) { return {false, v}; }
  friend bool operator==(const Radius&, const Radius&) = default;
};

struct RunConfig {
  ProblemInstance instance;
  std::uint64_t q0_floor = 2;
  /// Fixes q0 instead of taking it from the convergents.
  std::optional<std::uint64_t> q0;
  /// Uses X directly instead of q0^(58/27).
  std::optional<double> x_max;
  Radius radius;
  Budgets budgets;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  /// Kernel smoothness l; 0 selects floor(log X).
  int smoothness = 0;
  std::size_t limit = 100;
  std::size_t grid = 512;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& where,
                           std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw SchemaError(where + "/" + it.key(), "unknown key");
  }
}

inline double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
  return d;
}

inline std::int64_t get_int(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 0x1p53)
      return static_cast<std::int64_t>(d);
  }
  throw SchemaError(path, "expected an integer");
}

inline std::uint64_t get_positive(const json& v, const std::string& path) {
  const std::int64_t n = get_int(v, path);
  if (n < 1) throw SchemaError(path, "expected a positive integer");
  return static_cast<std::uint64_t>(n);
}

inline double get_positive_number(const json& v, const std::string& path) {
  const double d = get_number(v, path);
  if (!(d > 0.0)) throw SchemaError(path, "expected a positive number");
  return d;
}

}  // namespace detail

/// Parses and validates a configuration document. The instance must satisfy
/// check_admissible.
inline RunConfig parse_config(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected a JSON object");
  detail::reject_unknown(doc, "", {"lambdas", "eta", "k", "gamma", "theta", "lambda0",
                                   "q0_floor", "q0", "x_max", "radius", "budgets",
                                   "output_dir", "seed", "smoothness", "limit", "grid"});
  for (const char* key : {"lambdas", "eta", "k", "gamma", "theta"})
    if (!doc.contains(key)) throw SchemaError(std::string("/") + key, "required key missing");

  RunConfig cfg;
  ProblemInstance& inst = cfg.instance;
  const json& lam = doc["lambdas"];
  if (!lam.is_array() || lam.size() != 5)
    throw SchemaError("/lambdas", "expected an array of 5 numbers");
  for (std::size_t j = 0; j < 5; ++j)
    inst.lambdas[j] = detail::get_number(lam[j], "/lambdas/" + std::to_string(j));
  inst.eta = detail::get_number(doc["eta"], "/eta");
  inst.k = static_cast<int>(detail::get_int(doc["k"], "/k"));
  if (inst.k < 2 || inst.k > 4) throw SchemaError("/k", "expected 2, 3 or 4");
  const double g = detail::get_number(doc["gamma"], "/gamma");
  if (!(g > 0.0 && g < 1.0)) throw SchemaError("/gamma", "expected a number in (0, 1)");
  inst.gamma = GammaParam(g);
  inst.theta = detail::get_positive_number(doc["theta"], "/theta");
  if (doc.contains("lambda0")) {
    inst.lambda0 = detail::get_number(doc["lambda0"], "/lambda0");
    if (!(inst.lambda0 > 0.0 && inst.lambda0 < 1.0))
      throw SchemaError("/lambda0", "expected a number in (0, 1)");
  }
  if (doc.contains("q0_floor")) cfg.q0_floor = detail::get_positive(doc["q0_floor"], "/q0_floor");
  if (doc.contains("q0")) {
    cfg.q0 = detail::get_positive(doc["q0"], "/q0");
    if (*cfg.q0 < 2) throw SchemaError("/q0", "expected an integer >= 2");
  }
  if (doc.contains("x_max")) {
    cfg.x_max = detail::get_number(doc["x_max"], "/x_max");
    if (!(*cfg.x_max > 1.0) || *cfg.x_max > 0x1p62)
      throw SchemaError("/x_max", "expected a number in (1, 2^62]");
  }
  if (doc.contains("radius")) {
    const json& r = doc["radius"];
    if (r.is_string()) {
      if (r.get<std::string>() != "theorem")
        throw SchemaError("/radius", "expected a positive number or \"theorem\"");
      cfg.radius = Radius{};
    } else {
      cfg.radius = Radius::of(detail::get_positive_number(r, "/radius"));
    }
  }
  if (doc.contains("budgets")) {
    const json& b = doc["budgets"];
    if (!b.is_object()) throw SchemaError("/budgets", "expected an object");
    detail::reject_unknown(b, "/budgets", {"memory_mb", "max_nodes", "time_s", "max_evaluations"});
    if (b.contains("memory_mb"))
      cfg.budgets.memory_mb = detail::get_positive(b["memory_mb"], "/budgets/memory_mb");
    if (b.contains("max_nodes")) {
      const auto n = detail::get_positive(b["max_nodes"], "/budgets/max_nodes");
      if (n < 16 || n > (1u << 20))
        throw SchemaError("/budgets/max_nodes", "expected an integer in [16, 2^20]");
      cfg.budgets.max_nodes = static_cast<int>(n);
    }
    if (b.contains("time_s"))
      cfg.budgets.time_s = detail::get_positive_number(b["time_s"], "/budgets/time_s");
    if (b.contains("max_evaluations"))
      cfg.budgets.max_evaluations =
          detail::get_positive_number(b["max_evaluations"], "/budgets/max_evaluations");
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty())
      throw SchemaError("/output_dir", "expected a non-empty string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("seed")) {
    const std::int64_t s = detail::get_int(doc["seed"], "/seed");
    if (s < 0) throw SchemaError("/seed", "expected a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("smoothness")) {
    const std::int64_t l = detail::get_int(doc["smoothness"], "/smoothness");
    if (l < 0 || l > 64) throw SchemaError("/smoothness", "expected an integer in [0, 64]");
    cfg.smoothness = static_cast<int>(l);
  }
  if (doc.contains("limit")) cfg.limit = detail::get_positive(doc["limit"], "/limit");
  if (doc.contains("grid")) {
    cfg.grid = detail::get_positive(doc["grid"], "/grid");
    if (cfg.grid < 512) throw SchemaError("/grid", "expected an integer >= 512");
  }
  check_admissible(inst);
  return cfg;
}

/// The document parse_config maps back to `cfg`, with every field explicit.
inline std::string serialize_config(const RunConfig& cfg) {
  using detail::json;
  json doc = json::object();
  const ProblemInstance& inst = cfg.instance;
  doc["lambdas"] = json::array();
  for (const double l : inst.lambdas) doc["lambdas"].push_back(l);
  doc["eta"] = inst.eta;
  doc["k"] = inst.k;
  doc["gamma"] = inst.gamma.value();
  doc["theta"] = inst.theta;
  doc["lambda0"] = inst.lambda0;
  doc["q0_floor"] = cfg.q0_floor;
  if (cfg.q0) doc["q0"] = *cfg.q0;
  if (cfg.x_max) doc["x_max"] = *cfg.x_max;
  if (cfg.radius.theorem)
    doc["radius"] = "theorem";
  else
    doc["radius"] = cfg.radius.value;
  doc["budgets"] = {{"memory_mb", cfg.budgets.memory_mb},
                    {"max_nodes", cfg.budgets.max_nodes},
                    {"time_s", cfg.budgets.time_s},
                    {"max_evaluations", cfg.budgets.max_evaluations}};
  doc["output_dir"] = cfg.output_dir;
  doc["seed"] = cfg.seed;
  doc["smoothness"] = cfg.smoothness;
  doc["limit"] = cfg.limit;
  doc["grid"] = cfg.grid;
  return doc.dump(2);
}

}  // namespace dhps
