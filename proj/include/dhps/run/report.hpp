#pragma once

// Run reports and their on-disk form: report.json, solutions.csv, tscan.csv
// and diagnostics.csv, each written to a temporary name and renamed.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dhps/dh/gamma.hpp"
#include "dhps/error.hpp"
#include "dhps/primes/table.hpp"

namespace dhps {

using ojson = nlohmann::ordered_json;

struct Diagnostic {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  /// How measured compares with threshold: "<", "<=", ">" or ">=".
  std::string relation = "<=";
  bool pass = false;
};

inline Diagnostic make_diagnostic(std::string name, double measured, std::string relation,
                                  double threshold) {
  bool pass = false;
  if (relation == "<=") pass = measured <= threshold;
  else if (relation == "<") pass = measured < threshold;
  else if (relation == ">=") pass = measured >= threshold;
  else if (relation == ">") pass = measured > threshold;
  else throw std::invalid_argument("make_diagnostic: unknown relation " + relation);
  return {std::move(name), measured, threshold, std::move(relation), pass};
}

enum class Region { A, B, C };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
  }
  return "?";
}

struct TScanPoint {
  double t = 0.0;
  cplx value;
  Region region = Region::A;
};

struct RunReport {
  DhParams params;
  GammaDecomposition decomposition;
  double radius = 0.0;
  std::vector<QuintetSolution> solutions;
  std::uint64_t solutions_found = 0;
  std::vector<Diagnostic> diagnostics;
  std::vector<TScanPoint> tscan;
};

struct ManifestEntry {
  std::string file;
  std::uintmax_t bytes = 0;
};

namespace detail {

/// JSON text with every floating-point number at 17 significant digits and
/// non-finite numbers as null.
inline void write_json(const ojson& v, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ojson(it.key()).dump() + ": ";
        write_json(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(v[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format17(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

inline ojson complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline ojson optional_json(const std::optional<double>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

inline std::string solution_value(long double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}

inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os << text;
    os.flush();
    if (!os) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace detail

inline std::string json_text(const ojson& v) {
  std::string out;
  detail::write_json(v, out, 0);
  out += '\n';
  return out;
}

inline ojson report_json(const RunReport& r) {
  using json = ojson;
  const auto& d = r.decomposition;
  json out = json::object();
  out["params"] = {{"q0", r.params.q0},
                   {"X", r.params.X},
                   {"Delta", r.params.Delta},
                   {"eps", r.params.eps},
                   {"H", r.params.H}};
  out["A"] = detail::complex_json(d.A);
  out["B"] = detail::complex_json(d.B);
  out["C_bound"] = d.C_bound;
  out["total"] = detail::complex_json(d.total);
  out["direct"] = detail::optional_json(d.direct);
  out["direct_count"] = d.direct_count ? json(*d.direct_count) : json(nullptr);
  out["rel_gap"] = detail::optional_json(d.rel_gap);
  out["quad_tolerance"] = d.quad_tolerance;
  out["smoothness"] = d.smoothness;
  out["radius"] = r.radius;
  out["solutions_found"] = r.solutions_found;
  json diags = json::array();
  for (const auto& g : r.diagnostics)
    diags.push_back({{"name", g.name},
                     {"measured", g.measured},
                     {"relation", g.relation},
                     {"threshold", g.threshold},
                     {"pass", g.pass}});
  out["diagnostics"] = diags;
  return out;
}

inline std::string solutions_csv(const std::vector<QuintetSolution>& sols) {
  std::ostringstream os;
  os << "p1,p2,p3,p4,p5,value,max_p,meets_theorem_radius\n";
  for (const auto& s : sols) {
    for (const auto p : s.p) os << p << ',';
    os << detail::solution_value(s.value) << ',' << s.max_p << ','
       << (s.meets_theorem_radius ? "true" : "false") << '\n';
  }
  return os.str();
}

inline std::string tscan_csv(const std::vector<TScanPoint>& rows) {
  std::ostringstream os;
  os << "t,re,im,abs,region\n";
  for (const auto& r : rows)
    os << format17(r.t) << ',' << format17(r.value.real()) << ','
       << format17(r.value.imag()) << ',' << format17(std::abs(r.value)) << ','
       << to_string(r.region) << '\n';
  return os.str();
}

inline std::string diagnostics_csv(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  os << "name,measured,relation,threshold,pass\n";
  for (const auto& g : diags)
    os << g.name << ',' << format17(g.measured) << ',' << g.relation << ','
       << format17(g.threshold) << ',' << (g.pass ? "true" : "false") << '\n';
  return os.str();
}

/// Writes the four report files into `dir` (created if needed) and lists
/// them with their sizes.
inline std::vector<ManifestEntry> emit_report(const RunReport& r,
                                              const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::pair<const char*, std::string> files[] = {
      {"report.json", json_text(report_json(r))},
      {"solutions.csv", solutions_csv(r.solutions)},
      {"tscan.csv", tscan_csv(r.tscan)},
      {"diagnostics.csv", diagnostics_csv(r.diagnostics)},
  };
  std::vector<ManifestEntry> manifest;
  for (const auto& [name, text] : files) {
    const auto path = dir / name;
    detail::write_atomic(path, text);
    manifest.push_back({name, std::filesystem::file_size(path)});
  }
  return manifest;
}

}  // namespace dhps
