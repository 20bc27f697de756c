// dhps: command-line front end.
//
//   dhps [--config f] [--out dir] [--threads n] [--seed n] [--q0-floor n]
//        [--radius r|theorem] <primes|kernel|sums|gamma|search|verify|report>
//
// Exit codes: 0 ok, 2 configuration error, 3 budget exceeded,
// 4 quadrature did not converge, 1 anything else.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dhps/dhps.hpp"

namespace {

using namespace dhps;

struct Common {
  std::string config_path;
  std::string out;
  unsigned threads = 0;
  std::int64_t seed = -1;
  std::int64_t q0_floor = -1;
  std::string radius;
};

RunConfig load_config(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) {
    std::ifstream is(c.config_path);
    if (!is) throw IoError("cannot read " + c.config_path);
    std::stringstream ss;
    ss << is.rdbuf();
    cfg = parse_config(ss.str());
  }
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed >= 0) cfg.seed = static_cast<std::uint64_t>(c.seed);
  if (c.q0_floor >= 0) {
    if (c.q0_floor < 1) throw SchemaError("--q0-floor", "expected a positive integer");
    cfg.q0_floor = static_cast<std::uint64_t>(c.q0_floor);
  }
  if (!c.radius.empty()) {
    if (c.radius == "theorem") {
      cfg.radius = Radius{};
    } else {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(c.radius, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != c.radius.size() || !(v > 0.0) || !std::isfinite(v))
        throw SchemaError("--radius", "expected a positive number or \"theorem\"");
      cfg.radius = Radius::of(v);
    }
  }
  check_admissible(cfg.instance);
  return cfg;
}

DhParams params_of(const RunConfig& cfg) {
  return cfg.x_max ? params_from_x(cfg.instance, *cfg.x_max)
                   : derive_params(cfg.instance, cfg.q0, cfg.q0_floor);
}

void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& text, ojson& manifest) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto path = dir / name;
  detail::write_atomic(path, text);
  manifest.push_back({{"file", name}, {"bytes", std::filesystem::file_size(path)}});
}

void print(const ojson& j) { std::cout << json_text(j); }

ojson manifest_json(const std::vector<ManifestEntry>& m) {
  ojson out = ojson::array();
  for (const auto& e : m) out.push_back({{"file", e.file}, {"bytes", e.bytes}});
  return out;
}

ojson params_json(const DhParams& p) {
  return {{"q0", p.q0}, {"X", p.X}, {"Delta", p.Delta}, {"eps", p.eps}, {"H", p.H}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prime quintuples near the zero set of a diagonal form"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--config", c.config_path, "JSON run configuration");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--threads", c.threads, "worker threads (0 = all cores)");
  app.add_option("--seed", c.seed, "seed for randomized diagnostics");
  app.add_option("--q0-floor", c.q0_floor, "least admissible q0");
  app.add_option("--radius", c.radius, "search radius, or \"theorem\"");

  auto* primes = app.add_subcommand("primes", "build and export the prime tables");
  std::string check_csv;
  primes->add_option("--check", check_csv, "validate an exported table instead");
  auto* kernel = app.add_subcommand("kernel", "tabulate theta and its transform");
  double k_eps = 0.0;
  int k_l = 0;
  std::size_t k_points = 201;
  kernel->add_option("--eps", k_eps, "kernel width (default: the run's eps)");
  kernel->add_option("--l", k_l, "smoothness (default: floor(log X))");
  kernel->add_option("--points", k_points, "samples per table")->check(CLI::Range(2, 1000000));
  auto* sums = app.add_subcommand("sums", "scan an exponential sum along t");
  std::string family = "S";
  double t_min = 0.0, t_max = -1.0;
  std::size_t s_points = 1024;
  sums->add_option("--family", family, "S, Sigma, U or I")
      ->check(CLI::IsMember({"S", "Sigma", "U", "I"}));
  sums->add_option("--t-min", t_min, "first t");
  sums->add_option("--t-max", t_max, "last t (default: H)");
  sums->add_option("--points", s_points, "grid points")->check(CLI::Range(2, 10000000));
  auto* gamma = app.add_subcommand("gamma", "Gamma directly and by the A/B/C split");
  auto* search = app.add_subcommand("search", "list quintuples inside the radius");
  auto* verify = app.add_subcommand("verify", "full run with every diagnostic");
  auto* report = app.add_subcommand("report", "full run with the basic diagnostics");
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    set_thread_count(c.threads);
    const RunConfig cfg = load_config(c);
    const ProblemInstance& inst = cfg.instance;
    const std::filesystem::path out_dir = cfg.output_dir;

    if (*primes) {
      const DhParams p = params_of(cfg);
      const QuintetTables t = build_quintet_tables(inst, p.X);
      if (!check_csv.empty()) {
        std::ifstream is(check_csv);
        if (!is) throw IoError("cannot read " + check_csv);
        const PrimeTable read = read_table_csv(is, t.squares);
        print({{"file", check_csv}, {"rows", read.size()}, {"valid", true}});
        return 0;
      }
      ojson manifest = ojson::array();
      std::ostringstream sq;
      write_table_csv(t.squares, sq);
      write_file(out_dir, "primes_k2.csv", sq.str(), manifest);
      if (inst.k != 2) {
        std::ostringstream top;
        write_table_csv(t.top, top);
        write_file(out_dir, "primes_k" + std::to_string(inst.k) + ".csv", top.str(), manifest);
      }
      print({{"params", params_json(p)}, {"files", manifest}});
    } else if (*kernel) {
      const DhParams p = params_of(cfg);
      const double eps = k_eps > 0.0 ? k_eps : p.eps;
      const SmoothingKernel kern(eps, k_l > 0 ? k_l : default_smoothness(p.X));
      std::ostringstream ys, xs;
      ys << "y,theta\n";
      xs << "x,Theta,bound\n";
      for (std::size_t i = 0; i < k_points; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(k_points - 1);
        const double y = (2.0 * u - 1.0) * 1.1 * eps;
        ys << format17(y) << ',' << format17(kern.value(y)) << '\n';
        const double x = 64.0 / eps * u;
        xs << format17(x) << ',' << format17(kern.transform(x)) << ','
           << format17(kern.transform_bound(x)) << '\n';
      }
      ojson manifest = ojson::array();
      write_file(out_dir, "kernel.csv", ys.str(), manifest);
      write_file(out_dir, "fourier.csv", xs.str(), manifest);
      print({{"eps", eps}, {"l", kern.smoothness()}, {"files", manifest}});
    } else if (*sums) {
      const DhParams p = params_of(cfg);
      SumSpec spec;
      spec.family = family == "S" ? SumFamily::S
                    : family == "Sigma" ? SumFamily::Sigma
                    : family == "U" ? SumFamily::U
                                    : SumFamily::I;
      spec.k = inst.k;
      spec.x_max = p.X;
      spec.lambda0 = inst.lambda0;
      if (spec.family == SumFamily::S) spec.gamma = inst.gamma;
      std::optional<PrimeTable> table;
      if (spec.family == SumFamily::S)
        table = build_table(inst.gamma, p.X, inst.lambda0, inst.k);
      else if (spec.family == SumFamily::Sigma)
        table = build_prime_window(p.X, inst.lambda0, inst.k);
      const double hi = t_max >= 0.0 ? t_max : p.H;
      if (!(hi > t_min)) throw SchemaError("--t-max", "must exceed --t-min");
      const auto grid = uniform_grid(t_min, hi, s_points);
      const auto rows = scan_sum(spec, grid, table ? &*table : nullptr);
      std::ostringstream os;
      write_scan_csv(rows, os);
      ojson manifest = ojson::array();
      write_file(out_dir, "scan.csv", os.str(), manifest);
      print({{"family", family}, {"points", rows.size()}, {"files", manifest}});
    } else if (*gamma) {
      const DhParams p = params_of(cfg);
      const QuintetTables t = build_quintet_tables(inst, p.X);
      const int l = cfg.smoothness > 0 ? cfg.smoothness : default_smoothness(p.X);
      const SmoothingKernel kern(p.eps, l);
      IntegralOptions iopts;
      iopts.grid = cfg.grid;
      iopts.max_nodes = cfg.budgets.max_nodes;
      GammaDecomposition d = gamma_integral(inst, p, kern, t, iopts);
      attach_direct(d, gamma_direct(inst, kern, t, cfg.budgets.max_evaluations,
                                    cfg.budgets.memory_mb));
      RunReport r;
      r.params = p;
      r.decomposition = d;
      ojson j = report_json(r);
      j.erase("radius");
      j.erase("solutions_found");
      j.erase("diagnostics");
      print(j);
    } else if (*search) {
      const DhParams p = params_of(cfg);
      const QuintetTables t = build_quintet_tables(inst, p.X);
      const double radius = cfg.radius.theorem ? theorem_radius(inst, t) : cfg.radius.value;
      SearchOptions sopts;
      sopts.limit = cfg.limit;
      sopts.memory_mb = cfg.budgets.memory_mb;
      const auto found = search_mitm(make_problem(inst, t), radius, sopts);
      ojson manifest = ojson::array();
      write_file(out_dir, "solutions.csv", solutions_csv(found.solutions), manifest);
      print({{"params", params_json(p)},
             {"radius", radius},
             {"solutions_found", found.found},
             {"solutions_listed", found.solutions.size()},
             {"files", manifest}});
    } else if (*verify || *report) {
      const RunReport r = run_pipeline(cfg, *verify ? RunMode::verify : RunMode::report);
      const auto manifest = emit_report(r, out_dir);
      std::size_t failed = 0;
      for (const auto& g : r.diagnostics) failed += g.pass ? 0 : 1;
      print({{"files", manifest_json(manifest)},
             {"diagnostics", r.diagnostics.size()},
             {"failed", failed}});
    }
    return 0;
  } catch (const SchemaError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const AdmissibilityError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateRatio& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const CapacityExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const NonConvergence& e) {
    std::cerr << "quadrature did not converge: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
