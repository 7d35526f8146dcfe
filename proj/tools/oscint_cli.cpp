// oscint command-line front end. Talks to the library only through oscint.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "oscint.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSoftFail = 2;

struct CliError {
  std::string message;
};

struct CString {
  char* p = nullptr;
  ~CString() { oscint_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct PhaseHandle {
  oscint_phase* p = nullptr;
  ~PhaseHandle() { oscint_phase_free(p); }
};

void check(oscint_status st) {
  if (st != OSCINT_OK) throw CliError{oscint_last_error()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{"cannot write " + path};
  out << text;
}

struct PhaseSource {
  std::string file, expr, example;
  int nx = -1, nz = -1;

  void add_to(CLI::App* app) {
    app->add_option("--phase", file, "Phase JSON file");
    app->add_option("--expr", expr, "Phase expression, e.g. \"x1^2*z1 + x1*z1^2\"");
    app->add_option("--example", example, "Built-in example name (see `oscint examples`)");
    app->add_option("--nx", nx, "Number of x variables for --expr (default: inferred)");
    app->add_option("--nz", nz, "Number of z variables for --expr (default: inferred)");
  }

  void load(PhaseHandle& h) const {
    const int given = !file.empty() + !expr.empty() + !example.empty();
    if (given != 1) throw CliError{"give exactly one of --phase, --expr, --example"};
    if (!file.empty()) check(oscint_phase_from_json(read_file(file).c_str(), &h.p));
    if (!expr.empty()) check(oscint_phase_from_expr(expr.c_str(), nx, nz, &h.p));
    if (!example.empty()) check(oscint_phase_example(example.c_str(), &h.p));
  }
};

struct CheckFlags {
  int grid_points = 10000;
  bool certify = false;
  double cell_tol = 1e-6;
  long long max_cells = 2000000;

  void add_to(CLI::App* app) {
    app->add_option("--grid-points", grid_points, "Sample points on the unit cube surface")
        ->check(CLI::PositiveNumber);
    app->add_flag("--certify", certify, "Certify sampled conditions by interval branch-and-bound");
    app->add_option("--cell-tol", cell_tol, "Smallest cell width before reporting a witness");
    app->add_option("--max-cells", max_cells, "Cell budget for certification");
  }
  json to_json() const {
    return {{"grid_points", grid_points}, {"certify", certify}, {"cell_tol", cell_tol}, {"max_cells", max_cells}};
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillatory integral operators with homogeneous polynomial phases"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  app.add_option("-o,--out", out_path, "Output file (default: stdout)");

  PhaseSource src;
  CheckFlags cf;

  auto* c_check = app.add_subcommand("check", "Structural hypotheses of a phase");
  src.add_to(c_check);
  cf.add_to(c_check);

  auto* c_newton = app.add_subcommand("newton", "Newton distance and modified Newton distance");
  src.add_to(c_newton);
  bool modified = false;
  int samples = 200;
  std::uint64_t seed = 7;
  int threads = 0;
  c_newton->add_flag("--modified", modified, "Search over linear changes of x and z");
  c_newton->add_option("--samples", samples, "Random transforms to try")->check(CLI::PositiveNumber);
  c_newton->add_option("--seed", seed, "Random seed");
  c_newton->add_option("--threads", threads, "Worker threads (0: all cores)");

  auto* c_predict = app.add_subcommand("predict", "Predicted decay rate of the operator norm");
  src.add_to(c_predict);
  cf.add_to(c_predict);

  auto* c_pencil = app.add_subcommand("pencil", "Rate and modified Newton distance of a pencil");
  std::string phi1, phi2;
  c_pencil->add_option("--phi1", phi1, "First binary form")->required();
  c_pencil->add_option("--phi2", phi2, "Second binary form")->required();

  auto* c_sweep = app.add_subcommand("sweep", "Estimate the norm over a lambda sweep and fit the slope");
  src.add_to(c_sweep);
  double lam_min = 50, lam_max = 800, tol = 1e-6, box = 1.0, drop = 0.25;
  int points = 8, n_min = 32, n_max = 0, max_iter = 500;
  long long max_entries = 300000000;
  std::string grid = "auto", amplitude = "bump", method = "lanczos", json_path, plot_path;
  std::uint64_t sweep_seed = 1;
  bool no_refine = false, witness = false, strict = false;
  c_sweep->add_option("--lambda-min", lam_min, "Smallest lambda")->check(CLI::PositiveNumber);
  c_sweep->add_option("--lambda-max", lam_max, "Largest lambda")->check(CLI::PositiveNumber);
  c_sweep->add_option("--points", points, "Number of geometric lambda values")->check(CLI::Range(4, 1000));
  c_sweep->add_option("--grid", grid, "\"auto\" or a fixed grid size per axis");
  c_sweep->add_option("--n-min", n_min, "Smallest automatic grid size");
  c_sweep->add_option("--n-max", n_max, "Largest automatic grid size (0: bounded by --max-entries)");
  c_sweep->add_option("--max-entries", max_entries, "Cap on kernel entries per operator");
  c_sweep->add_option("--tol", tol, "Relative tolerance on the squared norm");
  c_sweep->add_option("--max-iter", max_iter, "Limit on applications of M*M");
  c_sweep->add_option("--method", method, "lanczos or power")->check(CLI::IsMember({"lanczos", "power"}));
  c_sweep->add_option("--seed", sweep_seed, "Seed of the power iteration start vector");
  c_sweep->add_option("--threads", threads, "Worker threads (0: all cores)");
  c_sweep->add_option("--box", box, "Half-width of the amplitude box on every axis");
  c_sweep->add_option("--amplitude", amplitude, "bump or constant")->check(CLI::IsMember({"bump", "constant"}));
  c_sweep->add_option("--drop", drop, "Fraction of smallest lambdas left out of the fit");
  c_sweep->add_flag("--no-refine", no_refine, "Skip the coarse-grid agreement check");
  c_sweep->add_flag("--witness", witness, "Also evaluate the lower-bound witness per lambda");
  c_sweep->add_option("--json", json_path, "Write the full JSON report here");
  c_sweep->add_option("--plot", plot_path, "Write (log lambda, log norm) plot data here");
  c_sweep->add_flag("--strict", strict, "Exit with status 2 if any lambda is unresolved");

  auto* c_fit = app.add_subcommand("fit", "Fit the log-log slope of a sweep CSV");
  std::string in_path;
  double fit_drop = 0.25;
  c_fit->add_option("--in", in_path, "Sweep CSV")->required();
  c_fit->add_option("--drop", fit_drop, "Fraction of smallest lambdas left out of the fit");

  auto* c_gen = app.add_subcommand("genericity", "Pass fractions over random phases");
  int g_nx = 2, g_nz = 2, g_m = 3, trials = 100;
  std::uint64_t g_seed = 1;
  c_gen->add_option("--nx", g_nx, "Number of x variables")->check(CLI::PositiveNumber);
  c_gen->add_option("--nz", g_nz, "Number of z variables")->check(CLI::PositiveNumber);
  c_gen->add_option("--m", g_m, "Degree")->check(CLI::Range(2, 12));
  c_gen->add_option("--trials", trials, "Number of random phases")->check(CLI::PositiveNumber);
  c_gen->add_option("--seed", g_seed, "Random seed");
  c_gen->add_option("--threads", threads, "Worker threads (0: all cores)");
  cf.add_to(c_gen);

  auto* c_examples = app.add_subcommand("examples", "Print the built-in example phases");
  std::string ex_name;
  bool ex_json = false;
  c_examples->add_option("--name", ex_name, "Print only this example as phase JSON");
  c_examples->add_flag("--phase-json", ex_json, "With --name: print just the phase JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    CString out;
    int rc = kExitOk;
    if (c_check->parsed()) {
      PhaseHandle h;
      src.load(h);
      check(oscint_check(h.p, cf.to_json().dump().c_str(), &out.p));
    } else if (c_newton->parsed()) {
      PhaseHandle h;
      src.load(h);
      json o = {{"modified", modified}, {"samples", samples}, {"seed", seed}, {"threads", threads}};
      check(oscint_newton(h.p, o.dump().c_str(), &out.p));
    } else if (c_predict->parsed()) {
      PhaseHandle h;
      src.load(h);
      check(oscint_predict(h.p, cf.to_json().dump().c_str(), &out.p));
    } else if (c_pencil->parsed()) {
      check(oscint_pencil(phi1.c_str(), phi2.c_str(), &out.p));
    } else if (c_sweep->parsed()) {
      PhaseHandle h;
      src.load(h);
      json o = {{"lambda_min", lam_min}, {"lambda_max", lam_max}, {"points", points},
                {"n_min", n_min},        {"n_max", n_max},       {"max_entries", max_entries},
                {"tol", tol},            {"max_iter", max_iter}, {"seed", sweep_seed},
                {"threads", threads},    {"box", box},           {"amplitude", amplitude},
                {"refine", !no_refine},  {"drop", drop},         {"witness", witness},
                {"method", method}};
      if (grid == "auto") {
        o["grid"] = "auto";
      } else {
        try {
          o["grid"] = std::stoi(grid);
        } catch (const std::exception&) {
          throw CliError{"--grid must be \"auto\" or an integer"};
        }
      }
      CString js, csv, plot;
      int unresolved = 0;
      check(oscint_sweep(h.p, o.dump().c_str(), &js.p, &csv.p, &plot.p, &unresolved));
      json report = json::parse(js.str());
      std::fprintf(stderr, "grid cap %d per axis; chosen grids:", report["grid_cap"].get<int>());
      for (const auto& row : report["rows"]) std::fprintf(stderr, " %d", row["grid_n"].get<int>());
      std::fprintf(stderr, "\n");
      if (unresolved > 0) std::fprintf(stderr, "warning: %d lambda value(s) unresolved\n", unresolved);
      if (!json_path.empty()) write_output(json_path, js.str());
      if (!plot_path.empty()) write_output(plot_path, plot.str());
      write_output(out_path, out_path.empty() ? js.str() : csv.str());
      if (strict && unresolved > 0) rc = kExitSoftFail;
      return rc;
    } else if (c_fit->parsed()) {
      check(oscint_fit_csv(read_file(in_path).c_str(), fit_drop, &out.p));
    } else if (c_gen->parsed()) {
      json o = cf.to_json();
      o.update({{"nx", g_nx}, {"nz", g_nz}, {"m", g_m}, {"trials", trials}, {"seed", g_seed}, {"threads", threads}});
      check(oscint_genericity(o.dump().c_str(), &out.p));
    } else if (c_examples->parsed()) {
      if (ex_name.empty()) {
        check(oscint_examples(&out.p));
      } else {
        PhaseHandle h;
        check(oscint_phase_example(ex_name.c_str(), &h.p));
        if (ex_json) {
          check(oscint_phase_to_json(h.p, &out.p));
        } else {
          check(oscint_predict(h.p, nullptr, &out.p));
        }
      }
    }
    write_output(out_path, out.str());
    return rc;
  } catch (const CliError& e) {
    std::fprintf(stderr, "oscint: %s\n", e.message.c_str());
    return kExitValidation;
  }
}
