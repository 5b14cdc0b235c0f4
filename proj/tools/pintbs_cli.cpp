// Copyright 2026 The pintbs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pintbs command-line driver: solve, parareal, sweep, bounds, costs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pintbs/analytic.hpp"
#include "pintbs/config.hpp"
#include "pintbs/field_io.hpp"
#include "pintbs/perf_models.hpp"

namespace fs = std::filesystem;
using namespace pintbs;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kMissingArtifact = 3, kNumerical = 4 };

struct MissingArtifact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::string config;
  std::string coarse;
  std::string weights;
  std::string out;
  std::string grid;
  int p_time = 0;
  int p_space = 0;
  int k = 0;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--coarse", o.coarse, "coarse propagator")->check(CLI::IsMember({"numeric", "fno"}));
  cmd->add_option("--ptime", o.p_time, "number of time slices")->check(CLI::PositiveNumber);
  cmd->add_option("--pspace", o.p_space, "spatial workers per solve")->check(CLI::PositiveNumber);
  cmd->add_option("--k", o.k, "Parareal iterations")->check(CLI::PositiveNumber);
  cmd->add_option("--weights", o.weights, "FNO1 weight file");
  cmd->add_option("--out", o.out, "output directory (PINTBS_OUT overrides)");
  cmd->add_option("--grid", o.grid, "grid size NXxNY");
  cmd->add_option("--seed", o.seed, "random seed")->check(CLI::NonNegativeNumber);
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.coarse.empty()) c.coarse = parse_coarse_kind(o.coarse);
  if (o.p_time) c.p_time = o.p_time;
  if (o.p_space) c.p_space = o.p_space;
  if (o.k) c.k = o.k;
  if (!o.weights.empty()) c.weights = o.weights;
  if (!o.out.empty()) c.out = o.out;
  if (o.seed >= 0) c.seed = static_cast<std::uint64_t>(o.seed);
  if (!o.grid.empty()) std::tie(c.nx, c.ny) = parse_grid_spec(o.grid);
  if (const char* env = std::getenv("PINTBS_OUT"); env && *env) c.out = env;
  c.validate();
  fs::create_directories(c.out);
  return c;
}

std::shared_ptr<const FnoModel> require_model(const RunConfig& c) {
  if (c.weights.empty()) throw MissingArtifact("the fno coarse propagator needs --weights");
  if (!fs::exists(c.weights)) throw MissingArtifact("weights file not found: " + c.weights.string());
  return std::make_shared<const FnoModel>(load_weights(c.weights));
}

std::shared_ptr<const FnoModel> model_if_needed(const RunConfig& c) {
  return c.coarse == PropagatorKind::CoarseFno ? require_model(c) : nullptr;
}

std::ofstream open_out(const RunConfig& c, const std::string& name) {
  std::ofstream f(c.out / name);
  if (!f) throw std::runtime_error("cannot write " + (c.out / name).string());
  return f;
}

int cmd_solve(const RunConfig& c, int steps) {
  const Grid2D grid = c.grid();
  const FieldD u0 = analytic_field<double>(grid, 0.0, c.params);
  CgConfig solver = c.fine_solver;
  solver.workers = c.p_space;
  std::vector<SolveStat> stats;
  const auto t0 = std::chrono::steady_clock::now();
  const FieldD u = implicit_euler_steps(u0, 0.0, c.params.maturity, steps, c.params, solver, &stats);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const FieldD exact = analytic_field<double>(grid, c.params.maturity, c.params);
  const double err = relative_error(u, exact);

  write_field_csv(c.out / "solution.csv", u);
  write_field_binary(c.out / "solution.bin", u);
  write_field_csv(c.out / "error.csv", u - exact);
  auto stats_csv = open_out(c, "solve_stats.csv");
  write_solve_stats_csv(stats_csv, stats);

  int iters = 0;
  for (const auto& s : stats) iters += s.iterations;
  nlohmann::json summary = {{"nx", grid.nx()}, {"ny", grid.ny()}, {"steps", steps},
                            {"rel_l2_error_vs_closed_form", err}, {"solver_iterations", iters},
                            {"seconds", secs}};
  open_out(c, "summary.json") << summary.dump(2) << '\n';
  std::cout << "relative l2 error vs closed form: " << std::setprecision(6) << err << " (" << steps << " steps, "
            << secs << " s)\n";
  return kOk;
}

int run_exactness(const RunConfig& c) {
  const Grid2D grid = c.grid();
  const TimePartition part{0.0, c.params.maturity, c.p_time};
  const FieldD u0 = analytic_field<double>(grid, 0.0, c.params);
  const StudyConfig study = c.study();
  PropagatorSpec coarse = study.coarse(PropagatorKind::CoarseNumeric, nullptr);
  coarse.precision = Precision::Double;
  coarse.solver = study.fine().solver;
  const Trajectory ref = serial_fine_reference(u0, part, study.fine(), c.params);
  bool ok = true;
  for (int k = 1; k <= std::min(c.k, c.p_time); ++k) {
    const auto s = parareal_run(u0, part, study.fine(), coarse, k, c.params);
    double worst = 0.0;
    for (int n = 0; n <= k; ++n) worst = std::max(worst, relative_error(s.u[static_cast<std::size_t>(n)], ref[static_cast<std::size_t>(n)]));
    std::cout << "k=" << k << " max relative deviation on slices 0.." << k << ": " << worst << '\n';
    ok = ok && worst <= 1e-10;
  }
  std::cout << (ok ? "exactness holds\n" : "exactness VIOLATED\n");
  return ok ? kOk : kNumerical;
}

int cmd_parareal(const RunConfig& c, bool exactness, bool weak_scaling) {
  if (exactness) return run_exactness(c);
  const auto model = model_if_needed(c);
  const StudyConfig study = c.study();
  const auto rows = convergence_study(study, {c.coarse}, model, &std::cerr);
  auto conv = open_out(c, "convergence.csv");
  write_convergence_csv(conv, rows);
  write_convergence_csv(std::cout, rows);

  const double serial = measure_serial_fine(study);
  const auto rt = measure_runtime(study, study.coarse(c.coarse, model), serial);
  auto runtime = open_out(c, "runtime.csv");
  write_runtime_csv(runtime, {rt});
  std::cout << "serial fine " << serial << " s, parareal " << rt.seconds << " s, speedup " << rt.speedup_vs_serial_fine
            << '\n';

  if (weak_scaling) {
    const auto ws = weak_scaling_study(study, {2, 4, 8}, c.coarse, model);
    auto f = open_out(c, "weak_scaling.csv");
    write_convergence_csv(f, ws);
  }
  return kOk;
}

int cmd_sweep(const RunConfig& c, const std::vector<std::string>& axes, const std::vector<double>& values) {
  const auto model = model_if_needed(c);
  std::vector<SweepRow> rows;
  for (const auto& axis : axes) {
    const auto part = parameter_sweep(c.study(), axis, values, c.coarse, model);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  auto f = open_out(c, "sweep.csv");
  write_sweep_csv(f, rows);
  write_sweep_csv(std::cout, rows);
  return kOk;
}

struct BoundsArgs {
  double c_fine = 350.007;
  std::vector<double> c_coarse = {113.011, 2.203};
  std::string measured;
  double c_numeric = 0.0;
  double c_fno = 0.0;
};

int cmd_bounds(const Overrides& o, const BoundsArgs& b) {
  const int k = o.k ? o.k : 1;
  const int p_time = o.p_time ? o.p_time : 64;
  const int p_space = o.p_space ? o.p_space : 1;
  std::cout << "| c_fine | c_coarse | K | P_time | P_space | c_fine/c_coarse | P_time/K | cap | Parareal bound | space-time bound |\n"
            << "|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const double cc : b.c_coarse) {
    const CostInputs ci{b.c_fine, cc, k, p_time, p_space};
    const auto bound = parareal_bound(ci);
    std::cout << std::setprecision(6) << "| " << b.c_fine << " | " << cc << " | " << k << " | " << p_time << " | " << p_space << " | "
              << std::setprecision(4) << bound.cost_ratio << " | " << bound.iteration_ratio << " | " << bound.cap
              << " | " << bound.value << " | " << spacetime_bound(ci) << " |\n";
  }
  if (b.measured.empty()) return kOk;

  std::ifstream in(b.measured);
  if (!in) throw MissingArtifact("measured runtime CSV not found: " + b.measured);
  SliceCosts costs{b.c_fine, {}};
  if (b.c_numeric > 0.0) costs.c_coarse["numeric"] = b.c_numeric;
  if (b.c_fno > 0.0) costs.c_coarse["fno"] = b.c_fno;
  const auto rows = compare_measured(costs, parse_runtime_csv(in));
  std::cout << '\n';
  write_comparison_markdown(std::cout, rows);
  const fs::path out = std::getenv("PINTBS_OUT") ? fs::path(std::getenv("PINTBS_OUT")) : fs::path(o.out.empty() ? "out" : o.out);
  fs::create_directories(out);
  std::ofstream csv(out / "bounds_comparison.csv");
  write_comparison_csv(csv, rows);
  std::ofstream md(out / "bounds_comparison.md");
  write_comparison_markdown(md, rows);
  for (const auto& r : rows)
    if (r.exceeds_bound) return kNumerical;
  return kOk;
}

int cmd_costs(const RunConfig& c, int reps) {
  const Grid2D grid = c.grid();
  const StudyConfig study = c.study();
  const double dt = c.params.maturity / c.p_time;
  const auto model = c.weights.empty() ? std::make_shared<const FnoModel>(FnoModel::random({}, c.seed)) : require_model(c);
  struct Entry {
    const char* name;
    PropagatorSpec spec;
  };
  const Entry entries[] = {{"fine", study.fine()},
                           {"numeric", study.coarse(PropagatorKind::CoarseNumeric, nullptr)},
                           {"fno", study.coarse(PropagatorKind::CoarseFno, model)}};
  auto f = open_out(c, "costs.csv");
  f << "propagator,nx,ny,dt,reps,mean_seconds,stddev_seconds\n";
  for (const auto& e : entries) {
    const auto cost = measure_cost(e.spec, reps, grid, c.params, dt);
    f << e.name << ',' << grid.nx() << ',' << grid.ny() << ',' << dt << ',' << reps << ',' << cost.mean_seconds << ','
      << cost.stddev_seconds << '\n';
    std::cout << e.name << ": " << cost.mean_seconds << " s +- " << cost.stddev_seconds << " per slice\n";
  }
  return kOk;
}

void print_nested(const std::exception& e) {
  std::cerr << "error: " << e.what() << '\n';
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_nested(inner);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel-in-time two-asset Black-Scholes solver"};
  app.require_subcommand(1);

  Overrides o;
  int steps = 30;
  bool exactness = false, weak = false;
  int reps = 5;
  std::vector<std::string> axes = {"r", "sigma1", "sigma2"};
  std::vector<double> values = kDefaultSweepValues;
  BoundsArgs b;

  auto* solve = app.add_subcommand("solve", "serial fine solve compared with the closed form");
  add_common(solve, o);
  solve->add_option("--steps", steps, "implicit Euler steps over [0, T]")->check(CLI::PositiveNumber);

  auto* parareal = app.add_subcommand("parareal", "Parareal convergence and runtime");
  add_common(parareal, o);
  parareal->add_flag("--exactness", exactness, "all-double exactness check against the serial fine trajectory");
  parareal->add_flag("--weak-scaling", weak, "also run P in {2,4,8} with the grid refined alongside");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep with unchanged coarse propagator");
  add_common(sweep, o);
  sweep->add_option("--axes", axes, "parameters to vary")->check(CLI::IsMember({"r", "sigma1", "sigma2"}));
  sweep->add_option("--values", values, "parameter values");

  auto* bounds = app.add_subcommand("bounds", "analytic speedup bounds");
  add_common(bounds, o);
  bounds->add_option("--c-fine", b.c_fine, "fine cost per slice")->check(CLI::PositiveNumber);
  bounds->add_option("--c-coarse", b.c_coarse, "coarse costs per slice")->check(CLI::PositiveNumber);
  bounds->add_option("--measured", b.measured, "runtime CSV to compare against the bounds");
  bounds->add_option("--c-numeric", b.c_numeric, "numeric coarse cost for --measured");
  bounds->add_option("--c-fno", b.c_fno, "fno coarse cost for --measured");

  auto* costs = app.add_subcommand("costs", "per-slice propagator costs");
  add_common(costs, o);
  costs->add_option("--reps", reps, "timed repetitions")->check(CLI::Range(3, 1000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*bounds) return cmd_bounds(o, b);
    const RunConfig c = resolve(o);
    if (*solve) return cmd_solve(c, steps);
    if (*parareal) return cmd_parareal(c, exactness, weak);
    if (*sweep) return cmd_sweep(c, axes, values);
    if (*costs) return cmd_costs(c, reps);
  } catch (const MissingArtifact& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissingArtifact;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissingArtifact;
  } catch (const CorruptionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissingArtifact;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissingArtifact;
  } catch (const CsvParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    print_nested(e);
    return kNumerical;
  }
  return kOk;
}
