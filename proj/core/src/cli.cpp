#include "uddlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uddlab/bounds.hpp"
#include "uddlab/dyson.hpp"
#include "uddlab/sequence.hpp"
#include "uddlab/simulator.hpp"

namespace uddlab::cli {
namespace {

std::string format_g17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// Compact decimal tag for grid values inside file names (0.01, 1, 100).
std::string format_tag(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path path(out);
  if (path.is_relative()) {
    if (const char* env = std::getenv("UDDLAB_OUT_DIR")) {
      path = std::filesystem::path(env) / path;
    }
  }
  return path;
}

std::filesystem::path resolve_out_dir(const std::string& out) {
  if (!out.empty()) return resolve_out(out);
  if (const char* env = std::getenv("UDDLAB_OUT_DIR")) return std::filesystem::path(env);
  return std::filesystem::path(".");
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw std::runtime_error("cannot open output file " + path.string());
  stream << bytes;
  if (!stream.good()) throw std::runtime_error("failed writing " + path.string());
}

// Emits a single-document artifact to stdout or, when `out` is non-empty,
// to the resolved path.
void deliver(const std::string& out, const std::string& body) {
  if (out.empty()) {
    std::cout << body;
    if (body.empty() || body.back() != '\n') std::cout << '\n';
  } else {
    const std::filesystem::path path = resolve_out(out);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_file(path, body);
    std::cout << path.string() << '\n';
  }
}

std::vector<double> log_spaced(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw std::invalid_argument("grid: need 0 < min < max and at least two points");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = (std::log(hi) - std::log(lo)) / (points - 1);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + i * step);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

struct TimingsArgs {
  int n = 1;
  double total_time = 1.0;
  std::string timing = "udd";
  std::string out;
};

int cmd_timings(const TimingsArgs& args) {
  const PulseSequence seq = sequence_of(timing_kind_from_name(args.timing), args.n, args.total_time);
  deliver(args.out, to_json(seq));
  return 0;
}

struct BoundArgs {
  std::vector<int> n_list{2, 5, 10, 20};
  std::vector<double> eta_list{0.01, 0.1, 1.0, 10.0, 100.0};
  double eps_min = 1e-4;
  double eps_max = 10.0;
  int eps_points = 60;
  bool fixed_t1 = false;
  std::string out;
};

int cmd_bound(const BoundArgs& args) {
  if (args.n_list.empty() || args.eta_list.empty()) {
    throw std::invalid_argument("bound: --n and --eta lists must be non-empty");
  }
  const std::vector<double> grid = log_spaced(args.eps_min, args.eps_max, args.eps_points);
  const std::filesystem::path dir = resolve_out_dir(args.out);
  std::filesystem::create_directories(dir);
  for (int n : args.n_list) {
    for (double eta : args.eta_list) {
      std::string body = args.fixed_t1 ? "epsilon1,delta_N\n" : "epsilon,delta_N\n";
      for (double eps : grid) {
        const double delta = args.fixed_t1
                                 ? delta_bound_fixed_interval(FixedIntervalParams{n, eta, eps})
                                 : delta_bound(BoundParams{n, eta, eps});
        body += format_g17(eps);
        body += ',';
        body += format_g17(delta);
        body += '\n';
      }
      std::string name = args.fixed_t1 ? "bound_fixed_t1" : "bound";
      name += "_N" + std::to_string(n) + "_eta" + format_tag(eta) + ".csv";
      const std::filesystem::path path = dir / name;
      write_file(path, body);
      std::cout << path.string() << '\n';
    }
  }
  return 0;
}

struct SimulateArgs {
  ExperimentSpec spec;
  std::string state = "haar";
  std::string format = "json";
  int threads = 1;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  ExperimentSpec spec = args.spec;
  if (args.state == "haar") {
    spec.initial_state = InitialStatePolicy::haar;
  } else if (args.state == "plus") {
    spec.initial_state = InitialStatePolicy::plus;
  } else {
    throw std::invalid_argument("simulate: --state must be haar or plus");
  }
  if (args.format != "json" && args.format != "csv") {
    throw std::invalid_argument("simulate: --format must be json or csv");
  }
  const VerificationReport report = verify_bound(spec, args.threads);
  if (args.format == "json") {
    deliver(args.out, report.to_json());
  } else {
    std::string body = "seed,D,delta_N,bound,b_norm_minus,margin\n";
    for (const TrialRecord& r : report.trials) {
      body += std::to_string(r.seed);
      body += ',';
      body += format_g17(r.distance);
      body += ',';
      body += format_g17(r.delta);
      body += ',';
      body += format_g17(r.bound);
      body += ',';
      body += format_g17(r.b_minus_norm);
      body += ',';
      body += format_g17(r.margin);
      body += '\n';
    }
    deliver(args.out, body);
  }
  return report.pass ? 0 : 1;
}

struct ScalingArgs {
  int n = 2;
  Eigen::Index dim = 4;
  double eta = 1.0;
  std::uint64_t seed = 7;
  double eps_min = 1e-3;
  double eps_max = 1e-2;
  int eps_points = 7;
  std::string timing = "udd";
  std::string out;
};

int cmd_scaling(const ScalingArgs& args) {
  // With the bath normalized to unit sup-norm, total time and the
  // dimensionless coupling epsilon coincide, so the epsilon flags define
  // the time grid directly.
  const BathModel bath = random_bath(args.dim, 1.0, args.eta, args.seed);
  const std::vector<double> grid = log_spaced(args.eps_min, args.eps_max, args.eps_points);
  const TimingKind kind = timing_kind_from_name(args.timing);
  const ScalingFit fit = order_scaling_fit(bath, args.n, grid, kind);

  const std::filesystem::path dir = resolve_out_dir(args.out);
  std::filesystem::create_directories(dir);
  const std::filesystem::path csv_path =
      dir / ("scaling_" + args.timing + "_N" + std::to_string(args.n) + ".csv");
  write_file(csv_path, fit.to_csv());
  std::cout << csv_path.string() << '\n';
  std::cout << fit.to_json() << '\n';

  if (fit.degenerate) return 0;
  const double expected = args.n + 1.0;
  return std::abs(fit.slope - expected) <= 0.15 ? 0 : 1;
}

struct DysonCheckArgs {
  int n = 5;
  int max_order = 5;
  std::string timing = "udd";
  std::string out;
};

int cmd_dyson_check(const DysonCheckArgs& args) {
  const VanishingReport report =
      verify_vanishing_orders(args.n, args.max_order, timing_kind_from_name(args.timing));
  deliver(args.out, report.to_json());
  return report.pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Pulse-sequence dephasing laboratory: sin^2 pulse timings, bounding tails,"
               " exact simulation, and expansion-order checks"};
  app.require_subcommand(1);

  TimingsArgs timings_args;
  CLI::App* timings = app.add_subcommand("timings", "Print a pulse schedule as JSON");
  timings->add_option("--n", timings_args.n, "number of pulses");
  timings->add_option("--total-time", timings_args.total_time, "schedule duration");
  timings->add_option("--timing", timings_args.timing, "udd or periodic");
  timings->add_option("--out", timings_args.out, "output file (default stdout)");

  BoundArgs bound_args;
  CLI::App* bound = app.add_subcommand(
      "bound", "Sweep the bounding tail over a log-spaced coupling grid, one CSV per (N, eta)");
  bound->add_option("--n", bound_args.n_list, "pulse counts")->delimiter(',');
  bound->add_option("--eta", bound_args.eta_list, "coupling ratios")->delimiter(',');
  bound->add_option("--eps-min", bound_args.eps_min, "grid lower end");
  bound->add_option("--eps-max", bound_args.eps_max, "grid upper end");
  bound->add_option("--eps-points", bound_args.eps_points, "grid size");
  bound->add_flag("--fixed-t1", bound_args.fixed_t1,
                  "hold the first interval fixed (columns epsilon1,delta_N)");
  bound->add_option("--out", bound_args.out, "output directory");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Verify the distance bound over randomized trials and report margins");
  simulate->add_option("--dim", sim_args.spec.bath_dim, "bath dimension (2..32)");
  simulate->add_option("--n", sim_args.spec.n_pulses, "number of pulses (0 = free evolution)");
  simulate->add_option("--eta", sim_args.spec.eta, "coupling ratio Jz/J0");
  simulate->add_option("--eps", sim_args.spec.epsilon, "dimensionless coupling J0*T");
  simulate->add_option("--seed", sim_args.spec.seed, "master seed");
  simulate->add_option("--trials", sim_args.spec.trials, "number of trials");
  simulate->add_option("--state", sim_args.state, "initial qubit state: haar or plus");
  simulate->add_option("--threads", sim_args.threads, "worker threads (result is independent)");
  simulate->add_option("--format", sim_args.format, "json or csv");
  simulate->add_option("--out", sim_args.out, "output file (default stdout)");

  ScalingArgs scaling_args;
  CLI::App* scaling = app.add_subcommand(
      "scaling", "Fit the decay order of the off-branch norm against total time");
  scaling->add_option("--n", scaling_args.n, "number of pulses");
  scaling->add_option("--dim", scaling_args.dim, "bath dimension");
  scaling->add_option("--eta", scaling_args.eta, "coupling ratio");
  scaling->add_option("--seed", scaling_args.seed, "bath seed");
  scaling->add_option("--eps-min", scaling_args.eps_min, "time grid lower end");
  scaling->add_option("--eps-max", scaling_args.eps_max, "time grid upper end");
  scaling->add_option("--eps-points", scaling_args.eps_points, "time grid size");
  scaling->add_option("--timing", scaling_args.timing, "udd or periodic");
  scaling->add_option("--out", scaling_args.out, "output directory for the CSV");

  DysonCheckArgs dyson_args;
  CLI::App* dyson_check = app.add_subcommand(
      "dyson-check", "Exhaustively check that low-order odd-z expansion words vanish");
  dyson_check->add_option("--n", dyson_args.n, "number of pulses");
  dyson_check->add_option("--max-order", dyson_args.max_order, "highest word length");
  dyson_check->add_option("--timing", dyson_args.timing, "udd or periodic");
  dyson_check->add_option("--out", dyson_args.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (timings->parsed()) return cmd_timings(timings_args);
    if (bound->parsed()) return cmd_bound(bound_args);
    if (simulate->parsed()) return cmd_simulate(sim_args);
    if (scaling->parsed()) return cmd_scaling(scaling_args);
    if (dyson_check->parsed()) return cmd_dyson_check(dyson_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace uddlab::cli
