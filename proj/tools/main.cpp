#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optswitch/csv.hpp"
#include "optswitch/evaluator.hpp"
#include "optswitch/oracle.hpp"
#include "optswitch/problem.hpp"
#include "optswitch/solver.hpp"
#include "optswitch/strategy.hpp"

namespace {

using namespace optswitch;

struct CommonOptions {
  std::string spec_path;
  int steps = 200;
  std::string method = "direct";
  double tol = 1e-10;
  int max_iter = 200;
  long paths = 100000;
  std::uint64_t seed = 0;
  int u_grid_size = 3;
  std::string output;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FormatError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::FormatError, "cannot write '" + path + "'");
  return file;
}

const char* severity_name(Severity s) { return s == Severity::Error ? "error" : "warning"; }

void print_report(std::ostream& out, const ValidationReport& report) {
  for (const auto& f : report.findings)
    out << severity_name(f.severity) << ' ' << finding_code_name(f.code) << ' ' << f.location
        << ": " << f.message << '\n';
  int errors = 0;
  for (const auto& f : report.findings)
    if (f.severity == Severity::Error) ++errors;
  out << (errors == 0 ? "accepted" : "rejected") << ": " << errors << " error(s), "
      << report.findings.size() - errors << " warning(s)\n";
}

// loads, builds the lattice and refuses to continue on validation errors
struct LoadedProblem {
  ProblemSpec spec;
  Lattice lat;
};

LoadedProblem load_checked(const CommonOptions& opt, int steps) {
  LoadedProblem lp;
  lp.spec = load_spec(read_file(opt.spec_path));
  lp.lat = build_lattice(lp.spec.factor, lp.spec.horizon, steps);
  ValidationReport report = validate(lp.spec, lp.lat);
  if (!report.ok()) {
    print_report(std::cerr, report);
    throw Error(ErrorCode::ValidationFailed, "specification rejected by validation");
  }
  return lp;
}

SolutionField run_solver(const CommonOptions& opt, const LoadedProblem& lp) {
  if (opt.method == "direct") return solve_direct(lp.spec, lp.lat);
  if (opt.method == "picard") return solve_picard(lp.spec, lp.lat, opt.tol, opt.max_iter);
  throw Error(ErrorCode::FormatError, "unknown method '" + opt.method + "'");
}

int cmd_validate(const CommonOptions& opt) {
  ProblemSpec spec = load_spec(read_file(opt.spec_path));
  Lattice lat = build_lattice(spec.factor, spec.horizon, opt.steps);
  ValidationReport report = validate(spec, lat);
  print_report(std::cout, report);
  return report.ok() ? 0 : 1;
}

int cmd_solve(const CommonOptions& opt) {
  LoadedProblem lp = load_checked(opt, opt.steps);
  SolutionField sol = run_solver(opt, lp);
  std::ofstream file;
  std::ostream& out = open_output(opt.output, file);
  write_solution_csv(out, sol, lp.lat);
  std::cout << "Y0=" << g17(sol.start_value(lp.spec)) << '\n';
  return 0;
}

int cmd_policy(const CommonOptions& opt) {
  LoadedProblem lp = load_checked(opt, opt.steps);
  SolutionField sol = run_solver(opt, lp);
  Policy pol = extract_policy(lp.spec, lp.lat, sol);
  ControlTable ctl = worst_control(lp.spec, lp.lat, sol);
  if (opt.output.empty()) {
    write_policy_csv(std::cout, pol);
    std::cout << '\n';
    write_control_csv(std::cout, ctl);
  } else {
    std::ofstream pf(opt.output + ".policy.csv", std::ios::binary);
    std::ofstream cf(opt.output + ".control.csv", std::ios::binary);
    if (!pf || !cf) throw Error(ErrorCode::FormatError, "cannot write '" + opt.output + ".*.csv'");
    write_policy_csv(pf, pol);
    write_control_csv(cf, ctl);
  }
  return 0;
}

int cmd_simulate(const CommonOptions& opt) {
  LoadedProblem lp = load_checked(opt, opt.steps);
  SolutionField sol = solve_direct(lp.spec, lp.lat);
  Policy pol = extract_policy(lp.spec, lp.lat, sol);
  ControlTable ctl = worst_control(lp.spec, lp.lat, sol);
  std::vector<double> grid = drift_grid(lp.spec.ambiguity, opt.u_grid_size);

  std::ofstream file;
  std::ostream& out = open_output(opt.output, file);
  out << "label,method,estimate,stderr,paths,seed\n";

  EvalReport exact = evaluate_exact(lp.spec, lp.lat, pol, ctl);
  out << "saddle_exact," << exact.csv_row() << '\n';
  EvalReport mc = evaluate_mc(lp.spec, lp.lat, pol, ctl, opt.paths, opt.seed);
  out << "saddle_mc," << mc.csv_row() << '\n';

  for (int i = 0; i < 20; ++i) {
    std::uint64_t s = opt.seed + 1000 + static_cast<std::uint64_t>(i);
    ControlTable random = random_control(lp.spec, lp.lat, grid, s);
    EvalReport rep = evaluate_exact(lp.spec, lp.lat, pol, random);
    rep.seed = s;
    out << "random_control_" << (i + 1) << ',' << rep.csv_row() << '\n';
  }
  for (int i = 0; i < 20; ++i) {
    std::uint64_t s = opt.seed + 2000 + static_cast<std::uint64_t>(i);
    Policy random = random_policy(lp.spec, lp.lat, s);
    PolicyValue pv = policy_worst_value(lp.spec, lp.lat, random, grid);
    EvalReport rep;
    rep.method = "exact";
    rep.estimate = pv.value;
    rep.seed = s;
    out << "random_policy_" << (i + 1) << ',' << rep.csv_row() << '\n';
  }
  return 0;
}

int cmd_oracle(const CommonOptions& opt) {
  LoadedProblem lp = load_checked(opt, opt.steps);
  SolutionField sol = run_solver(opt, lp);
  std::vector<double> grid = drift_grid(lp.spec.ambiguity, opt.u_grid_size);
  OracleResult oracle = game_dp(lp.spec, lp.lat, grid);

  std::ofstream file;
  std::ostream& out = open_output(opt.output, file);
  out << "mode,n,k,Y,V,diff\n";
  double max_diff = 0.0;
  for (int j = 0; j < lp.spec.modes; ++j)
    for (int n = 0; n <= lp.lat.steps(); ++n)
      for (int k = 0; k <= n; ++k) {
        double y = sol.Y[j](n, k);
        double v = oracle.values[j](n, k);
        double diff = std::fabs(y - v);
        max_diff = std::max(max_diff, diff);
        out << (j + 1) << ',' << n << ',' << k << ',' << g17(y) << ',' << g17(v) << ','
            << g17(diff) << '\n';
      }
  std::cout << "max_abs_diff=" << g17(max_diff) << '\n';
  return 0;
}

int cmd_sweep(const CommonOptions& opt, const std::string& steps_list) {
  std::vector<int> step_counts;
  std::stringstream ss(steps_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      step_counts.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::FormatError, "bad step count '" + item + "'");
    }
  }
  if (step_counts.empty()) throw Error(ErrorCode::FormatError, "empty steps list");

  std::ofstream file;
  std::ostream& out = open_output(opt.output, file);
  out << "N,Y0,delta_to_previous\n";
  bool first = true;
  double prev = 0.0;
  for (int steps : step_counts) {
    LoadedProblem lp = load_checked(opt, steps);
    SolutionField sol = run_solver(opt, lp);
    double y0 = sol.start_value(lp.spec);
    out << steps << ',' << g17(y0) << ',';
    if (!first) out << g17(std::fabs(y0 - prev));
    out << '\n';
    first = false;
    prev = y0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-mode optimal switching under worst-case drift ambiguity"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string sweep_steps = "50,100,200,400";

  auto add_common = [&](CLI::App* cmd, bool with_steps = true) {
    cmd->add_option("spec", opt.spec_path, "problem file")->required();
    if (with_steps) cmd->add_option("--steps", opt.steps, "lattice step count");
    cmd->add_option("--output", opt.output, "write CSV here instead of stdout");
  };
  auto add_method = [&](CLI::App* cmd) {
    cmd->add_option("--method", opt.method, "direct|picard");
    cmd->add_option("--tol", opt.tol, "picard stopping tolerance");
    cmd->add_option("--max-iter", opt.max_iter, "picard iteration cap");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a problem file");
  add_common(validate_cmd);

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve the reflected system");
  add_common(solve_cmd);
  add_method(solve_cmd);

  CLI::App* policy_cmd = app.add_subcommand("policy", "extract the switching policy and worst-case drift");
  add_common(policy_cmd);
  add_method(policy_cmd);

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "evaluate the extracted pair and saddle checks");
  add_common(simulate_cmd);
  simulate_cmd->add_option("--paths", opt.paths, "Monte Carlo path count");
  simulate_cmd->add_option("--seed", opt.seed, "Monte Carlo seed");
  simulate_cmd->add_option("--u-grid", opt.u_grid_size, "drift grid size");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "compare against the game dynamic program");
  add_common(oracle_cmd);
  add_method(oracle_cmd);
  oracle_cmd->add_option("--u-grid", opt.u_grid_size, "drift grid size");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "root value across step counts");
  add_common(sweep_cmd, false);
  add_method(sweep_cmd);
  sweep_cmd->add_option("--steps", sweep_steps, "comma-separated step counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR Usage: " << e.what() << '\n';
    return 64;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return cmd_validate(opt);
    if (app.got_subcommand(solve_cmd)) return cmd_solve(opt);
    if (app.got_subcommand(policy_cmd)) return cmd_policy(opt);
    if (app.got_subcommand(simulate_cmd)) return cmd_simulate(opt);
    if (app.got_subcommand(oracle_cmd)) return cmd_oracle(opt);
    if (app.got_subcommand(sweep_cmd)) return cmd_sweep(opt, sweep_steps);
  } catch (const Error& e) {
    std::cerr << "ERROR " << error_code_name(e.code()) << ": " << e.message() << '\n';
    return error_category(e.code()) == ErrorCategory::Input ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "ERROR Internal: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
