#include "optswitch/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "optswitch/csv.hpp"

namespace optswitch {

namespace {

double eval_at(const Expr& e, double t, double x, int n, int k) {
  try {
    return e.eval(t, x);
  } catch (const Error& err) {
    throw Error(err.code(), err.message() + " at node(n=" + std::to_string(n) +
                                ",k=" + std::to_string(k) + ")");
  }
}

// Expression values cached per node so the direct pass, the Picard iterates
// and the reflection all see identical doubles.
struct EvaluatedSpec {
  int modes = 0;
  std::vector<TriGrid<double>> psi;   // per mode, all layers
  std::vector<double> xi_terminal;    // per terminal node * mode
  std::vector<TriGrid<double>> cost;  // per (j*m + i) where defined

  double xi(int j, int k) const { return xi_terminal[static_cast<std::size_t>(k) * modes + j]; }
};

EvaluatedSpec evaluate_spec(const ProblemSpec& spec, const Lattice& lat) {
  EvaluatedSpec ev;
  ev.modes = spec.modes;
  int m = spec.modes;
  int N = lat.steps();
  ev.psi.assign(m, TriGrid<double>(N + 1));
  ev.cost.assign(static_cast<std::size_t>(m) * m, TriGrid<double>());
  for (int j = 0; j < m; ++j)
    for (int i : spec.switch_sets[j]) ev.cost[static_cast<std::size_t>(j) * m + i] = TriGrid<double>(N + 1);

  for (int n = 0; n <= N; ++n) {
    double t = lat.time(n);
    for (int k = 0; k <= n; ++k) {
      double x = lat.state(n, k);
      for (int j = 0; j < m; ++j) {
        ev.psi[j](n, k) = eval_at(spec.psi[j], t, x, n, k);
        for (int i : spec.switch_sets[j])
          ev.cost[static_cast<std::size_t>(j) * m + i](n, k) = eval_at(*spec.cost[j][i], t, x, n, k);
      }
    }
  }

  double T = lat.time(N);
  ev.xi_terminal.resize(static_cast<std::size_t>(N + 1) * m);
  for (int k = 0; k <= N; ++k) {
    double x = lat.state(N, k);
    for (int j = 0; j < m; ++j) ev.xi_terminal[static_cast<std::size_t>(k) * m + j] = eval_at(spec.xi[j], T, x, N, k);
  }
  return ev;
}

void node_costs(const EvaluatedSpec& ev, const ProblemSpec& spec, int n, int k, CostMatrix& out) {
  int m = spec.modes;
  for (int j = 0; j < m; ++j)
    for (int i : spec.switch_sets[j]) out(j, i) = ev.cost[static_cast<std::size_t>(j) * m + i](n, k);
}

// sweeps of the monotone reflection map; values must start at the pre values
void reflect_in_place(std::span<double> values, const std::vector<std::vector<int>>& switch_sets,
                      const CostMatrix& costs) {
  int m = static_cast<int>(values.size());
  for (int sweep = 0;; ++sweep) {
    bool changed = false;
    for (int j = 0; j < m; ++j) {
      double best = values[j];
      for (int i : switch_sets[j]) best = std::max(best, values[i] - costs(j, i));
      if (best > values[j]) {
        values[j] = best;
        changed = true;
      }
    }
    if (!changed) return;
    if (sweep >= m + 1)
      throw Error(ErrorCode::ReflectionDiverged,
                  "oblique reflection still changing after " + std::to_string(m + 1) +
                      " sweeps; the spec must have slipped past validation");
  }
}

struct Workspace {
  std::vector<double> pre;
  std::vector<double> values;
  CostMatrix costs;
};

// driver step at one node for one mode: expectation + dt * (psi + H*)
double pre_value(const TriGrid<double>& Ynext_layer_of_mode, int n, int k, double dt,
                 double sqrt_dt, double psi_val, const AmbiguityModel& amb, double t, double x,
                 double* z_out) {
  double up = Ynext_layer_of_mode(n + 1, k + 1);
  double dn = Ynext_layer_of_mode(n + 1, k);
  double expectation = 0.5 * (up + dn);
  double z = (up - dn) / (2.0 * sqrt_dt);
  if (z_out) *z_out = z;
  double h = hstar(amb, t, x, z).value;
  return expectation + dt * (psi_val + h);
}

}  // namespace

ReflectResult reflect_layer(std::span<const double> pre_values,
                            const std::vector<std::vector<int>>& switch_sets,
                            const CostMatrix& costs) {
  ReflectResult r;
  r.values.assign(pre_values.begin(), pre_values.end());
  reflect_in_place(r.values, switch_sets, costs);
  r.increments.resize(pre_values.size());
  for (std::size_t j = 0; j < pre_values.size(); ++j) r.increments[j] = r.values[j] - pre_values[j];
  return r;
}

SolutionField solve_direct(const ProblemSpec& spec, const Lattice& lat) {
  int m = spec.modes;
  int N = lat.steps();
  double dt = lat.dt();
  double sdt = lat.sqrt_dt();
  EvaluatedSpec ev = evaluate_spec(spec, lat);

  SolutionField sol;
  sol.modes = m;
  sol.steps = N;
  sol.Y.assign(m, TriGrid<double>(N + 1));
  sol.Z.assign(m, TriGrid<double>(N));
  sol.dK.assign(m, TriGrid<double>(N));
  sol.info.method = "direct";
  sol.info.iterations = 1;

  for (int k = 0; k <= N; ++k)
    for (int j = 0; j < m; ++j) sol.Y[j](N, k) = ev.xi(j, k);

  Workspace ws;
  ws.pre.resize(m);
  ws.values.resize(m);
  ws.costs = CostMatrix(m);

  for (int n = N - 1; n >= 0; --n) {
    double t = lat.time(n);
    for (int k = 0; k <= n; ++k) {
      double x = lat.state(n, k);
      node_costs(ev, spec, n, k, ws.costs);
      for (int j = 0; j < m; ++j) {
        double z;
        ws.pre[j] = pre_value(sol.Y[j], n, k, dt, sdt, ev.psi[j](n, k), spec.ambiguity, t, x, &z);
        sol.Z[j](n, k) = z;
      }
      ws.values = ws.pre;
      reflect_in_place(ws.values, spec.switch_sets, ws.costs);
      for (int j = 0; j < m; ++j) {
        sol.Y[j](n, k) = ws.values[j];
        sol.dK[j](n, k) = ws.values[j] - ws.pre[j];
      }
    }
  }
  return sol;
}

SolutionField solve_picard(const ProblemSpec& spec, const Lattice& lat, double tol, int max_iter) {
  if (!(tol > 0.0)) throw Error(ErrorCode::RangeError, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorCode::RangeError, "max_iter must be >= 1");

  int m = spec.modes;
  int N = lat.steps();
  double dt = lat.dt();
  double sdt = lat.sqrt_dt();
  EvaluatedSpec ev = evaluate_spec(spec, lat);
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();

  auto solve_mode = [&](int j, const std::vector<TriGrid<double>>* frozen, TriGrid<double>& out) {
    // single-mode backward pass; when frozen is set, clip against the
    // obstacle built from the previous iterate at the same node
    for (int k = 0; k <= N; ++k) out(N, k) = ev.xi(j, k);
    for (int n = N - 1; n >= 0; --n) {
      double t = lat.time(n);
      for (int k = 0; k <= n; ++k) {
        double x = lat.state(n, k);
        double pre = pre_value(out, n, k, dt, sdt, ev.psi[j](n, k), spec.ambiguity, t, x, nullptr);
        double obstacle = neg_inf;
        if (frozen) {
          for (int i : spec.switch_sets[j])
            obstacle = std::max(obstacle, (*frozen)[i](n, k) -
                                              ev.cost[static_cast<std::size_t>(j) * m + i](n, k));
        }
        out(n, k) = std::max(pre, obstacle);
      }
    }
  };

  std::vector<TriGrid<double>> prev(m, TriGrid<double>(N + 1));
  std::vector<TriGrid<double>> cur(m, TriGrid<double>(N + 1));
  for (int j = 0; j < m; ++j) solve_mode(j, nullptr, prev[j]);

  SolveInfo info;
  info.method = "picard";
  info.tol = tol;
  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    for (int j = 0; j < m; ++j) solve_mode(j, &prev, cur[j]);
    PicardStep step;
    step.min_delta = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j)
      for (int n = 0; n <= N; ++n)
        for (int k = 0; k <= n; ++k) {
          double d = cur[j](n, k) - prev[j](n, k);
          step.sup_delta = std::max(step.sup_delta, std::fabs(d));
          step.min_delta = std::min(step.min_delta, d);
        }
    info.trace.push_back(step);
    info.iterations = it;
    std::swap(prev, cur);
    if (step.sup_delta < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NoConvergenceError("picard iteration still above tol " + std::to_string(tol) +
                                 " after " + std::to_string(max_iter) + " iterations",
                             std::move(info.trace));

  // final field: recompute Z and dK from the converged values
  SolutionField sol;
  sol.modes = m;
  sol.steps = N;
  sol.Y = std::move(prev);
  sol.Z.assign(m, TriGrid<double>(N));
  sol.dK.assign(m, TriGrid<double>(N));
  sol.info = std::move(info);
  for (int n = N - 1; n >= 0; --n) {
    double t = lat.time(n);
    for (int k = 0; k <= n; ++k) {
      double x = lat.state(n, k);
      for (int j = 0; j < m; ++j) {
        double z;
        double pre = pre_value(sol.Y[j], n, k, dt, sdt, ev.psi[j](n, k), spec.ambiguity, t, x, &z);
        sol.Z[j](n, k) = z;
        sol.dK[j](n, k) = std::max(sol.Y[j](n, k) - pre, 0.0);
      }
    }
  }
  return sol;
}

void write_solution_csv(std::ostream& out, const SolutionField& sol, const Lattice& lat) {
  out << "mode,n,k,t,x,Y,Z,dK\n";
  for (int j = 0; j < sol.modes; ++j) {
    for (int n = 0; n <= sol.steps; ++n) {
      for (int k = 0; k <= n; ++k) {
        out << (j + 1) << ',' << n << ',' << k << ',' << g17(lat.time(n)) << ','
            << g17(lat.state(n, k)) << ',' << g17(sol.Y[j](n, k)) << ',';
        if (n < sol.steps) {
          out << g17(sol.Z[j](n, k)) << ',' << g17(sol.dK[j](n, k));
        } else {
          out << ',';
        }
        out << '\n';
      }
    }
  }
}

}  // namespace optswitch
