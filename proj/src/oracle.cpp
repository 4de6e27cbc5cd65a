#include "optswitch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace optswitch {

namespace {

constexpr std::uint64_t kMaxTables = 1ull << 20;

struct NodeData {
  int modes = 0;
  int steps = 0;
  double dt = 0.0;
  double sqrt_dt = 0.0;
  std::vector<TriGrid<double>> psi;
  std::vector<TriGrid<double>> cost;  // (j*m + i) where defined
  std::vector<double> xi_terminal;    // per terminal node * mode

  double xi(int j, int k) const { return xi_terminal[static_cast<std::size_t>(k) * modes + j]; }
  double cost_at(int j, int i, int n, int k) const {
    return cost[static_cast<std::size_t>(j) * modes + i](n, k);
  }
};

NodeData tabulate(const ProblemSpec& spec, const Lattice& lat) {
  NodeData d;
  d.modes = spec.modes;
  d.steps = lat.steps();
  d.dt = lat.dt();
  d.sqrt_dt = lat.sqrt_dt();
  int m = spec.modes;
  int N = lat.steps();
  d.psi.assign(m, TriGrid<double>(N + 1));
  d.cost.assign(static_cast<std::size_t>(m) * m, TriGrid<double>());
  for (int j = 0; j < m; ++j)
    for (int i : spec.switch_sets[j])
      d.cost[static_cast<std::size_t>(j) * m + i] = TriGrid<double>(N + 1);
  for (int n = 0; n <= N; ++n) {
    double t = lat.time(n);
    for (int k = 0; k <= n; ++k) {
      double x = lat.state(n, k);
      for (int j = 0; j < m; ++j) {
        d.psi[j](n, k) = spec.psi[j].eval(t, x);
        for (int i : spec.switch_sets[j])
          d.cost[static_cast<std::size_t>(j) * m + i](n, k) = spec.cost[j][i]->eval(t, x);
      }
    }
  }
  d.xi_terminal.resize(static_cast<std::size_t>(N + 1) * m);
  double T = lat.time(N);
  for (int k = 0; k <= N; ++k)
    for (int j = 0; j < m; ++j)
      d.xi_terminal[static_cast<std::size_t>(k) * m + j] = spec.xi[j].eval(T, lat.state(N, k));
  return d;
}

void check_grid(const ProblemSpec& spec, std::span<const double> u_grid, double sqrt_dt) {
  if (u_grid.empty()) throw Error(ErrorCode::RangeError, "drift grid is empty");
  for (double u : u_grid)
    if (std::fabs(u) * sqrt_dt >= 1.0)
      throw Error(ErrorCode::StepTooCoarse, "|u|*sqrt(dt) = " +
                                                std::to_string(std::fabs(u) * sqrt_dt) +
                                                " >= 1; increase the step count");
  const AmbiguityModel& amb = spec.ambiguity;
  if (amb.kind == AmbiguityModel::Kind::KappaIgnorance && amb.kappa > 0.0) {
    double lo = *std::min_element(u_grid.begin(), u_grid.end());
    double hi = *std::max_element(u_grid.begin(), u_grid.end());
    if (lo != -amb.kappa || hi != amb.kappa)
      throw Error(ErrorCode::RangeError, "drift grid must contain both interval endpoints");
  }
}

// adversary's one-step value: min over the grid of the shifted expectation
double worst_expectation(std::span<const double> u_grid, double sqrt_dt, double up, double dn,
                         double* best_u) {
  double best = std::numeric_limits<double>::infinity();
  for (double u : u_grid) {
    double p = 0.5 * (1.0 + u * sqrt_dt);
    double cand = p * up + (1.0 - p) * dn;
    if (cand < best) {
      best = cand;
      if (best_u) *best_u = u;
    }
  }
  return best;
}

// least fixed point of the switch-max map, written out locally
void settle_switches(std::vector<double>& values, const ProblemSpec& spec, const NodeData& d,
                     int n, int k) {
  int m = d.modes;
  for (int sweep = 0;; ++sweep) {
    bool changed = false;
    for (int j = 0; j < m; ++j) {
      double best = values[j];
      for (int i : spec.switch_sets[j]) best = std::max(best, values[i] - d.cost_at(j, i, n, k));
      if (best > values[j]) {
        values[j] = best;
        changed = true;
      }
    }
    if (!changed) return;
    if (sweep >= m + 1)
      throw Error(ErrorCode::ReflectionDiverged, "switch-max sweep did not settle");
  }
}

}  // namespace

OracleResult game_dp(const ProblemSpec& spec, const Lattice& lat, std::span<const double> u_grid) {
  NodeData d = tabulate(spec, lat);
  check_grid(spec, u_grid, d.sqrt_dt);
  int m = d.modes;
  int N = d.steps;

  OracleResult result;
  result.grid_size = static_cast<int>(u_grid.size());
  result.values.assign(m, TriGrid<double>(N + 1));
  for (int k = 0; k <= N; ++k)
    for (int j = 0; j < m; ++j) result.values[j](N, k) = d.xi(j, k);

  std::vector<double> layer(m);
  for (int n = N - 1; n >= 0; --n) {
    for (int k = 0; k <= n; ++k) {
      for (int j = 0; j < m; ++j) {
        double inner = worst_expectation(u_grid, d.sqrt_dt, result.values[j](n + 1, k + 1),
                                         result.values[j](n + 1, k), nullptr);
        layer[j] = inner + d.psi[j](n, k) * d.dt;
      }
      settle_switches(layer, spec, d, n, k);
      for (int j = 0; j < m; ++j) result.values[j](n, k) = layer[j];
    }
  }
  result.start_values.resize(m);
  for (int j = 0; j < m; ++j) result.start_values[j] = result.values[j](0, 0);
  return result;
}

namespace {

// worst-case DP for one fixed action table; returns false if some reachable
// chain loops within a step (the table is inadmissible)
bool eval_policy(const ProblemSpec& spec, const NodeData& d, const Policy& pol,
                 std::span<const double> u_grid, std::vector<TriGrid<double>>& W,
                 ControlTable* control) {
  int m = d.modes;
  int N = d.steps;
  for (int k = 0; k <= N; ++k)
    for (int j = 0; j < m; ++j) W[j](N, k) = d.xi(j, k);

  for (int n = N - 1; n >= 0; --n) {
    for (int k = 0; k <= n; ++k) {
      // adversary's reply per landing mode
      for (int j = 0; j < m; ++j) {
        double u_best = u_grid[0];
        double inner = worst_expectation(u_grid, d.sqrt_dt, W[j](n + 1, k + 1), W[j](n + 1, k),
                                         &u_best);
        W[j](n, k) = inner + d.psi[j](n, k) * d.dt;  // provisional: value when landing on j
        if (control) control->u[j](n, k) = u_best;
      }
      // chains resolve against the landing values; a loop disqualifies the table
      for (int j = 0; j < m; ++j) {
        if (pol.stays(n, k, j)) continue;
        int cur = j;
        double cost = 0.0;
        std::uint32_t visited = 1u << j;
        while (!pol.stays(n, k, cur)) {
          int next = pol.target(n, k, cur);
          if (visited & (1u << next)) return false;
          cost += d.cost_at(cur, next, n, k);
          visited |= 1u << next;
          cur = next;
        }
        W[j](n, k) = W[cur](n, k) - cost;
      }
    }
  }
  return true;
}

}  // namespace

PolicyValue policy_worst_value(const ProblemSpec& spec, const Lattice& lat, const Policy& pol,
                               std::span<const double> u_grid) {
  NodeData d = tabulate(spec, lat);
  check_grid(spec, u_grid, d.sqrt_dt);
  std::vector<TriGrid<double>> W(d.modes, TriGrid<double>(d.steps + 1));
  PolicyValue pv;
  pv.control = ControlTable(d.modes, d.steps);
  if (!eval_policy(spec, d, pol, u_grid, W, &pv.control))
    throw Error(ErrorCode::InstantaneousCycle, "action table loops within a step");
  pv.start_values.resize(d.modes);
  for (int j = 0; j < d.modes; ++j) pv.start_values[j] = W[j](0, 0);
  pv.value = pv.start_values[spec.start_mode];
  return pv;
}

OracleResult enumerate_policies(const ProblemSpec& spec, const Lattice& lat,
                                std::span<const double> u_grid) {
  NodeData d = tabulate(spec, lat);
  check_grid(spec, u_grid, d.sqrt_dt);
  int m = d.modes;
  int N = d.steps;

  // choice states: (n, k, j) with n < N and a non-empty switch set
  struct State {
    int n, k, j;
  };
  std::vector<State> states;
  std::uint64_t total = 1;
  for (int n = 0; n < N; ++n)
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j < m; ++j) {
        if (spec.switch_sets[j].empty()) continue;
        states.push_back({n, k, j});
        total *= spec.switch_sets[j].size() + 1;
        if (total > kMaxTables)
          throw Error(ErrorCode::SearchSpaceTooLarge,
                      "more than 2^20 action tables; shrink the lattice or the mode count");
      }

  OracleResult result;
  result.grid_size = static_cast<int>(u_grid.size());
  result.start_values.assign(m, -std::numeric_limits<double>::infinity());
  result.best_policy = Policy(m, N);
  result.has_best_policy = true;

  Policy pol(m, N);
  std::vector<int> digits(states.size(), 0);
  std::vector<TriGrid<double>> W(m, TriGrid<double>(N + 1));
  double best_start = -std::numeric_limits<double>::infinity();

  for (std::uint64_t index = 0;; ++index) {
    if (eval_policy(spec, d, pol, u_grid, W, nullptr)) {
      for (int j = 0; j < m; ++j)
        result.start_values[j] = std::max(result.start_values[j], W[j](0, 0));
      if (W[spec.start_mode](0, 0) > best_start) {  // first maximum wins ties
        best_start = W[spec.start_mode](0, 0);
        result.best_policy = pol;
        result.values = W;
      }
    }
    // next table in lexicographic order: digit 0 = stay, then targets ascending
    std::size_t pos = 0;
    while (pos < states.size()) {
      const State& s = states[pos];
      const auto& targets = spec.switch_sets[s.j];
      if (++digits[pos] <= static_cast<int>(targets.size())) {
        pol.action[s.j](s.n, s.k) = targets[digits[pos] - 1];
        break;
      }
      digits[pos] = 0;
      pol.action[s.j](s.n, s.k) = Policy::kStay;
      ++pos;
    }
    if (pos == states.size()) break;
  }
  return result;
}

}  // namespace optswitch
