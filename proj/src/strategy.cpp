#include "optswitch/strategy.hpp"

#include <limits>
#include <ostream>
#include <string>

#include "optswitch/csv.hpp"
#include "optswitch/rng.hpp"

namespace optswitch {

Policy extract_policy(const ProblemSpec& spec, const Lattice& lat, const SolutionField& sol,
                      double tol) {
  Policy pol(spec.modes, sol.steps);
  for (int n = 0; n < sol.steps; ++n) {
    double t = lat.time(n);
    for (int k = 0; k <= n; ++k) {
      double x = lat.state(n, k);
      for (int j = 0; j < spec.modes; ++j) {
        if (spec.switch_sets[j].empty()) continue;
        double best = -std::numeric_limits<double>::infinity();
        int best_target = Policy::kStay;
        for (int i : spec.switch_sets[j]) {
          double cand = sol.Y[i](n, k) - spec.switch_cost(j, i, t, x);
          if (cand > best) {  // strict keeps the smallest index on ties
            best = cand;
            best_target = i;
          }
        }
        if (sol.Y[j](n, k) <= best + tol) pol.action[j](n, k) = best_target;
      }
    }
  }
  return pol;
}

ControlTable worst_control(const ProblemSpec& spec, const Lattice& lat, const SolutionField& sol) {
  ControlTable ctl(spec.modes, sol.steps);
  for (int n = 0; n < sol.steps; ++n) {
    double t = lat.time(n);
    for (int k = 0; k <= n; ++k) {
      double x = lat.state(n, k);
      for (int j = 0; j < spec.modes; ++j)
        ctl.u[j](n, k) = hstar(spec.ambiguity, t, x, sol.Z[j](n, k)).minimizer;
    }
  }
  return ctl;
}

ChainResult follow_switch_chain(const ProblemSpec& spec, const Policy& pol, int n, int k,
                                int start, double t, double x) {
  ChainResult r;
  r.mode = start;
  std::uint32_t visited = 1u << start;  // modes fit comfortably in a mask
  while (!pol.stays(n, k, r.mode)) {
    int next = pol.target(n, k, r.mode);
    if (visited & (1u << next))
      throw Error(ErrorCode::InstantaneousCycle,
                  "policy revisits mode " + std::to_string(next + 1) + " within step " +
                      std::to_string(n));
    r.cost += spec.switch_cost(r.mode, next, t, x);
    visited |= 1u << next;
    r.mode = next;
  }
  return r;
}

SwitchingStrategy realize_strategy(const Policy& pol, std::span<const int> moves, int start_mode) {
  SwitchingStrategy strat;
  strat.events.push_back({0, start_mode});
  int mode = start_mode;
  int k = 0;
  for (int n = 0; n <= pol.steps; ++n) {
    std::uint32_t visited = 1u << mode;
    while (!pol.stays(n, k, mode)) {
      int next = pol.target(n, k, mode);
      if (visited & (1u << next))
        throw Error(ErrorCode::InstantaneousCycle,
                    "policy revisits mode " + std::to_string(next + 1) + " within step " +
                        std::to_string(n));
      visited |= 1u << next;
      mode = next;
      strat.events.push_back({n, mode});
    }
    if (n < pol.steps) k += moves[n] ? 1 : 0;
  }
  return strat;
}

Policy random_policy(const ProblemSpec& spec, const Lattice& lat, std::uint64_t seed) {
  Policy pol(spec.modes, lat.steps());
  RandomStream rng(seed);
  for (int n = 0; n < lat.steps(); ++n) {
    for (int k = 0; k <= n; ++k) {
      for (int j = 0; j < spec.modes; ++j) {
        double roll = rng.uniform01();
        const auto& targets = spec.switch_sets[j];
        if (targets.empty() || roll >= 0.1) continue;
        pol.action[j](n, k) = targets[rng.below(static_cast<int>(targets.size()))];
      }
      // break same-step cycles: the switch that would close a loop stays
      for (int j = 0; j < spec.modes; ++j) {
        std::uint32_t visited = 1u << j;
        int cur = j;
        while (!pol.stays(n, k, cur)) {
          int next = pol.target(n, k, cur);
          if (visited & (1u << next)) {
            pol.action[cur](n, k) = Policy::kStay;
            break;
          }
          visited |= 1u << next;
          cur = next;
        }
      }
    }
  }
  return pol;
}

ControlTable random_control(const ProblemSpec& spec, const Lattice& lat,
                            std::span<const double> grid, std::uint64_t seed) {
  ControlTable ctl(spec.modes, lat.steps());
  RandomStream rng(seed, 1);
  for (int n = 0; n < lat.steps(); ++n)
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j < spec.modes; ++j)
        ctl.u[j](n, k) = grid[rng.below(static_cast<int>(grid.size()))];
  return ctl;
}

void write_policy_csv(std::ostream& out, const Policy& pol) {
  out << "n,k,mode,action,target\n";
  for (int n = 0; n <= pol.steps; ++n)
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j < pol.modes; ++j) {
        out << n << ',' << k << ',' << (j + 1) << ',';
        if (pol.stays(n, k, j))
          out << "stay,";
        else
          out << "switch," << (pol.target(n, k, j) + 1);
        out << '\n';
      }
}

void write_control_csv(std::ostream& out, const ControlTable& ctl) {
  out << "n,k,mode,u\n";
  for (int n = 0; n < ctl.steps; ++n)
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j < ctl.modes; ++j)
        out << n << ',' << k << ',' << (j + 1) << ',' << g17(ctl.at(n, k, j)) << '\n';
}

}  // namespace optswitch
