#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "optswitch/solver.hpp"

namespace optswitch {

/// Deterministic Markov action table over (time step, node, mode): stay or
/// switch to a mode from the switch set. The terminal layer always stays.
struct Policy {
  static constexpr int kStay = -1;

  int modes = 0;
  int steps = 0;
  std::vector<TriGrid<int>> action;  // kStay or a 0-based target mode

  Policy() = default;
  Policy(int modes_, int steps_)
      : modes(modes_), steps(steps_), action(modes_, TriGrid<int>(steps_ + 1, kStay)) {}

  bool stays(int n, int k, int j) const { return action[j](n, k) == kStay; }
  int target(int n, int k, int j) const { return action[j](n, k); }
};

/// Realized switching times and modes along one lattice path:
/// events[0] = (step 0, start mode), later events are the switches.
struct SwitchingStrategy {
  struct Event {
    int step = 0;
    int mode = 0;
  };
  std::vector<Event> events;
};

/// Node-wise adversarial drift choices.
struct ControlTable {
  int modes = 0;
  int steps = 0;
  std::vector<TriGrid<double>> u;  // defined for n < steps

  ControlTable() = default;
  ControlTable(int modes_, int steps_) : modes(modes_), steps(steps_), u(modes_, TriGrid<double>(steps_)) {}

  double at(int n, int k, int j) const { return u[j](n, k); }
};

/// Marks (n, k, j) as a switch when the value sits on its switch obstacle
/// within tol, targeting the smallest mode index attaining the obstacle.
Policy extract_policy(const ProblemSpec& spec, const Lattice& lat, const SolutionField& sol,
                      double tol = 1e-9);

/// The drift attaining the minimized Hamiltonian at each node's Z.
ControlTable worst_control(const ProblemSpec& spec, const Lattice& lat, const SolutionField& sol);

/// Resolves the switch chain a policy prescribes at one node (several
/// instantaneous switches collapse into one step). Throws InstantaneousCycle
/// if a mode repeats within the chain.
struct ChainResult {
  int mode = 0;      // mode after all same-step switches
  double cost = 0.0; // total switching cost paid at this node
};
ChainResult follow_switch_chain(const ProblemSpec& spec, const Policy& pol, int n, int k,
                                int start, double t, double x);

/// Walks a path of up (1) / down (0) moves, applying the policy.
SwitchingStrategy realize_strategy(const Policy& pol, std::span<const int> moves, int start_mode);

/// Random table: each state independently switches with probability 0.1 to a
/// uniformly drawn allowed target; same-step cycles are then broken by
/// demoting the closing switch to stay, so every chain terminates.
Policy random_policy(const ProblemSpec& spec, const Lattice& lat, std::uint64_t seed);

/// Random table with i.i.d. entries drawn uniformly from the given drift grid.
ControlTable random_control(const ProblemSpec& spec, const Lattice& lat,
                            std::span<const double> grid, std::uint64_t seed);

/// CSV `n,k,mode,action,target` (target empty for stay); 1-based modes.
void write_policy_csv(std::ostream& out, const Policy& pol);

/// CSV `n,k,mode,u`; 1-based modes.
void write_control_csv(std::ostream& out, const ControlTable& ctl);

}  // namespace optswitch
