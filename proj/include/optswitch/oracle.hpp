#pragma once

#include <span>
#include <vector>

#include "optswitch/strategy.hpp"

namespace optswitch {

/// Output of the brute-force verifiers. These recompute everything from the
/// model data and the step-probability formula directly; they never call the
/// solver or the Hamiltonian helpers, so agreement with the solver is
/// evidence, not tautology.
struct OracleResult {
  std::vector<double> start_values;     // per-mode value at the root node
  std::vector<TriGrid<double>> values;  // full per-mode field
  Policy best_policy;                   // enumeration only
  bool has_best_policy = false;
  int grid_size = 0;
};

/// Zero-sum game dynamic program: at every node the adversary minimizes the
/// one-step expectation over the drift grid (probabilities enumerated
/// explicitly), and switching is folded in through the least-fixed-point
/// sweep. The grid must span the prior set's extreme points.
OracleResult game_dp(const ProblemSpec& spec, const Lattice& lat, std::span<const double> u_grid);

/// Worst-case (grid-adversary) value of one fixed policy, with the
/// node-wise minimizing control table.
struct PolicyValue {
  double value = 0.0;                   // start-mode, root-node value
  std::vector<double> start_values;     // per mode
  ControlTable control;                 // adversary's argmin choices
};
PolicyValue policy_worst_value(const ProblemSpec& spec, const Lattice& lat, const Policy& pol,
                               std::span<const double> u_grid);

/// Exhaustive maximum over all Markov action tables of the worst-case value.
/// Tables whose same-step switch chains loop are inadmissible (they pay a
/// positive cycle cost for nothing) and are skipped. Throws
/// SearchSpaceTooLarge beyond 2^20 tables.
OracleResult enumerate_policies(const ProblemSpec& spec, const Lattice& lat,
                                std::span<const double> u_grid);

}  // namespace optswitch
