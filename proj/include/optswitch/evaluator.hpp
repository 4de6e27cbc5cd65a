#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optswitch/rng.hpp"
#include "optswitch/strategy.hpp"

namespace optswitch {

struct EvalReport {
  std::string method;       // "exact" | "monte_carlo"
  double estimate = 0.0;
  double std_error = 0.0;   // 0 for the exact method
  long paths = 0;           // 0 for the exact method
  std::uint64_t seed = 0;

  /// single CSV row `method,estimate,stderr,paths,seed` (no header)
  std::string csv_row() const;
};

/// One sampled trajectory with its realized strategy and payoff parts.
struct PathSample {
  std::vector<int> moves;        // 1 = up, 0 = down, one per step
  std::vector<double> states;    // factor value at n = 0..steps
  SwitchingStrategy strategy;
  double running_payoff = 0.0;   // sum of psi dt (left endpoints)
  double switch_cost = 0.0;      // total cost of switches before the horizon
  double terminal_value = 0.0;   // terminal payoff of the final mode
  double girsanov_weight = 1.0;  // density of the drifted walk vs the symmetric one

  double payoff() const { return running_payoff - switch_cost + terminal_value; }
};

/// Value of the policy/control pair by backward induction over the lattice;
/// exact up to roundoff (std_error = 0).
EvalReport evaluate_exact(const ProblemSpec& spec, const Lattice& lat, const Policy& pol,
                          const ControlTable& ctl);

/// Monte Carlo under the drifted step probabilities; path p draws from an
/// independent stream derived from (seed, p), and the mean/variance use an
/// index-ordered pairwise reduction, so the report is reproducible.
EvalReport evaluate_mc(const ProblemSpec& spec, const Lattice& lat, const Policy& pol,
                       const ControlTable& ctl, long paths, std::uint64_t seed);

/// Samples a single trajectory from the given stream.
PathSample simulate_path(const ProblemSpec& spec, const Lattice& lat, const Policy& pol,
                         const ControlTable& ctl, RandomStream& stream);

/// Deterministic pairwise summation in index order.
double pairwise_sum(const std::vector<double>& values);

}  // namespace optswitch
