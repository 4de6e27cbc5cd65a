#pragma once

// Shared helpers for the test suites: programmatic spec construction and a
// generator of randomized specs that are valid by construction (costs in
// [0.2, 0.35] with terminal offsets below 0.15 keep every validation check
// satisfied for any switch structure generated here).

#include <cstdint>
#include <string>
#include <vector>

#include "optswitch/csv.hpp"
#include "optswitch/lattice.hpp"
#include "optswitch/problem.hpp"
#include "optswitch/rng.hpp"

namespace testsupport {

using namespace optswitch;

struct SpecCase {
  ProblemSpec spec;
  int steps = 4;
  std::string text;
};

inline std::string spec_text(double T, int modes, int start_mode, const std::string& factor_block,
                             const std::string& ambiguity_block,
                             const std::vector<std::string>& psi, const std::vector<std::string>& xi,
                             const std::vector<std::vector<std::string>>& cost) {
  std::string s;
  s += "[problem]\nT = " + g17(T) + "\nmodes = " + std::to_string(modes) +
       "\nstart_mode = " + std::to_string(start_mode) + "\n\n";
  s += "[factor]\n" + factor_block + "\n";
  s += "[ambiguity]\n" + ambiguity_block + "\n";
  for (int j = 0; j < modes; ++j) {
    s += "[mode." + std::to_string(j + 1) + "]\npsi = \"" + psi[j] + "\"\nxi = \"" + xi[j] +
         "\"\n\n";
  }
  for (int j = 0; j < modes; ++j)
    for (int i = 0; i < modes; ++i)
      if (!cost[j][i].empty())
        s += "[cost." + std::to_string(j + 1) + "." + std::to_string(i + 1) + "]\nc = \"" +
             cost[j][i] + "\"\n\n";
  return s;
}

inline std::string kappa_block(double kappa) {
  return "kind = \"kappa_ignorance\"\nkappa = " + g17(kappa) + "\n";
}

inline std::string arithmetic_block(double x0, double a, double vol) {
  return "model = \"arithmetic\"\nx0 = " + g17(x0) + "\ndrift = " + g17(a) +
         "\nvol = " + g17(vol) + "\n";
}

inline std::string geometric_block(double x0, double a, double vol) {
  return "model = \"geometric\"\nx0 = " + g17(x0) + "\ndrift = " + g17(a) +
         "\nvol = " + g17(vol) + "\n";
}

/// Single mode, no switching: psi/xi given, kappa-ignorance ambiguity.
inline ProblemSpec single_mode_spec(const std::string& psi, const std::string& xi, double kappa,
                                    const std::string& factor_block = arithmetic_block(0, 0, 1),
                                    double T = 1.0) {
  return load_spec(spec_text(T, 1, 1, factor_block, kappa_block(kappa), {psi}, {xi}, {{""}}));
}

/// The hand-checkable two-mode instance: psi_1 = 0, psi_2 = 1, costs 0.1,
/// zero terminals, no ambiguity. Payoffs do not depend on x, so the optimal
/// value is found by enumerating deterministic switch times.
inline ProblemSpec deterministic_two_mode_spec() {
  return load_spec(spec_text(1.0, 2, 1, arithmetic_block(0, 0, 1), kappa_block(0.0), {"0", "1"},
                             {"0", "0"}, {{"", "0.1"}, {"0.1", ""}}));
}

/// Randomized spec that passes validation by construction. Switch structure:
/// every mode is either open (may switch to all others) or absorbing.
inline SpecCase random_valid_spec(std::uint64_t seed, int max_modes = 4, int min_steps = 4,
                                  int max_steps = 12, bool force_all_open = false) {
  RandomStream rng(seed, 77);
  SpecCase out;

  int m = 1 + rng.below(max_modes);
  out.steps = min_steps + rng.below(max_steps - min_steps + 1);
  double T = rng.uniform(0.5, 2.0);
  int start = 1 + rng.below(m);
  double kappa = rng.uniform01();

  std::string factor;
  if (rng.below(2) == 0)
    factor = arithmetic_block(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.5));
  else
    factor = geometric_block(rng.uniform(0.5, 2.0), rng.uniform(-0.3, 0.3), rng.uniform(0.1, 0.5));

  std::vector<std::string> psi(m), xi(m);
  auto random_psi = [&]() -> std::string {
    switch (rng.below(3)) {
      case 0: return g17(rng.uniform(-1.0, 1.0)) + " + " + g17(rng.uniform(-1.0, 1.0)) + "*x";
      case 1:
        return g17(rng.uniform(0.2, 1.0)) + "*max(x - " + g17(rng.uniform(-0.5, 1.5)) + ", 0) + " +
               g17(rng.uniform(-0.5, 0.5));
      default: return g17(rng.uniform(-1.0, 1.0));
    }
  };
  std::string xi_base;
  switch (rng.below(3)) {
    case 0: xi_base = "0"; break;
    case 1: xi_base = g17(rng.uniform(-0.5, 0.5)) + "*x"; break;
    default: xi_base = "max(x - " + g17(rng.uniform(-0.5, 1.5)) + ", 0)"; break;
  }
  for (int j = 0; j < m; ++j) {
    psi[j] = random_psi();
    // terminal offsets stay below the smallest cost so switching at the
    // horizon never pays
    xi[j] = "(" + xi_base + ") + " + g17(rng.uniform(0.0, 0.15));
  }

  std::vector<std::vector<std::string>> cost(m, std::vector<std::string>(m));
  for (int j = 0; j < m; ++j) {
    bool open = force_all_open || rng.uniform01() < 0.7;
    if (!open || m == 1) continue;
    for (int i = 0; i < m; ++i)
      if (i != j) cost[j][i] = g17(rng.uniform(0.2, 0.35));
  }

  out.text = spec_text(T, m, start, factor, kappa_block(kappa), psi, xi, cost);
  out.spec = load_spec(out.text);
  return out;
}

inline Lattice lattice_for(const SpecCase& c) {
  return build_lattice(c.spec.factor, c.spec.horizon, c.steps);
}

}  // namespace testsupport
