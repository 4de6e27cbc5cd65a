#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optswitch/ambiguity.hpp"
#include "optswitch/expr.hpp"
#include "optswitch/lattice.hpp"

namespace optswitch {

/// Full definition of a multi-mode switching problem: horizon, per-mode
/// running utilities and terminal payoffs, switching costs over the allowed
/// switch sets, factor dynamics, and the drift ambiguity set.
///
/// Modes are 0-based in memory; files and CSV use 1-based indices.
struct ProblemSpec {
  double horizon = 1.0;
  int modes = 1;
  int start_mode = 0;

  std::vector<Expr> psi;  // running utility per mode, psi_j(t, x)
  std::vector<Expr> xi;   // terminal payoff per mode, xi_j(x) at t = T

  // switch_sets[j] lists the modes reachable from j (sorted, never contains j);
  // cost[j][i] is defined exactly when i is in switch_sets[j]
  std::vector<std::vector<int>> switch_sets;
  std::vector<std::vector<std::optional<Expr>>> cost;

  FactorModel factor;
  AmbiguityModel ambiguity;

  bool can_switch(int j, int i) const { return cost[j][i].has_value(); }
  double switch_cost(int j, int i, double t, double x) const { return cost[j][i]->eval(t, x); }
};

enum class Severity { Error, Warning };

enum class FindingCode {
  NegativeCost,
  FreeLoop,
  NotClosed,
  TriangleViolated,
  TerminalInconsistent,
  StepTooCoarse,
};

const char* finding_code_name(FindingCode code);

struct Finding {
  Severity severity = Severity::Error;
  FindingCode code = FindingCode::NegativeCost;
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const {
    for (const auto& f : findings)
      if (f.severity == Severity::Error) return false;
    return true;
  }
};

/// Parses the problem file format (sections [problem] [factor] [ambiguity]
/// [mode.<j>] [cost.<j>.<i>], '#' comments). Throws FormatError, ExprError
/// or RangeError.
ProblemSpec load_spec(std::string_view text);

/// Node-wise checks of everything the solver relies on: non-negative costs,
/// strictly positive cost around every directed switch cycle, closure and
/// strict triangle inequality of the switch structure, and terminal
/// consistency. Warn-only check: step coarseness against the ambiguity level.
ValidationReport validate(const ProblemSpec& spec, const Lattice& lat);

}  // namespace optswitch
