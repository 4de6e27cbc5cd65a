#pragma once

#include <vector>

#include "optswitch/error.hpp"

namespace optswitch {

/// The set of drift rates the adversary may pick from. Either the interval
/// [-kappa, kappa] or an explicit finite list. The drift kernel is
/// b(t, x, u) = u in both cases.
struct AmbiguityModel {
  enum class Kind { KappaIgnorance, FiniteSet };

  Kind kind = Kind::KappaIgnorance;
  double kappa = 0.0;          // KappaIgnorance only, >= 0
  std::vector<double> values;  // FiniteSet only, non-empty

  bool contains(double u) const;
  /// sup over the set of |b|; the Lipschitz constant of the Hamiltonians in z.
  double max_drift() const;
};

struct HamiltonianResult {
  double value = 0.0;      // minimized Hamiltonian
  double minimizer = 0.0;  // a drift attaining it
};

/// z * b(t, x, u). Throws DriftOutOfSet if u is not in the prior set.
double hamiltonian(const AmbiguityModel& amb, double t, double x, double u, double z);

/// inf over the prior set of the Hamiltonian, with a deterministic selector:
/// -kappa*sign(z) (0 at z = 0) for the interval kind, first listed minimizer
/// for the finite kind. hamiltonian() at the returned minimizer reproduces
/// .value exactly.
HamiltonianResult hstar(const AmbiguityModel& amb, double t, double x, double z);

/// Control grid for the brute-force verifiers: a symmetric size-point grid
/// spanning [-kappa, kappa] with exact endpoints (the full list for the
/// finite kind, where size is ignored). size >= 2 unless the set is a point.
std::vector<double> drift_grid(const AmbiguityModel& amb, int size);

}  // namespace optswitch
