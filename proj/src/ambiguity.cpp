#include "optswitch/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace optswitch {

bool AmbiguityModel::contains(double u) const {
  if (kind == Kind::KappaIgnorance) return std::fabs(u) <= kappa;
  return std::find(values.begin(), values.end(), u) != values.end();
}

double AmbiguityModel::max_drift() const {
  if (kind == Kind::KappaIgnorance) return kappa;
  double m = 0.0;
  for (double u : values) m = std::max(m, std::fabs(u));
  return m;
}

double hamiltonian(const AmbiguityModel& amb, double /*t*/, double /*x*/, double u, double z) {
  if (!amb.contains(u))
    throw Error(ErrorCode::DriftOutOfSet, "drift " + std::to_string(u) + " outside the prior set");
  return z * u;
}

HamiltonianResult hstar(const AmbiguityModel& amb, double /*t*/, double /*x*/, double z) {
  HamiltonianResult r;
  if (amb.kind == AmbiguityModel::Kind::KappaIgnorance) {
    // inf over [-kappa, kappa] of z*u; z = 0 resolves to u* = 0
    if (z > 0.0) {
      r.minimizer = -amb.kappa;
      r.value = z * -amb.kappa;
    } else if (z < 0.0) {
      r.minimizer = amb.kappa;
      r.value = z * amb.kappa;
    } else {
      r.minimizer = 0.0;
      r.value = 0.0;
    }
    return r;
  }
  r.minimizer = amb.values.front();
  r.value = z * r.minimizer;
  for (std::size_t i = 1; i < amb.values.size(); ++i) {
    double cand = z * amb.values[i];
    if (cand < r.value) {  // strict: ties keep the first listed drift
      r.value = cand;
      r.minimizer = amb.values[i];
    }
  }
  return r;
}

std::vector<double> drift_grid(const AmbiguityModel& amb, int size) {
  if (amb.kind == AmbiguityModel::Kind::FiniteSet) return amb.values;
  if (amb.kappa == 0.0) return {0.0};
  if (size < 2)
    throw Error(ErrorCode::RangeError, "drift grid needs at least 2 points to span the interval");
  std::vector<double> grid(size);
  for (int i = 0; i < size; ++i) {
    // exact at the endpoints and at the center for odd sizes
    grid[i] = amb.kappa * (2.0 * i / (size - 1) - 1.0);
  }
  grid.front() = -amb.kappa;
  grid.back() = amb.kappa;
  return grid;
}

}  // namespace optswitch
