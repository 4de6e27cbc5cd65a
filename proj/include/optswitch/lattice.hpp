#pragma once

#include <cstddef>
#include <vector>

#include "optswitch/ambiguity.hpp"
#include "optswitch/error.hpp"

namespace optswitch {

/// Triangular per-node storage: layer n holds entries k = 0..n.
template <typename T>
class TriGrid {
 public:
  TriGrid() = default;
  explicit TriGrid(int layers, T init = T{})
      : layers_(layers),
        data_(static_cast<std::size_t>(layers) * (layers + 1) / 2, init) {}

  T& operator()(int n, int k) { return data_[index(n, k)]; }
  const T& operator()(int n, int k) const { return data_[index(n, k)]; }

  int layers() const { return layers_; }

 private:
  static std::size_t index(int n, int k) {
    return static_cast<std::size_t>(n) * (n + 1) / 2 + k;
  }
  int layers_ = 0;
  std::vector<T> data_;
};

/// One-dimensional factor dynamics with constant coefficients.
struct FactorModel {
  enum class Kind { Arithmetic, Geometric };

  Kind kind = Kind::Arithmetic;
  double x0 = 0.0;
  double drift = 0.0;  // a
  double vol = 1.0;    // sigma > 0
};

/// Recombining binomial discretization of the factor over [0, T]: layer n has
/// n+1 nodes, the driving walk takes steps of +-sqrt(dt) with probability 1/2
/// each under the reference measure.
class Lattice {
 public:
  Lattice() = default;

  int steps() const { return steps_; }
  double horizon() const { return horizon_; }
  double dt() const { return dt_; }
  double sqrt_dt() const { return sqrt_dt_; }
  const FactorModel& factor() const { return factor_; }

  double time(int n) const { return n * dt_; }
  double state(int n, int k) const { return states_(n, k); }
  double walk(int n, int k) const { return (2.0 * k - n) * sqrt_dt_; }

 private:
  friend Lattice build_lattice(const FactorModel& factor, double horizon, int steps);

  int steps_ = 0;
  double horizon_ = 0.0;
  double dt_ = 0.0;
  double sqrt_dt_ = 0.0;
  FactorModel factor_;
  TriGrid<double> states_;
};

/// Throws BadStepCount for steps < 1 and RangeError for a non-positive
/// horizon or volatility (geometric also requires x0 > 0).
Lattice build_lattice(const FactorModel& factor, double horizon, int steps);

/// Probability of an up step under the drift u: (1 + u*sqrt(dt))/2. The
/// resulting one-step expectation reproduces the drift term z*u exactly.
/// Throws DriftOutOfSet if u is outside the prior set and StepTooCoarse when
/// |u|*sqrt(dt) >= 1 (the lattice needs more steps for this ambiguity level).
double controlled_up_probability(const Lattice& lat, const AmbiguityModel& amb, double u,
                                 double t, double x);

}  // namespace optswitch
