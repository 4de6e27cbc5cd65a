#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "optswitch/lattice.hpp"
#include "optswitch/problem.hpp"

namespace optswitch {

/// Switching costs evaluated at one lattice node; (j, i) is meaningful only
/// when i lies in the switch set of j.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(int modes) : modes_(modes), data_(static_cast<std::size_t>(modes) * modes) {}

  double& operator()(int j, int i) { return data_[static_cast<std::size_t>(j) * modes_ + i]; }
  double operator()(int j, int i) const { return data_[static_cast<std::size_t>(j) * modes_ + i]; }
  int modes() const { return modes_; }

 private:
  int modes_ = 0;
  std::vector<double> data_;
};

struct ReflectResult {
  std::vector<double> values;
  std::vector<double> increments;  // values - pre_values, all >= 0
};

/// Least fixed point above pre_values of y_j <- max(y_j, max_i(y_i - c_ji)),
/// computed by repeated sweeps in mode order. Under a validated spec this
/// settles within modes sweeps; throws ReflectionDiverged if change persists
/// after modes+1 sweeps.
ReflectResult reflect_layer(std::span<const double> pre_values,
                            const std::vector<std::vector<int>>& switch_sets,
                            const CostMatrix& costs);

struct PicardStep {
  double sup_delta = 0.0;  // max node-wise |change| against the previous iterate
  double min_delta = 0.0;  // most negative node-wise change (monotone run: >= -eps)
};

struct SolveInfo {
  std::string method;
  double tol = 0.0;
  int iterations = 0;
  std::vector<PicardStep> trace;
};

/// Per-mode, per-node solution of the discretized reflected system: values Y,
/// martingale coefficients Z and reflection increments dK (both defined for
/// n < steps).
struct SolutionField {
  int modes = 0;
  int steps = 0;
  std::vector<TriGrid<double>> Y;
  std::vector<TriGrid<double>> Z;
  std::vector<TriGrid<double>> dK;
  SolveInfo info;

  double start_value(const ProblemSpec& spec) const { return Y[spec.start_mode](0, 0); }
};

/// Backward induction, one time layer at a time: martingale part from the
/// symmetric step, driver psi_j + minimized Hamiltonian, then the oblique
/// reflection of the layer. Requires a spec that validates cleanly.
SolutionField solve_direct(const ProblemSpec& spec, const Lattice& lat);

/// Iterative construction: iterate 0 solves the unreflected backward
/// equations; iterate n reflects each mode against the obstacle frozen at
/// iterate n-1. Stops when the sup-norm change drops below tol; iterates are
/// node-wise non-decreasing and converge to the solve_direct field.
SolutionField solve_picard(const ProblemSpec& spec, const Lattice& lat, double tol = 1e-10,
                           int max_iter = 200);

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(std::string message, std::vector<PicardStep> trace)
      : Error(ErrorCode::NoConvergence, std::move(message)), trace_(std::move(trace)) {}
  const std::vector<PicardStep>& trace() const { return trace_; }

 private:
  std::vector<PicardStep> trace_;
};

/// CSV with header `mode,n,k,t,x,Y,Z,dK`, rows ordered by (mode, n, k);
/// Z and dK are empty in the terminal layer. Modes are 1-based.
void write_solution_csv(std::ostream& out, const SolutionField& sol, const Lattice& lat);

}  // namespace optswitch
