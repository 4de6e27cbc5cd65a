#include "optswitch/lattice.hpp"

#include <cmath>
#include <string>

namespace optswitch {

Lattice build_lattice(const FactorModel& factor, double horizon, int steps) {
  if (steps < 1)
    throw Error(ErrorCode::BadStepCount, "need at least 1 step, got " + std::to_string(steps));
  if (!(horizon > 0.0)) throw Error(ErrorCode::RangeError, "horizon must be positive");
  if (!(factor.vol > 0.0)) throw Error(ErrorCode::RangeError, "volatility must be positive");
  if (factor.kind == FactorModel::Kind::Geometric && !(factor.x0 > 0.0))
    throw Error(ErrorCode::RangeError, "geometric factor requires x0 > 0");

  Lattice lat;
  lat.steps_ = steps;
  lat.horizon_ = horizon;
  lat.dt_ = horizon / steps;
  lat.sqrt_dt_ = std::sqrt(lat.dt_);
  lat.factor_ = factor;
  lat.states_ = TriGrid<double>(steps + 1);

  for (int n = 0; n <= steps; ++n) {
    double t = n * lat.dt_;
    for (int k = 0; k <= n; ++k) {
      double w = (2.0 * k - n) * lat.sqrt_dt_;
      double x;
      if (factor.kind == FactorModel::Kind::Arithmetic) {
        x = factor.x0 + factor.drift * t + factor.vol * w;
      } else {
        x = factor.x0 * std::exp((factor.drift - 0.5 * factor.vol * factor.vol) * t + factor.vol * w);
      }
      lat.states_(n, k) = x;
    }
  }
  return lat;
}

double controlled_up_probability(const Lattice& lat, const AmbiguityModel& amb, double u,
                                 double /*t*/, double /*x*/) {
  if (!amb.contains(u))
    throw Error(ErrorCode::DriftOutOfSet, "drift " + std::to_string(u) + " outside the prior set");
  if (std::fabs(u) * lat.sqrt_dt() >= 1.0)
    throw Error(ErrorCode::StepTooCoarse,
                "|u|*sqrt(dt) = " + std::to_string(std::fabs(u) * lat.sqrt_dt()) +
                    " >= 1; increase the step count");
  return 0.5 * (1.0 + u * lat.sqrt_dt());
}

}  // namespace optswitch
