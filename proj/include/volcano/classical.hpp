#pragma once

#include <vector>

#include "volcano/potential.hpp"

namespace volcano {

struct PhasePoint {
  double x = 0.0;
  double v = 0.0;
  double t = 0.0;
};

enum class Regime { Oscillating, Escaping, Separatrix };

std::string to_string(Regime r);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  // may be +-infinity
};

/// Where a particle of energy E may be found.  `escape` lists the allowed
/// intervals that reach infinity.  `has_barrier_band` is set exactly when
/// v_min < E < v_max, i.e. when a forbidden band separates the well from
/// the outside.
struct RegionMap {
  double energy = 0.0;
  std::vector<Interval> allowed;
  std::vector<Interval> forbidden;
  std::vector<Interval> escape;
  bool has_barrier_band = false;
};

inline constexpr double kDefaultHorizon = 20.0;
inline constexpr double kDefaultSeparatrixTolerance = 1e-9;

double mechanical_energy(const CoshSechParams& params, double x, double v);

/// Requires Case I parameters.
Regime classify_initial(const CoshSechParams& params, double x0, double v0,
                        double separatrix_tol = kDefaultSeparatrixTolerance);

RegionMap allowed_regions(const CoshSechParams& params, double energy);

struct Trajectory {
  std::vector<PhasePoint> points;
  std::vector<double> energies;
  bool escaped = false;
  /// max |E(t) - E(0)| / |E(0)| (absolute when E(0) = 0).
  double max_energy_drift = 0.0;
};

/// Velocity Verlet for x'' = -V'(x).  Stops early, with escaped set, once
/// |x| passes the horizon or the force overflows.
Trajectory integrate_trajectory(const CoshSechParams& params, double x0, double v0, double dt,
                                long n_steps, double horizon = kDefaultHorizon);

/// T = 2 int_{-x1}^{x1} dx / sqrt(2 (E - V)), requires v_min < E < v_max.
double oscillation_period(const CoshSechParams& params, double energy);

}  // namespace volcano
