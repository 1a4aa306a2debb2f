#include "volcano/classical.hpp"

#include <cmath>
#include <limits>

#include "volcano/errors.hpp"
#include "volcano/numerics.hpp"

namespace volcano {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Outermost x > start with V(x) = E, for E below V(start) and V decreasing
// past start.
double outer_root(const CoshSechParams& params, double start, double energy) {
  const PotentialSpec spec = params;
  const auto gap = [&spec, energy](double x) { return eval_potential(spec, x) - energy; };
  double hi = start + 1.0;
  while (gap(hi) >= 0.0) hi = start + 2.0 * (hi - start);
  return bisect(gap, start, hi, 0.0);
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Oscillating: return "oscillating";
    case Regime::Escaping: return "escaping";
    case Regime::Separatrix: return "separatrix";
  }
  return "unknown";
}

double mechanical_energy(const CoshSechParams& params, double x, double v) {
  return 0.5 * v * v + eval_potential(params, x);
}

Regime classify_initial(const CoshSechParams& params, double x0, double v0,
                        double separatrix_tol) {
  const ExtremaInfo ext = extrema(params);
  const double energy = mechanical_energy(params, x0, v0);
  if (!ext.has_central_well) {
    // The origin is the top of the potential.
    if (std::abs(energy - ext.v_min) < separatrix_tol && x0 == 0.0) return Regime::Separatrix;
    return Regime::Escaping;
  }
  if (std::abs(energy - *ext.v_max) < separatrix_tol) return Regime::Separatrix;
  if (energy > *ext.v_max) return Regime::Escaping;
  const TurningPointSearch search = turning_points(params, energy);
  if (!search.points) return Regime::Escaping;
  // x0 may sit on the inner turning point itself (v0 = 0); allow for the root's rounding.
  const double x1 = search.points->x1;
  return std::abs(x0) <= x1 + 1e-9 * (1.0 + x1) ? Regime::Oscillating : Regime::Escaping;
}

RegionMap allowed_regions(const CoshSechParams& params, double energy) {
  if (!std::isfinite(energy)) throw InvalidArgument("energy must be finite");
  const ExtremaInfo ext = extrema(params);
  RegionMap map;
  map.energy = energy;
  const auto whole_line = [&map] {
    map.allowed = {{-kInf, kInf}};
    map.escape = map.allowed;
  };
  const auto outside = [&map](double xo) {
    map.allowed = {{-kInf, -xo}, {xo, kInf}};
    map.forbidden = {{-xo, xo}};
    map.escape = map.allowed;
  };

  if (!ext.has_central_well) {
    if (energy >= ext.v_min) {
      whole_line();
    } else {
      outside(outer_root(params, 0.0, energy));
    }
    return map;
  }
  const double v_max = *ext.v_max;
  if (energy >= v_max) {
    whole_line();
    return map;
  }
  if (energy < ext.v_min) {
    outside(outer_root(params, *ext.x_barrier, energy));
    return map;
  }
  const TurningPoints tp = *turning_points(params, energy).points;
  map.allowed = {{-kInf, -tp.x2}, {-tp.x1, tp.x1}, {tp.x2, kInf}};
  map.forbidden = {{-tp.x2, -tp.x1}, {tp.x1, tp.x2}};
  map.escape = {{-kInf, -tp.x2}, {tp.x2, kInf}};
  map.has_barrier_band = energy > ext.v_min;
  return map;
}

Trajectory integrate_trajectory(const CoshSechParams& params, double x0, double v0, double dt,
                                long n_steps, double horizon) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (n_steps < 1) throw InvalidArgument("n_steps must be at least 1");
  if (!std::isfinite(x0) || !std::isfinite(v0)) throw InvalidArgument("initial data must be finite");
  const PotentialSpec spec = params;

  Trajectory traj;
  traj.points.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.energies.reserve(static_cast<std::size_t>(n_steps) + 1);
  const double e0 = mechanical_energy(params, x0, v0);
  const double scale = e0 == 0.0 ? 1.0 : std::abs(e0);
  traj.points.push_back({x0, v0, 0.0});
  traj.energies.push_back(e0);

  double x = x0;
  double v = v0;
  double a = 0.0;
  try {
    a = -eval_force_gradient(spec, x);
  } catch (const OverflowError&) {
    traj.escaped = true;
    return traj;
  }
  for (long i = 1; i <= n_steps; ++i) {
    const double v_half = v + 0.5 * dt * a;
    x += dt * v_half;
    if (std::abs(x) > horizon) {
      traj.escaped = true;
      break;
    }
    try {
      a = -eval_force_gradient(spec, x);
    } catch (const OverflowError&) {
      traj.escaped = true;
      break;
    }
    v = v_half + 0.5 * dt * a;
    const double e = mechanical_energy(params, x, v);
    traj.points.push_back({x, v, static_cast<double>(i) * dt});
    traj.energies.push_back(e);
    traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(e - e0) / scale);
  }
  return traj;
}

double oscillation_period(const CoshSechParams& params, double energy) {
  const ExtremaInfo ext = extrema(params);
  if (!ext.has_central_well || !(energy > ext.v_min) || !(energy < *ext.v_max)) {
    throw InvalidArgument("oscillation_period needs v_min < E < v_max");
  }
  const double a1 = params.lower_a1();
  const double a2 = params.lower_a2();
  const double nu = params.nu;
  const double depth = energy - ext.v_min;
  // E - V = (E - v_min) - (V - v_min), with V - v_min written without cancellation.
  const auto gap = [=](double x) {
    const double t = std::tanh(x);
    return depth - (a2 * t * t - a1 * std::expm1(2.0 * nu * log_cosh(x)));
  };
  // The turning point of this gap function, so the integrand stays real up to the endpoints.
  const double x1 = bisect(gap, 0.0, *ext.x_barrier, 0.0);
  const auto inverse_speed = [&gap](double x) {
    const double g = gap(x);
    return g > 0.0 ? 1.0 / std::sqrt(2.0 * g) : 0.0;
  };
  QuadratureOptions opts;
  // Near the barrier top the gap is a small difference of O(1) terms.
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-10;
  opts.singularity = EndpointSingularity::InverseSqrt;
  const QuadratureResult r = quadrature(inverse_speed, -x1, x1, opts);
  if (!r.converged) throw ConvergenceError("period quadrature missed its tolerance");
  return 2.0 * r.value;
}

}  // namespace volcano
