#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace volcano {

using RealFunction = std::function<double(double)>;

/// Uniform grid x_i = x0 + i*dx, i = 0..n-1.
struct Grid {
  double x0 = 0.0;
  double dx = 0.0;
  std::size_t n = 0;

  /// Grid whose first and last points are exactly a and b; dx is adjusted
  /// downward so that (n-1)*dx == b - a.
  static Grid spanning(double a, double b, double dx);

  double at(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
  double back() const { return at(n - 1); }
};

struct GridFunction {
  Grid grid;
  std::vector<double> values;
  bool overflow = false;
};

GridFunction sample(const RealFunction& f, const Grid& grid);

/// Residual of psi'' + Q psi = 0 with a 5-point second-derivative stencil.
struct ResidualReport {
  double max_abs = 0.0;
  double l2 = 0.0;
  double normalized_by = 0.0;   // max |psi| on the grid
  double max_phase_step = 0.0;  // max sqrt(max(Q,0)) * dx
  std::size_t points = 0;

  double relative_max() const;
  double relative_l2() const;
};

struct QuadratureResult {
  double value = 0.0;
  double err_estimate = 0.0;
  int subdivisions = 0;
  bool converged = true;
};

enum class EndpointSingularity {
  None,
  /// f ~ 1/sqrt(x - a) and f ~ 1/sqrt(b - x); removed by x = m + r sin(t).
  InverseSqrt,
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;
  EndpointSingularity singularity = EndpointSingularity::None;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
///
/// On budget exhaustion the partial result is returned with converged=false;
/// no exception is thrown.
QuadratureResult quadrature(const RealFunction& f, double a, double b,
                            const QuadratureOptions& opts = {});

/// Single 15-point Kronrod panel, for callers that already control the
/// panel layout.
double kronrod15(const RealFunction& f, double a, double b);

/// Bisection on a sign-changing bracket; stops when the bracket is narrower
/// than x_tol.
double bisect(const RealFunction& f, double lo, double hi, double x_tol);

struct NumerovResult {
  GridFunction psi;
  /// Set when Q*dx^2 > 1 somewhere: the step does not resolve the local
  /// oscillation and the result is unreliable.
  bool coarse_step = false;
};

/// Numerov recursion for psi'' + Q(x) psi = 0 from the first two samples.
NumerovResult numerov_integrate(const RealFunction& q, const Grid& grid,
                                double psi0, double psi1);

/// Largest grid spacing accepted by the residual routines.
inline constexpr double kMaxResidualStep = 1e-2;

/// Residual on the interior points of a sampled function (the two points at
/// either end only feed the stencil).
ResidualReport residual(const GridFunction& psi, const RealFunction& q);

/// Residual at every grid point; psi is sampled two extra steps beyond each
/// end so the stencil is centred everywhere.
ResidualReport residual(const RealFunction& psi, const RealFunction& q,
                        const Grid& grid);

}  // namespace volcano
