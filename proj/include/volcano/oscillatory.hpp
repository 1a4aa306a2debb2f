#pragma once

#include "volcano/numerics.hpp"

namespace volcano {

/// Monotone phase theta(x) on x >= 0 with theta(0) = 0 and theta' > 0.
struct OscillationPhase {
  RealFunction theta;
  RealFunction rate;     // d theta / dx
  RealFunction inverse;  // theta^{-1}(y), y >= 0
};

/// Integrand split as f(x) = S(x) + C(x) cos theta(x) + D(x) sin theta(x),
/// where S, C, D vary slowly compared with theta.  `pointwise` must equal the
/// sum; it is what gets integrated wherever the oscillation is resolved.
struct OscillatoryIntegrand {
  RealFunction pointwise;
  RealFunction secular;
  RealFunction cos_amp;
  RealFunction sin_amp;
};

/// A point where theta is a multiple of pi, so sin theta = 0 and
/// cos theta = +-1 are known without evaluating trig functions of a large
/// argument.
struct PhaseNode {
  double x = 0.0;
  double cos_theta = 1.0;
};

struct OscillatoryOptions {
  /// Panels of width pi in theta are integrated directly up to
  /// theta = near_field_panels * pi; beyond that the oscillating part is
  /// integrated by parts asymptotically.
  int near_field_panels = 4096;
  double panel_rel_tol = 1e-12;
  double secular_rel_tol = 1e-13;
};

/// Quadrature for integrands that oscillate ever faster as x grows.
///
/// Near the origin the integrand is integrated panel by panel between
/// consecutive multiples of pi in theta.  Past the near field the secular
/// part S is integrated with ordinary adaptive quadrature and the oscillating
/// part through the integration-by-parts expansion
///   int g(theta) e^{i theta} dtheta = -i e^{i theta} (g + i g' - g'' + ...),
/// with g = (C - iD)/theta', truncated after the second derivative.
///
/// Oscillating terms whose amplitude g does not decay contribute a bounded,
/// non-convergent boundary term at a sharp cutoff.  Endpoints are therefore
/// always PhaseNodes, and the value "at infinity" is the limit taken along
/// phase nodes.
class OscillatoryQuadrature {
 public:
  OscillatoryQuadrature(OscillatoryIntegrand f, OscillationPhase phase,
                        OscillatoryOptions opts = {});

  /// Integral over [0, end.x].
  QuadratureResult integrate_to(const PhaseNode& end) const;

  /// Asymptotic estimate of the integral over [start.x, inf): adaptive
  /// quadrature of S plus the boundary term of the oscillating part.  Only
  /// meaningful for integrands whose secular part decays; accurate once
  /// theta(start.x) is large.
  QuadratureResult tail_from(const PhaseNode& start) const;

  /// Integral over [0, inf).
  QuadratureResult integrate_all() const;

  /// The x where theta first reaches near_field_panels * pi.
  PhaseNode near_field_edge() const;

 private:
  QuadratureResult panels_between(double theta_lo, double theta_hi, double x_end) const;
  QuadratureResult secular_between(double a, double b) const;
  QuadratureResult secular_to_infinity(double a) const;
  double boundary_term(const PhaseNode& node, double* err) const;

  OscillatoryIntegrand f_;
  OscillationPhase phase_;
  OscillatoryOptions opts_;
};

}  // namespace volcano
