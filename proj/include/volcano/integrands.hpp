#pragma once

#include "volcano/exact.hpp"
#include "volcano/oscillatory.hpp"

namespace volcano {

/// Bilinear densities of an exact state.
enum class Density {
  Probability,   // psi^2
  Position,      // x psi^2
  PositionSq,    // x^2 psi^2
  Current,       // psi psi'
  GradientSq,    // psi'^2
  Kinetic,       // psi'^2 / 2
  Potential,     // V psi^2
  Hamiltonian,   // psi'^2 / 2 + V psi^2
};

/// theta(x) = 2 sqrt(A1) F(x).  Squares of the state oscillate as cos theta.
OscillationPhase state_phase(const ExactState& state);

/// The density on x >= 0, split into secular and oscillating parts.  With
/// mirrored = true it is the density at -x, so integrating it over [0, L]
/// gives the integral over [-L, 0].
OscillatoryIntegrand state_integrand(const ExactState& state, Density density,
                                     bool mirrored = false);

/// The last zero of the state at or below x, or the first zero when x
/// precedes it (theta an odd multiple of pi for even states, an even
/// multiple for odd ones).  Far out, where theta is
/// past 2^50, x itself is returned with the node's cos theta.
PhaseNode node_near(const ExactState& state, double x);

}  // namespace volcano
