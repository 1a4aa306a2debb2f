#include "volcano/integrands.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "volcano/errors.hpp"

namespace volcano {

namespace {

constexpr double kPi = std::numbers::pi;
// Beyond this phase consecutive multiples of pi are no longer resolved by
// the double-precision x they map to.
constexpr double kPhaseResolutionLimit = 1125899906842624.0;  // 2^50

struct Pieces {
  RealFunction s;
  RealFunction c;
  RealFunction d;
};

Pieces decompose(const ExactState& state, Density density) {
  const double n2 = state.norm_const() * state.norm_const();
  const double p = state.parity() == Parity::Even ? 1.0 : -1.0;
  const double nu = state.nu();
  const double big_a1 = state.big_a1();
  const double root_a1 = std::sqrt(big_a1);
  const double a1 = 0.5 * big_a1;
  const double a2 = 0.5 * state.big_a2();
  const RealFunction zero = [](double) { return 0.0; };

  const auto cn = [nu](double x) { return cosh_pow(x, -nu); };
  const auto cp = [nu](double x) { return cosh_pow(x, nu); };
  const auto sech2 = [](double x) { return cosh_pow(x, -2.0); };

  switch (density) {
    case Density::Probability:
    case Density::Position:
    case Density::PositionSq: {
      const int power = density == Density::Probability ? 0 : (density == Density::Position ? 1 : 2);
      const auto weight = [power](double x) { return power == 0 ? 1.0 : (power == 1 ? x : x * x); };
      return {[=](double x) { return weight(x) * 0.5 * n2 * cn(x); },
              [=](double x) { return weight(x) * 0.5 * p * n2 * cn(x); }, zero};
    }
    case Density::Current:
      return {[=](double x) { return -n2 * 0.25 * nu * std::tanh(x) * cn(x); },
              [=](double x) { return -p * n2 * 0.25 * nu * std::tanh(x) * cn(x); },
              [=](double) { return -0.5 * p * root_a1 * n2; }};
    case Density::GradientSq:
    case Density::Kinetic: {
      const double k = density == Density::Kinetic ? 0.5 : 1.0;
      return {[=](double x) {
                const double t = std::tanh(x);
                return k * n2 * (nu * nu / 8.0 * t * t * cn(x) + 0.5 * big_a1 * cp(x));
              },
              [=](double x) {
                const double t = std::tanh(x);
                return k * p * n2 * (nu * nu / 8.0 * t * t * cn(x) - 0.5 * big_a1 * cp(x));
              },
              [=](double x) { return k * p * n2 * 0.5 * nu * root_a1 * std::tanh(x); }};
    }
    case Density::Potential: {
      const auto s = [=](double x) { return -0.5 * n2 * (a1 * cp(x) + a2 * sech2(x) * cn(x)); };
      return {s, [=](double x) { return p * s(x); }, zero};
    }
    case Density::Hamiltonian: {
      const auto slow = [=](double x) {
        const double t = std::tanh(x);
        return n2 * cn(x) * (nu * nu / 16.0 * t * t - 0.5 * a2 * sech2(x));
      };
      return {slow, [=](double x) { return p * (slow(x) - n2 * 0.5 * big_a1 * cp(x)); },
              [=](double x) { return p * n2 * 0.25 * nu * root_a1 * std::tanh(x); }};
    }
  }
  throw InvalidArgument("unknown density");
}

RealFunction pointwise(const ExactState& state, Density density) {
  const CoshSechParams potential = state.potential();
  switch (density) {
    case Density::Probability:
      return [state](double x) { return state(x) * state(x); };
    case Density::Position:
      return [state](double x) { return x * state(x) * state(x); };
    case Density::PositionSq:
      return [state](double x) { return x * x * state(x) * state(x); };
    case Density::Current:
      return [state](double x) { return state(x) * state.derivative(x); };
    case Density::GradientSq:
      return [state](double x) {
        const double d = state.derivative(x);
        return d * d;
      };
    case Density::Kinetic:
      return [state](double x) {
        const double d = state.derivative(x);
        return 0.5 * d * d;
      };
    case Density::Potential:
      return [state, potential](double x) {
        const double psi = state(x);
        return eval_potential(potential, x) * psi * psi;
      };
    case Density::Hamiltonian:
      return [state, potential](double x) {
        const double psi = state(x);
        const double d = state.derivative(x);
        return 0.5 * d * d + eval_potential(potential, x) * psi * psi;
      };
  }
  throw InvalidArgument("unknown density");
}

}  // namespace

OscillationPhase state_phase(const ExactState& state) {
  const double scale = 2.0 * std::sqrt(state.big_a1());
  return {[state, scale](double x) { return scale * state.phase()(x); },
          [state, scale](double x) { return scale * state.phase().derivative(x); },
          [state, scale](double y) { return state.phase().inverse(y / scale); }};
}

OscillatoryIntegrand state_integrand(const ExactState& state, Density density, bool mirrored) {
  Pieces pieces = decompose(state, density);
  RealFunction f = pointwise(state, density);
  if (!mirrored) return {std::move(f), std::move(pieces.s), std::move(pieces.c), std::move(pieces.d)};
  // cos theta is even and sin theta odd in x.
  return {[f](double y) { return f(-y); }, [s = pieces.s](double y) { return s(-y); },
          [c = pieces.c](double y) { return c(-y); }, [d = pieces.d](double y) { return -d(-y); }};
}

PhaseNode node_near(const ExactState& state, double x) {
  if (!(x >= 0.0)) throw InvalidArgument("node_near needs x >= 0");
  const bool even = state.parity() == Parity::Even;
  const double scale = 2.0 * std::sqrt(state.big_a1());
  double theta = 0.0;
  try {
    theta = scale * state.phase()(x);
  } catch (const OverflowError&) {
    theta = std::numeric_limits<double>::infinity();
  }
  if (theta > kPhaseResolutionLimit) return {x, even ? -1.0 : 1.0};
  auto m = static_cast<long long>(std::floor(theta / kPi));
  if ((m % 2 != 0) != even) --m;
  if (m < (even ? 1 : 0)) m = even ? 1 : 0;
  const double node = state.phase().inverse(static_cast<double>(m) * kPi / scale);
  return {node, (m % 2 != 0) ? -1.0 : 1.0};
}

}  // namespace volcano
