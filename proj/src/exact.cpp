#include "volcano/exact.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "volcano/errors.hpp"
#include "volcano/integrands.hpp"
#include "volcano/oscillatory.hpp"

namespace volcano {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLogMax = std::log(std::numeric_limits<double>::max());

// Table spacing and reach for non-integer nu.  Past kTableEnd,
// (1 + e^{-2x})^nu == 1 in double precision.
constexpr double kTableStep = 0.125;
constexpr double kTableEnd = 40.0;
constexpr double kMaxIntegerNu = 64.0;

void require_state_params(double nu, double big_a1) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw InvalidArgument("nu must be positive for the state to stay finite");
  }
  if (!(big_a1 > 0.0) || !std::isfinite(big_a1)) {
    throw InvalidArgument("A1 must be positive and finite");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Panels are at most kTableStep wide, far narrower than the distance to
// the nearest complex singularity of cosh^nu (i pi / 2), so one
// 15-point Kronrod rule is exact to rounding.
double cosh_nu_panel(double nu, double a, double b) {
  return kronrod15([nu](double t) { return cosh_pow(t, nu); }, a, b);
}

}  // namespace

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

Parity parity_from_string(const std::string& s) {
  if (s == "even" || s == "1") return Parity::Even;
  if (s == "odd" || s == "2") return Parity::Odd;
  throw InvalidArgument("unknown parity '" + s + "' (expected even or odd)");
}

ConstraintParams constraint_params(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw InvalidArgument("nu must be positive for the state to stay finite");
  }
  return {0.5 * nu * (0.5 * nu + 1.0), -0.25 * nu * nu};
}

double eigen_energy(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw InvalidArgument("nu must be positive for the state to stay finite");
  }
  return -nu * nu / 8.0;
}

PhaseIntegral::PhaseIntegral(double nu) : nu_(nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidArgument("phase integral needs nu > 0");
  integer_ = nu == std::round(nu) && nu <= kMaxIntegerNu;
  if (integer_) return;
  const double top = std::min(kTableEnd, 700.0 / nu);
  const auto panels = static_cast<std::size_t>(std::floor(top / kTableStep));
  table_.assign(panels + 1, 0.0);
  for (std::size_t k = 1; k <= panels; ++k) {
    table_[k] = table_[k - 1] +
                cosh_nu_panel(nu, (k - 1) * kTableStep, static_cast<double>(k) * kTableStep);
  }
}

double PhaseIntegral::positive(double x) const {
  if (x == 0.0) return 0.0;
  if (integer_) {
    const int n = static_cast<int>(nu_);
    const double c = std::cosh(x);
    const double s = std::sinh(x);
    double value = (n % 2 == 0) ? x : s;
    for (int m = (n % 2 == 0) ? 2 : 3; m <= n; m += 2) {
      value = std::pow(c, m - 1) * s / m + (m - 1.0) / m * value;
    }
    if (!std::isfinite(value)) {
      throw OverflowError("phase integral overflows at x = " + fmt(x));
    }
    return value;
  }

  const double top = static_cast<double>(table_.size() - 1) * kTableStep;
  if (x <= top || top < kTableEnd) {
    const auto k = std::min(static_cast<std::size_t>(std::floor(x / kTableStep)),
                            table_.size() - 1);
    const double base = static_cast<double>(k) * kTableStep;
    const double value = table_[k] + (x > base ? cosh_nu_panel(nu_, base, x) : 0.0);
    if (!std::isfinite(value)) {
      throw OverflowError("phase integral overflows at x = " + fmt(x));
    }
    return value;
  }
  // int_top^x 2^-nu e^{nu t} dt = 2^-nu (e^{nu x} - e^{nu top}) / nu
  const double log_tail = nu_ * x - nu_ * std::numbers::ln2 - std::log(nu_) +
                          std::log1p(-std::exp(nu_ * (top - x)));
  if (log_tail > kLogMax) throw OverflowError("phase integral overflows at x = " + fmt(x));
  return table_.back() + std::exp(log_tail);
}

double PhaseIntegral::operator()(double x) const {
  return std::signbit(x) ? -positive(-x) : positive(x);
}

double PhaseIntegral::derivative(double x) const { return cosh_pow(x, nu_); }

double PhaseIntegral::inverse(double f) const {
  if (std::isnan(f)) throw InvalidArgument("phase integral inverse of NaN");
  if (f < 0.0) return -inverse(-f);
  if (f == 0.0) return 0.0;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto safe = [this](double x) {
    try {
      return positive(x);
    } catch (const OverflowError&) {
      return inf;
    }
  };
  double lo = 0.0;
  double hi = 1.0;
  while (safe(hi) < f) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw OverflowError("phase integral inverse out of range");
  }
  // F is convex on x > 0, so Newton from the right approaches the root
  // monotonically; the bracket catches everything else.
  double x = hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = safe(x);
    if (fx == f) return x;
    if (fx > f) {
      hi = x;
    } else {
      lo = x;
    }
    double next = 0.5 * (lo + hi);
    if (std::isfinite(fx)) {
      double slope = inf;
      try {
        slope = derivative(x);
      } catch (const OverflowError&) {
      }
      const double newton = x - (fx - f) / slope;
      if (newton > lo && newton < hi) next = newton;
    }
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      return next;
    }
    x = next;
  }
  return x;
}

ExactState::ExactState(double nu, double big_a1, Parity parity)
    : ExactState(unnormalized(nu, big_a1, parity)) {
  norm_ = norm_constant(nu, big_a1, parity);
}

ExactState::ExactState(double nu, double big_a1, Parity parity, double norm,
                       std::shared_ptr<const PhaseIntegral> phase)
    : nu_(nu), big_a1_(big_a1), parity_(parity), norm_(norm), phase_(std::move(phase)) {}

ExactState ExactState::unnormalized(double nu, double big_a1, Parity parity) {
  require_state_params(nu, big_a1);
  return ExactState(nu, big_a1, parity, 1.0, std::make_shared<const PhaseIntegral>(nu));
}

double ExactState::phi(double x) const { return std::sqrt(big_a1_) * (*phase_)(x); }

double ExactState::operator()(double x) const {
  const double envelope = cosh_pow(x, -0.5 * nu_);
  if (envelope == 0.0) return 0.0;
  const double p = phi(x);
  return norm_ * (parity_ == Parity::Even ? std::cos(p) : std::sin(p)) * envelope;
}

double ExactState::derivative(double x) const {
  const double envelope = cosh_pow(x, -0.5 * nu_);
  const double p = phi(x);
  const double c = std::cos(p);
  const double s = std::sin(p);
  const double trig = parity_ == Parity::Even ? c : s;
  const double dtrig = parity_ == Parity::Even ? -s : c;
  const double fast = std::sqrt(big_a1_) * cosh_pow(x, 0.5 * nu_) * dtrig;
  return norm_ * (-0.5 * nu_ * std::tanh(x) * trig * envelope + fast);
}

double ExactState::q(double x, double energy_shift) const {
  const ConstraintParams c = constraint_params(nu_);
  return big_a1_ * cosh_pow(x, 2.0 * nu_) + c.big_a2 * cosh_pow(x, -2.0) +
         2.0 * (energy() + energy_shift);
}

CoshSechParams ExactState::potential() const {
  return CoshSechParams{big_a1_, big_a2(), nu_, Convention::CapitalA};
}

double eval_state(const ExactState& state, double x) { return state(x); }

QuadratureResult norm_integral(double nu, double big_a1, Parity parity,
                               const OscillatoryOptions& opts) {
  const ExactState raw = ExactState::unnormalized(nu, big_a1, parity);
  OscillatoryQuadrature q(state_integrand(raw, Density::Probability), state_phase(raw), opts);
  QuadratureResult half = q.integrate_all();
  half.value *= 2.0;
  half.err_estimate *= 2.0;
  return half;
}

double norm_constant(double nu, double big_a1, Parity parity) {
  require_state_params(nu, big_a1);
  if (nu == 1.0) {
    const double decay = std::exp(-2.0 * std::sqrt(big_a1));
    const double area = 0.5 * kPi * (parity == Parity::Even ? 1.0 + decay : 1.0 - decay);
    return 1.0 / std::sqrt(area);
  }
  const QuadratureResult r = norm_integral(nu, big_a1, parity);
  if (!std::isfinite(r.value) || !(r.value > 0.0)) {
    throw ConvergenceError("normalization integral is not a positive finite number");
  }
  if (!r.converged) {
    throw ConvergenceError("normalization integral missed its tolerance (err " +
                           fmt(r.err_estimate) + ")");
  }
  return 1.0 / std::sqrt(r.value);
}

long node_count(const ExactState& state, double x_max) {
  if (!(x_max >= 0.0)) throw InvalidArgument("node_count needs x_max >= 0");
  const double turns = state.phi(x_max) / kPi;
  if (state.parity() == Parity::Even) return static_cast<long>(std::floor(turns + 0.5));
  return static_cast<long>(std::floor(turns)) + 1;
}

std::vector<double> node_positions(const ExactState& state, double x_max,
                                   std::size_t max_nodes) {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) {
    throw InvalidArgument("node_positions needs a finite x_max > 0");
  }
  const long expected = node_count(state, x_max);
  if (expected > static_cast<long>(max_nodes)) {
    throw InvalidArgument("more than " + std::to_string(max_nodes) + " nodes below x_max");
  }
  const double root_a1 = std::sqrt(state.big_a1());
  const double offset = state.parity() == Parity::Even ? 0.5 : 0.0;
  std::vector<double> nodes;
  for (long k = 0;; ++k) {
    const double target = (static_cast<double>(k) + offset) * kPi / root_a1;
    const double x = state.phase().inverse(target);
    if (x > x_max) break;
    const double delta = std::min(1e-3, 1e-3 * kPi / (root_a1 * cosh_pow(x, state.nu())));
    const double left = state(x - delta);
    const double right = state(x + delta);
    if (!(std::signbit(left) != std::signbit(right) && left != 0.0 && right != 0.0)) {
      throw ConvergenceError("no sign change at the node near x = " + fmt(x));
    }
    nodes.push_back(x);
  }
  return nodes;
}

double node_density(const ExactState& state, double x) {
  return std::sqrt(state.big_a1()) * cosh_pow(x, state.nu()) / kPi;
}

WindowAudit bound_state_window(double nu, double big_a1) {
  require_state_params(nu, big_a1);
  WindowAudit audit;
  audit.nu = nu;
  audit.big_a1 = big_a1;
  audit.energy = eigen_energy(nu);
  const CoshSechParams params{big_a1, constraint_params(nu).big_a2, nu, Convention::CapitalA};
  const ExtremaInfo ext = extrema(params);
  audit.v_min = ext.v_min;
  audit.v_max = ext.v_max;
  audit.inside = ext.v_max && ext.v_min < audit.energy && audit.energy < *ext.v_max;
  audit.quoted_bound_holds = big_a1 > 0.5 * nu;
  if (audit.inside != audit.quoted_bound_holds) {
    const std::string window =
        ext.v_max ? "(" + fmt(ext.v_min) + ", " + fmt(*ext.v_max) + ")" : "(no barrier)";
    audit.flag = "E = " + fmt(audit.energy) + (audit.inside ? " lies inside " : " lies outside ") +
                 "the window " + window + " while A1 = " + fmt(big_a1) +
                 (audit.quoted_bound_holds ? " > " : " <= ") + "nu/2 = " + fmt(0.5 * nu) +
                 "; the quoted bound A1 > nu/2 does not match the numerical window";
  }
  return audit;
}

ResidualReport residual(const ExactState& state, const Grid& grid, double energy_shift) {
  return residual([&state](double x) { return state(x); },
                  [&state, energy_shift](double x) { return state.q(x, energy_shift); }, grid);
}

double wronskian(const ExactState& a, const ExactState& b, double x) {
  return a(x) * b.derivative(x) - a.derivative(x) * b(x);
}

}  // namespace volcano
