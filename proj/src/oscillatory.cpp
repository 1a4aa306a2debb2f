#include "volcano/oscillatory.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "volcano/errors.hpp"

namespace volcano {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTiny = 1e-300;
// Finite-difference step for the amplitude derivatives in the boundary term.
constexpr double kDiffStep = 1e-3;

QuadratureResult add(QuadratureResult lhs, const QuadratureResult& rhs) {
  lhs.value += rhs.value;
  lhs.err_estimate += rhs.err_estimate;
  lhs.subdivisions += rhs.subdivisions;
  lhs.converged = lhs.converged && rhs.converged;
  return lhs;
}

// Adaptive quadrature with an absolute floor tied to the size of |f| on the
// interval, so that panels whose signed integral nearly cancels still stop.
QuadratureResult scaled_quadrature(const RealFunction& f, double a, double b,
                                   double rel_tol) {
  const double scale = kronrod15([&f](double x) { return std::abs(f(x)); }, a, b);
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = std::max(rel_tol * scale, kTiny);
  opts.max_subdivisions = 200;
  return quadrature(f, a, b, opts);
}

}  // namespace

OscillatoryQuadrature::OscillatoryQuadrature(OscillatoryIntegrand f, OscillationPhase phase,
                                             OscillatoryOptions opts)
    : f_(std::move(f)), phase_(std::move(phase)), opts_(opts) {
  if (opts_.near_field_panels < 2) {
    throw InvalidArgument("OscillatoryQuadrature needs at least two near-field panels");
  }
}

PhaseNode OscillatoryQuadrature::near_field_edge() const {
  const int k = opts_.near_field_panels;
  return {phase_.inverse(k * kPi), (k % 2 == 0) ? 1.0 : -1.0};
}

QuadratureResult OscillatoryQuadrature::panels_between(double theta_lo, double theta_hi,
                                                       double x_end) const {
  QuadratureResult total{0.0, 0.0, 0, true};
  double x_prev = (theta_lo == 0.0) ? 0.0 : phase_.inverse(theta_lo);
  auto k = static_cast<long>(std::floor(theta_lo / kPi + 1e-9)) + 1;
  for (; k * kPi < theta_hi * (1.0 - 1e-12); ++k) {
    const double x_k = phase_.inverse(k * kPi);
    if (!(x_k > x_prev) || !(x_k < x_end)) break;
    total = add(total, scaled_quadrature(f_.pointwise, x_prev, x_k, opts_.panel_rel_tol));
    x_prev = x_k;
  }
  if (x_end > x_prev) {
    total = add(total, scaled_quadrature(f_.pointwise, x_prev, x_end, opts_.panel_rel_tol));
  }
  return total;
}

QuadratureResult OscillatoryQuadrature::secular_between(double a, double b) const {
  QuadratureResult total{0.0, 0.0, 0, true};
  for (double lo = a; lo < b;) {
    const double hi = std::min(b, lo + 1.0);
    total = add(total, scaled_quadrature(f_.secular, lo, hi, opts_.secular_rel_tol));
    lo = hi;
  }
  return total;
}

QuadratureResult OscillatoryQuadrature::secular_to_infinity(double a) const {
  QuadratureResult total{0.0, 0.0, 0, true};
  int quiet = 0;
  for (int piece = 0; piece < 5000 && quiet < 3; ++piece) {
    const double lo = a + piece;
    const QuadratureResult r = scaled_quadrature(f_.secular, lo, lo + 1.0, opts_.secular_rel_tol);
    if (!std::isfinite(r.value)) {
      throw OverflowError("secular tail is not finite; the integrand does not decay");
    }
    total = add(total, r);
    quiet = (std::abs(r.value) <= 1e-17 * std::abs(total.value)) ? quiet + 1 : 0;
  }
  if (quiet < 3) total.converged = false;
  return total;
}

double OscillatoryQuadrature::boundary_term(const PhaseNode& node, double* err) const {
  const auto amp_over_rate = [this](const RealFunction& amp) {
    return [this, &amp](double x) { return amp(x) / phase_.rate(x); };
  };
  const auto d_theta = [this](const std::function<double(double)>& g) {
    return [this, g](double x) {
      return (g(x + kDiffStep) - g(x - kDiffStep)) / (2.0 * kDiffStep) / phase_.rate(x);
    };
  };
  const std::function<double(double)> p = amp_over_rate(f_.cos_amp);
  const std::function<double(double)> q = amp_over_rate(f_.sin_amp);
  const std::function<double(double)> dp = d_theta(p);
  const std::function<double(double)> dq = d_theta(q);
  const std::function<double(double)> ddq = d_theta(dq);
  const std::function<double(double)> ddp = d_theta(dp);

  const double x = node.x;
  const double value = node.cos_theta * (-q(x) + dp(x) + ddq(x));
  if (err != nullptr) {
    // Next omitted term is of order P''' ~ P'' / theta'.
    *err = 10.0 * std::abs(ddp(x)) / std::max(phase_.rate(x), 1.0) +
           1e-12 * (std::abs(q(x)) + std::abs(dp(x)));
  }
  return value;
}

QuadratureResult OscillatoryQuadrature::integrate_to(const PhaseNode& end) const {
  if (end.x <= 0.0) return {0.0, 0.0, 0, true};
  const double theta_end = phase_.theta(end.x);
  const double theta_edge = opts_.near_field_panels * kPi;
  if (theta_end <= theta_edge) return panels_between(0.0, theta_end, end.x);

  const PhaseNode edge = near_field_edge();
  QuadratureResult total = panels_between(0.0, theta_edge, edge.x);
  total = add(total, secular_between(edge.x, end.x));
  double err_end = 0.0;
  double err_edge = 0.0;
  total.value += boundary_term(end, &err_end) - boundary_term(edge, &err_edge);
  total.err_estimate += err_end + err_edge;
  return total;
}

QuadratureResult OscillatoryQuadrature::tail_from(const PhaseNode& start) const {
  QuadratureResult total = secular_to_infinity(start.x);
  double err = 0.0;
  total.value -= boundary_term(start, &err);
  total.err_estimate += err;
  return total;
}

QuadratureResult OscillatoryQuadrature::integrate_all() const {
  const PhaseNode edge = near_field_edge();
  return add(integrate_to(edge), tail_from(edge));
}

}  // namespace volcano
