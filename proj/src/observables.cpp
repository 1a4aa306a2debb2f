#include "volcano/observables.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "volcano/errors.hpp"
#include "volcano/integrands.hpp"

namespace volcano {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void require_cutoffs(const std::vector<double>& cutoffs) {
  if (cutoffs.empty()) throw InvalidArgument("cutoff list is empty");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0.0) || !std::isfinite(cutoffs[i])) {
      throw InvalidArgument("cutoffs must be positive and finite");
    }
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1])) {
      throw InvalidArgument("cutoffs must be strictly increasing");
    }
  }
}

// The integral of an odd density is assembled from both halves so that the
// cancellation is computed, not assumed.
CutoffSeries run_series(const ExactState& state, Density density,
                        const std::vector<double>& cutoffs, bool odd_density, bool with_tails) {
  require_cutoffs(cutoffs);
  const OscillationPhase phase = state_phase(state);
  const OscillatoryQuadrature right(state_integrand(state, density), phase);
  const OscillatoryQuadrature left(state_integrand(state, density, true), phase);

  CutoffSeries series;
  series.requested = cutoffs;
  for (const double requested : cutoffs) {
    const PhaseNode node = node_near(state, requested);
    if (!series.cutoffs.empty() && !(node.x > series.cutoffs.back())) {
      throw InvalidArgument("cutoffs " + fmt(requested) + " and its predecessor share the zero at " +
                            fmt(node.x) + "; space them further apart");
    }
    const double r = right.integrate_to(node).value;
    const double l = odd_density ? left.integrate_to(node).value : r;
    series.cutoffs.push_back(node.x);
    series.values.push_back(r + l);
    if (with_tails) {
      const double rt = right.tail_from(node).value;
      const double lt = odd_density ? left.tail_from(node).value : rt;
      series.tails.push_back(rt + lt);
    }
  }
  return series;
}

double whole_line(const ExactState& state, Density density) {
  const OscillationPhase phase = state_phase(state);
  const OscillatoryQuadrature right(state_integrand(state, density), phase);
  const OscillatoryQuadrature left(state_integrand(state, density, true), phase);
  return right.integrate_all().value + left.integrate_all().value;
}

}  // namespace

std::string describe(const ConvergenceVerdict& verdict) {
  if (const auto* c = std::get_if<Converged>(&verdict)) {
    return "converged to " + fmt(c->limit) + " (last change " + fmt(c->last_delta) + ")";
  }
  if (const auto* d = std::get_if<Diverging>(&verdict)) return "diverging: " + d->description;
  return "inconclusive: " + std::get<Inconclusive>(verdict).reason;
}

std::vector<double> default_cutoffs() { return {4.0, 6.0, 8.0, 10.0, 12.0, 15.0}; }

ConvergenceVerdict judge_convergence(const CutoffSeries& series, double tol) {
  const std::size_t n = series.values.size();
  if (n < 3) return Inconclusive{"need at least three cutoffs"};
  std::vector<double> estimate(n);
  for (std::size_t i = 0; i < n; ++i) {
    estimate[i] = series.values[i] + (series.tails.empty() ? 0.0 : series.tails[i]);
    if (!std::isfinite(estimate[i])) return Inconclusive{"non-finite value in the series"};
  }
  const double floor = tol * 1e-2;
  double previous = std::abs(estimate[1] - estimate[0]);
  for (std::size_t i = 2; i < n; ++i) {
    const double delta = std::abs(estimate[i] - estimate[i - 1]);
    if (delta > floor && delta > previous) {
      return Inconclusive{"change grew from " + fmt(previous) + " to " + fmt(delta) + " at L = " +
                          fmt(series.cutoffs[i])};
    }
    previous = delta;
  }
  if (!(previous < tol)) {
    return Inconclusive{"last change " + fmt(previous) + " is not below " + fmt(tol)};
  }
  return Converged{estimate.back(), previous};
}

ConvergenceVerdict judge_divergence(const CutoffSeries& series) {
  const std::size_t n = series.values.size();
  if (n < 5) return Inconclusive{"need at least five cutoffs to call a divergence"};
  const double first_step = series.values[1] - series.values[0];
  const int sign = first_step > 0.0 ? 1 : -1;
  std::vector<double> mid;
  std::vector<double> log_slope;
  double previous_slope = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double step = series.values[i] - series.values[i - 1];
    if (!(step * sign > 0.0)) {
      return Inconclusive{"values are not strictly monotone at L = " + fmt(series.cutoffs[i])};
    }
    const double slope = std::abs(step) / (series.cutoffs[i] - series.cutoffs[i - 1]);
    if (i > 1 && !(slope > previous_slope)) {
      return Inconclusive{"increments stop growing at L = " + fmt(series.cutoffs[i])};
    }
    previous_slope = slope;
    mid.push_back(0.5 * (series.cutoffs[i] + series.cutoffs[i - 1]));
    log_slope.push_back(std::log(slope));
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < mid.size(); ++i) {
    mx += mid[i];
    my += log_slope[i];
  }
  mx /= static_cast<double>(mid.size());
  my /= static_cast<double>(mid.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < mid.size(); ++i) {
    sxy += (mid[i] - mx) * (log_slope[i] - my);
    sxx += (mid[i] - mx) * (mid[i] - mx);
  }
  const double rate = sxy / sxx;
  return Diverging{rate, sign,
                   std::string(sign > 0 ? "to +inf" : "to -inf") +
                       ", exponential in L: |dI/dL| ~ exp(" + fmt(rate) + " L)"};
}

double expect_position(const ExactState& state) { return whole_line(state, Density::Position); }

double expect_momentum(const ExactState& state) { return whole_line(state, Density::Current); }

ObservableReport position_series(const ExactState& state, const std::vector<double>& cutoffs) {
  ObservableReport report{"<x>", run_series(state, Density::Position, cutoffs, true, true), {}};
  report.verdict = judge_convergence(report.series, 1e-10);
  return report;
}

ObservableReport momentum_series(const ExactState& state, const std::vector<double>& cutoffs) {
  ObservableReport report{"<p>", run_series(state, Density::Current, cutoffs, true, true), {}};
  report.verdict = judge_convergence(report.series, 1e-10);
  return report;
}

ObservableReport expect_x2(const ExactState& state, const std::vector<double>& cutoffs,
                           double tol) {
  require_cutoffs(cutoffs);
  if (cutoffs.back() < 15.0) throw InvalidArgument("<x^2> needs cutoffs reaching L = 15");
  ObservableReport report{"<x^2>", run_series(state, Density::PositionSq, cutoffs, false, true),
                          {}};
  report.verdict = judge_convergence(report.series, tol);
  return report;
}

ObservableReport expect_p2(const ExactState& state, const std::vector<double>& cutoffs) {
  ObservableReport report{"<p^2>", run_series(state, Density::GradientSq, cutoffs, false, false),
                          {}};
  report.verdict = judge_divergence(report.series);
  return report;
}

ObservableReport expect_kinetic(const ExactState& state, const std::vector<double>& cutoffs) {
  ObservableReport report{"<T>", run_series(state, Density::Kinetic, cutoffs, false, false), {}};
  report.verdict = judge_divergence(report.series);
  return report;
}

ObservableReport expect_potential(const ExactState& state, const std::vector<double>& cutoffs) {
  ObservableReport report{"<V>", run_series(state, Density::Potential, cutoffs, false, false),
                          {}};
  report.verdict = judge_divergence(report.series);
  return report;
}

ObservableReport regularized_energy(const ExactState& state, const std::vector<double>& cutoffs,
                                    double tol) {
  ObservableReport report{"<H>", run_series(state, Density::Hamiltonian, cutoffs, false, true),
                          {}};
  report.verdict = judge_convergence(report.series, tol);
  return report;
}

MomentumSpectrum momentum_spectrum(const ExactState& state, double k_max, std::size_t n_k,
                                   double dx) {
  if (!(k_max > 0.0) || !std::isfinite(k_max)) throw InvalidArgument("k_max must be positive");
  if (n_k < 2) throw InvalidArgument("need at least two wavenumbers");
  if (!(dx > 0.0)) throw InvalidArgument("dx must be positive");
  if (!(k_max * dx < 0.25 * std::numbers::pi)) {
    throw InvalidArgument("k_max * dx = " + fmt(k_max * dx) +
                          " aliases; need k_max * dx < pi/4, i.e. dx < " +
                          fmt(0.25 * std::numbers::pi / k_max));
  }
  // N cosh^{-nu/2}(L) = 1e-12.
  const double log_cosh_l = 2.0 / state.nu() * std::log(state.norm_const() * 1e12);
  const double half_width =
      log_cosh_l < 700.0 ? std::acosh(std::exp(log_cosh_l)) : log_cosh_l + std::numbers::ln2;
  const auto half = static_cast<long>(std::ceil(half_width / dx));
  std::vector<double> psi(static_cast<std::size_t>(2 * half + 1));
  for (long j = -half; j <= half; ++j) {
    psi[static_cast<std::size_t>(j + half)] = state(static_cast<double>(j) * dx);
  }

  MomentumSpectrum out;
  out.dx = dx;
  out.half_width = static_cast<double>(half) * dx;
  const double dk = 2.0 * k_max / static_cast<double>(n_k - 1);
  const double scale = dx / std::sqrt(2.0 * std::numbers::pi);
  constexpr long kReseed = 64;
  for (std::size_t i = 0; i < n_k; ++i) {
    const double k = -k_max + dk * static_cast<double>(i);
    const std::complex<double> step = std::polar(1.0, -k * dx);
    std::complex<double> sum = 0.0;
    std::complex<double> phasor;
    for (long j = -half; j <= half; ++j) {
      if ((j + half) % kReseed == 0) phasor = std::polar(1.0, -k * static_cast<double>(j) * dx);
      sum += psi[static_cast<std::size_t>(j + half)] * phasor;
      phasor *= step;
    }
    sum *= scale;
    out.k.push_back(k);
    out.re.push_back(sum.real());
    out.im.push_back(sum.imag());
    out.density.push_back(std::norm(sum));
  }
  return out;
}

double spectrum_mass(const MomentumSpectrum& spectrum) {
  return spectrum_tail_mass(spectrum, 0.0);
}

double spectrum_tail_mass(const MomentumSpectrum& spectrum, double k0) {
  double total = 0.0;
  for (std::size_t i = 1; i < spectrum.k.size(); ++i) {
    const double a = spectrum.k[i - 1];
    const double b = spectrum.k[i];
    if (std::abs(a) < k0 || std::abs(b) < k0) continue;
    total += 0.5 * (b - a) * (spectrum.density[i - 1] + spectrum.density[i]);
  }
  return total;
}

}  // namespace volcano
