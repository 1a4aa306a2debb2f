#pragma once

#include <string>
#include <variant>
#include <vector>

#include "volcano/exact.hpp"

namespace volcano {

/// Integrals over [-L, L] for a growing list of cutoffs.  Each requested L
/// is moved to the nearest zero of the state at or below it; `cutoffs`
/// holds the L actually used.
struct CutoffSeries {
  std::vector<double> requested;
  std::vector<double> cutoffs;
  std::vector<double> values;
  /// Asymptotic estimate of the integral outside [-L, L]; empty for
  /// divergent densities.
  std::vector<double> tails;
};

struct Converged {
  double limit = 0.0;
  double last_delta = 0.0;
};

struct Diverging {
  /// r in |dI/dL| ~ e^{r L}, fitted to the series.
  double growth_rate = 0.0;
  /// +1 for growth to +inf, -1 for -inf.
  int sign = 1;
  std::string description;
};

struct Inconclusive {
  std::string reason;
};

using ConvergenceVerdict = std::variant<Converged, Diverging, Inconclusive>;

std::string describe(const ConvergenceVerdict& verdict);

struct ObservableReport {
  std::string name;
  CutoffSeries series;
  ConvergenceVerdict verdict;
};

/// L in {4, 6, 8, 10, 12, 15}.
std::vector<double> default_cutoffs();

/// Converged when the tail-corrected values settle: successive differences
/// fall below tol and do not grow while they are above tol / 100.
ConvergenceVerdict judge_convergence(const CutoffSeries& series, double tol);

/// Diverging when at least five values move strictly in one direction with
/// strictly growing slope |dI/dL|.  A heuristic: divergence cannot be proven
/// from finitely many cutoffs.
ConvergenceVerdict judge_divergence(const CutoffSeries& series);

/// <x> and <p> over the whole line, each half integrated separately.
double expect_position(const ExactState& state);
double expect_momentum(const ExactState& state);

ObservableReport position_series(const ExactState& state, const std::vector<double>& cutoffs);
ObservableReport momentum_series(const ExactState& state, const std::vector<double>& cutoffs);

/// Requires a cutoff of at least 15.
ObservableReport expect_x2(const ExactState& state, const std::vector<double>& cutoffs,
                           double tol = 1e-8);
/// Uses int psi'^2 with the analytic derivative.
ObservableReport expect_p2(const ExactState& state, const std::vector<double>& cutoffs);
ObservableReport expect_kinetic(const ExactState& state, const std::vector<double>& cutoffs);
ObservableReport expect_potential(const ExactState& state, const std::vector<double>& cutoffs);

/// int [psi'^2 / 2 + V psi^2] over [-L, L], evaluated at zeros of psi.
/// Between zeros the sharp-cutoff integral swings by about sqrt(A1) N^2 / 2
/// (it equals psi psi'(L) + E int psi^2), so only the limit along zeros
/// exists.
ObservableReport regularized_energy(const ExactState& state, const std::vector<double>& cutoffs,
                                    double tol = 1e-6);

struct MomentumSpectrum {
  std::vector<double> k;
  std::vector<double> re;
  std::vector<double> im;
  std::vector<double> density;  // |phi(k)|^2
  double dx = 0.0;
  double half_width = 0.0;      // samples cover [-half_width, half_width]
};

/// phi(k) = (2 pi)^{-1/2} int psi(x) e^{-ikx} dx by a direct sum over samples
/// of psi on [-L, L], L chosen where the envelope drops below 1e-12.  The n_k
/// wavenumbers are spread uniformly over [-k_max, k_max].  Refuses
/// k_max * dx >= pi / 4.
MomentumSpectrum momentum_spectrum(const ExactState& state, double k_max, std::size_t n_k,
                                   double dx = 0.01);

/// Trapezoid sum of |phi|^2 over the sampled k.
double spectrum_mass(const MomentumSpectrum& spectrum);
/// The part of spectrum_mass with |k| >= k0.
double spectrum_tail_mass(const MomentumSpectrum& spectrum, double k0);

}  // namespace volcano
