#include <doctest.h>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <numbers>

#include "volcano/errors.hpp"
#include "volcano/observables.hpp"

using namespace volcano;

namespace {

const gsl_error_handler_t* const kPreviousHandler = gsl_set_error_handler_off();

struct GslFunction {
  double (*f)(double);
  static double call(double u, void* p) { return static_cast<GslFunction*>(p)->f(u); }
};

// <x^2> for nu = 1 with u = sinh x:
// N^2 * 2 int_0^inf asinh(u)^2 cos^2 or sin^2 (sqrt(A1) u) / (1 + u^2) du.
double oracle_x2_nu1(double big_a1, Parity parity) {
  GslFunction g{[](double u) { return std::asinh(u) * std::asinh(u) / (1.0 + u * u); }};
  gsl_function f{&GslFunction::call, &g};
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(4000);
  gsl_integration_workspace* cw = gsl_integration_workspace_alloc(4000);
  gsl_integration_qawo_table* t =
      gsl_integration_qawo_table_alloc(2.0 * std::sqrt(big_a1), 1.0, GSL_INTEG_COSINE, 50);
  double secular = 0.0;
  double wave = 0.0;
  double err = 0.0;
  gsl_integration_qagiu(&f, 0.0, 0.0, 1e-13, 4000, w, &secular, &err);
  gsl_integration_qawf(&f, 0.0, 1e-14, 4000, w, cw, t, &wave, &err);
  gsl_integration_qawo_table_free(t);
  gsl_integration_workspace_free(cw);
  gsl_integration_workspace_free(w);
  const double n = norm_constant(1.0, big_a1, parity);
  return n * n * (parity == Parity::Even ? secular + wave : secular - wave);
}

CutoffSeries series_of(std::vector<double> values) {
  CutoffSeries s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.requested.push_back(4.0 + 2.0 * static_cast<double>(i));
    s.cutoffs.push_back(s.requested.back());
  }
  s.values = std::move(values);
  return s;
}

}  // namespace

TEST_CASE("verdict heuristics on synthetic series") {
  CHECK(std::holds_alternative<Converged>(judge_convergence(series_of({1.0, 1.5, 1.6, 1.61, 1.61}), 1e-8)));
  CHECK(std::holds_alternative<Inconclusive>(judge_convergence(series_of({1.0, 1.5, 1.6, 1.7, 1.8}), 1e-8)));
  const auto growth = judge_divergence(series_of({1.0, 2.0, 4.0, 8.0, 16.0, 32.0}));
  REQUIRE(std::holds_alternative<Diverging>(growth));
  // Increments double every step of 2 in L.
  CHECK(std::get<Diverging>(growth).growth_rate == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
  CHECK(std::get<Diverging>(growth).sign == 1);
  const auto fall = judge_divergence(series_of({-1.0, -2.0, -4.0, -8.0, -16.0}));
  REQUIRE(std::holds_alternative<Diverging>(fall));
  CHECK(std::get<Diverging>(fall).sign == -1);
  CHECK(std::holds_alternative<Inconclusive>(judge_divergence(series_of({1.0, 2.0, 3.0, 4.0, 5.0}))));
  CHECK(std::holds_alternative<Inconclusive>(judge_divergence(series_of({1.0, 2.0, 4.0, 8.0}))));
  CHECK(std::holds_alternative<Inconclusive>(judge_divergence(series_of({1.0, 3.0, 2.0, 8.0, 16.0}))));
}

TEST_CASE("parity selection rules over the verification matrix") {
  for (double nu : {1.0, 2.0, 3.0, 4.0}) {
    for (double a : {0.018, 0.1, 1.0}) {
      for (Parity parity : {Parity::Even, Parity::Odd}) {
        const ExactState s(nu, a, parity);
        CHECK(std::abs(expect_position(s)) < 1e-10);
        CHECK(std::abs(expect_momentum(s)) < 1e-10);
      }
    }
  }
}

TEST_CASE("<x^2> converges to the Fourier oracle") {
  for (Parity parity : {Parity::Even, Parity::Odd}) {
    const ExactState s(1.0, 0.018, parity);
    const ObservableReport r = expect_x2(s, default_cutoffs());
    REQUIRE(std::holds_alternative<Converged>(r.verdict));
    CHECK(std::get<Converged>(r.verdict).limit == doctest::Approx(oracle_x2_nu1(0.018, parity)).epsilon(1e-9));
    // Raw truncated values increase with L and stay below the limit.
    for (std::size_t i = 1; i < r.series.values.size(); ++i) CHECK(r.series.values[i] > r.series.values[i - 1]);
  }
  const ExactState s4(4.0, 0.018, Parity::Even);
  CHECK(std::holds_alternative<Converged>(expect_x2(s4, default_cutoffs()).verdict));
  CHECK_THROWS_AS(expect_x2(s4, {4.0, 6.0, 8.0}), InvalidArgument);
}

TEST_CASE("<p^2> and its kinetic and potential parts diverge") {
  for (double nu : {1.0, 4.0}) {
    const ExactState s(nu, 0.018, Parity::Even);
    const ObservableReport p2 = expect_p2(s, default_cutoffs());
    REQUIRE(std::holds_alternative<Diverging>(p2.verdict));
    CHECK(std::get<Diverging>(p2.verdict).sign == 1);
    CHECK(std::get<Diverging>(p2.verdict).growth_rate > 0.0);
    const ObservableReport t = expect_kinetic(s, default_cutoffs());
    const ObservableReport v = expect_potential(s, default_cutoffs());
    REQUIRE(std::holds_alternative<Diverging>(v.verdict));
    CHECK(std::get<Diverging>(v.verdict).sign == -1);
    for (std::size_t i = 0; i < t.series.values.size(); ++i) {
      CHECK(t.series.values[i] == doctest::Approx(0.5 * p2.series.values[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("regularized energy converges to the eigenvalue") {
  for (double nu : {1.0, 2.0, 3.0, 4.0}) {
    for (Parity parity : {Parity::Even, Parity::Odd}) {
      const ExactState s(nu, 0.018, parity);
      const ObservableReport h = regularized_energy(s, default_cutoffs());
      REQUIRE(std::holds_alternative<Converged>(h.verdict));
      CHECK(std::get<Converged>(h.verdict).limit == doctest::Approx(eigen_energy(nu)).epsilon(1e-6));
    }
  }
}

TEST_CASE("cutoffs are moved onto zeros of the state") {
  const ExactState s(1.0, 0.018, Parity::Even);
  const ObservableReport r = position_series(s, default_cutoffs());
  for (std::size_t i = 0; i < r.series.cutoffs.size(); ++i) {
    CHECK(r.series.cutoffs[i] <= r.series.requested[i] + 1e-12);
    CHECK(std::abs(s(r.series.cutoffs[i])) < 1e-9);
  }
}

TEST_CASE("momentum spectrum") {
  const ExactState even(1.0, 0.018, Parity::Even);
  const ExactState odd(1.0, 0.018, Parity::Odd);
  const MomentumSpectrum se = momentum_spectrum(even, 75.0, 3001);
  const MomentumSpectrum so = momentum_spectrum(odd, 75.0, 3001);
  const std::size_t n = se.k.size();
  double im_even = 0.0;
  double re_odd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    im_even = std::max(im_even, std::abs(se.im[i]));
    re_odd = std::max(re_odd, std::abs(so.re[i]));
    CHECK(se.re[i] == doctest::Approx(se.re[n - 1 - i]).epsilon(1e-9));
    CHECK(so.im[i] == doctest::Approx(-so.im[n - 1 - i]).epsilon(1e-9));
  }
  CHECK(im_even < 1e-12);
  CHECK(re_odd < 1e-12);
  // Parseval, limited by the slowly decaying tail beyond k_max.
  CHECK(std::abs(spectrum_mass(se) - 1.0) < 1e-3);
  // The odd state's missing mass falls roughly as 1 / k_max.
  const double deficit75 = 1.0 - spectrum_mass(so);
  const double deficit150 = 1.0 - spectrum_mass(momentum_spectrum(odd, 150.0, 3001, 0.7 / 150.0));
  CHECK(deficit75 > 0.0);
  CHECK(deficit75 / deficit150 == doctest::Approx(2.0).epsilon(0.1));
  // Heavy tail: the mass above k0 decreases slowly.
  double previous = 1.0;
  for (double k0 : {5.0, 10.0, 20.0, 40.0}) {
    const double tail = spectrum_tail_mass(se, k0);
    CHECK(tail < previous);
    CHECK(tail > 1e-4);
    previous = tail;
  }
  CHECK_THROWS_AS(momentum_spectrum(even, 100.0, 101, 0.01), InvalidArgument);
}
