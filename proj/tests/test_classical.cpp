#include <doctest.h>

#include <cmath>
#include <numbers>

#include "volcano/classical.hpp"
#include "volcano/errors.hpp"

using namespace volcano;

namespace {

const CoshSechParams kFig{0.009, 0.375, 1.0, Convention::LowercaseA};

// Period from upward zero crossings of x(t), linearly interpolated.
double measured_period(const Trajectory& traj) {
  std::vector<double> crossings;
  for (std::size_t i = 1; i < traj.points.size(); ++i) {
    const PhasePoint& a = traj.points[i - 1];
    const PhasePoint& b = traj.points[i];
    if (a.x < 0.0 && b.x >= 0.0) crossings.push_back(a.t + (b.t - a.t) * (-a.x) / (b.x - a.x));
  }
  REQUIRE(crossings.size() >= 2);
  return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

}  // namespace

TEST_CASE("equilibrium stays put") {
  const Trajectory t = integrate_trajectory(kFig, 0.0, 0.0, 1e-3, 1000);
  for (const PhasePoint& p : t.points) {
    CHECK(p.x == 0.0);
    CHECK(p.v == 0.0);
  }
  CHECK(t.max_energy_drift == 0.0);
}

TEST_CASE("energy conservation and boundedness") {
  const double e = mechanical_energy(kFig, 0.5, 0.0);
  const Trajectory t = integrate_trajectory(kFig, 0.5, 0.0, 1e-3, 100000);
  CHECK_FALSE(t.escaped);
  CHECK(t.max_energy_drift < 1e-6);
  const double x1 = turning_points(kFig, e).points->x1;
  for (const PhasePoint& p : t.points) CHECK(std::abs(p.x) <= x1 + 1e-6);
}

TEST_CASE("time reversal") {
  const long n = 20000;
  const Trajectory fwd = integrate_trajectory(kFig, 0.3, 0.2, 1e-3, n);
  const PhasePoint end = fwd.points.back();
  const Trajectory back = integrate_trajectory(kFig, end.x, -end.v, 1e-3, n);
  CHECK(back.points.back().x == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(-back.points.back().v == doctest::Approx(0.2).epsilon(1e-8));
}

TEST_CASE("escape past the barrier") {
  const Trajectory t = integrate_trajectory(kFig, 2.0, 0.0, 1e-3, 100000);
  CHECK(t.escaped);
  CHECK(std::abs(t.points.back().x) > 2.0);
  CHECK(classify_initial(kFig, 2.0, 0.0) == Regime::Escaping);
  CHECK(classify_initial(kFig, 0.0, 1.0) == Regime::Escaping);
}

TEST_CASE("regime classification agrees with the region map") {
  const ExtremaInfo ext = extrema(kFig);
  for (double x0 : {0.0, 0.4, 1.0, 1.3}) {
    for (double v0 : {0.0, 0.1, 0.3}) {
      const double e = mechanical_energy(kFig, x0, v0);
      if (classify_initial(kFig, x0, v0) != Regime::Oscillating) continue;
      const RegionMap map = allowed_regions(kFig, e);
      REQUIRE(map.allowed.size() == 3);
      CHECK(std::abs(x0) <= map.allowed[1].hi + 1e-12);
    }
  }
  // Sitting on the barrier top.
  CHECK(classify_initial(kFig, *ext.x_barrier, 0.0) == Regime::Separatrix);
}

TEST_CASE("region map") {
  const ExtremaInfo ext = extrema(kFig);
  const RegionMap inside = allowed_regions(kFig, -0.125);
  CHECK(inside.has_barrier_band);
  CHECK(inside.forbidden.size() == 2);
  CHECK(inside.escape.size() == 2);
  // Forbidden band exists exactly for v_min < E < v_max.
  CHECK_FALSE(allowed_regions(kFig, *ext.v_max + 1e-3).has_barrier_band);
  CHECK(allowed_regions(kFig, *ext.v_max + 1e-3).forbidden.empty());
  CHECK_FALSE(allowed_regions(kFig, ext.v_min).has_barrier_band);
  const RegionMap deep = allowed_regions(kFig, -0.5);
  CHECK_FALSE(deep.has_barrier_band);
  REQUIRE(deep.forbidden.size() == 1);
  CHECK(eval_potential(kFig, deep.forbidden[0].hi) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS_AS(allowed_regions(kFig, NAN), InvalidArgument);
}

TEST_CASE("period quadrature against trajectory timing") {
  for (double e : {-0.3, -0.2, -0.15}) {
    const double x1 = turning_points(kFig, e).points->x1;
    const double period = oscillation_period(kFig, e);
    const Trajectory t = integrate_trajectory(kFig, x1, 0.0, 1e-3, static_cast<long>(4.5 * period / 1e-3));
    CHECK(measured_period(t) == doctest::Approx(period).epsilon(1e-3));
  }
}

TEST_CASE("harmonic limit of the period") {
  const ExtremaInfo ext = extrema(kFig);
  const double omega = std::sqrt(2.0 * (0.375 - 0.009));
  const double period = oscillation_period(kFig, ext.v_min + 1e-7);
  CHECK(period == doctest::Approx(2.0 * std::numbers::pi / omega).epsilon(1e-5));
}

TEST_CASE("period grows toward the barrier top") {
  const ExtremaInfo ext = extrema(kFig);
  double previous = 0.0;
  for (int i = 1; i <= 8; ++i) {
    const double e = ext.v_min + (*ext.v_max - ext.v_min) * (1.0 - std::pow(0.3, i));
    const double period = oscillation_period(kFig, e);
    CHECK(period > previous);
    previous = period;
  }
  CHECK_THROWS_AS(oscillation_period(kFig, *ext.v_max + 1e-3), InvalidArgument);
  CHECK_THROWS_AS(oscillation_period(kFig, ext.v_min - 1e-3), InvalidArgument);
}

TEST_CASE("invalid integration settings") {
  CHECK_THROWS_AS(integrate_trajectory(kFig, 0.0, 0.0, 0.0, 10), InvalidArgument);
  CHECK_THROWS_AS(integrate_trajectory(kFig, 0.0, 0.0, 1e-3, 0), InvalidArgument);
  CHECK_THROWS_AS(integrate_trajectory(kFig, NAN, 0.0, 1e-3, 10), InvalidArgument);
}
