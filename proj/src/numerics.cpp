#include "volcano/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "volcano/errors.hpp"

namespace volcano {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const RealFunction& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  resasc *= std::abs(half);
  resabs *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, resk * half, err};
}

}  // namespace

Grid Grid::spanning(double a, double b, double dx) {
  if (!(b > a) || !(dx > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("grid needs finite a < b and dx > 0");
  }
  const auto steps = static_cast<std::size_t>(std::ceil((b - a) / dx - 1e-9));
  const std::size_t n = std::max<std::size_t>(steps, 2) + 1;
  return Grid{a, (b - a) / static_cast<double>(n - 1), n};
}

GridFunction sample(const RealFunction& f, const Grid& grid) {
  GridFunction out{grid, std::vector<double>(grid.n), false};
  for (std::size_t i = 0; i < grid.n; ++i) {
    out.values[i] = f(grid.at(i));
    if (!std::isfinite(out.values[i])) out.overflow = true;
  }
  return out;
}

double ResidualReport::relative_max() const {
  if (max_abs == 0.0) return 0.0;
  return max_abs / normalized_by;
}

double ResidualReport::relative_l2() const {
  if (l2 == 0.0) return 0.0;
  return l2 / normalized_by;
}

double kronrod15(const RealFunction& f, double a, double b) {
  return gauss_kronrod(f, a, b).value;
}

QuadratureResult quadrature(const RealFunction& f, double a, double b,
                            const QuadratureOptions& opts) {
  if (!(a < b)) throw InvalidArgument("quadrature needs a < b");

  RealFunction integrand = f;
  double lo = a;
  double hi = b;
  if (opts.singularity == EndpointSingularity::InverseSqrt) {
    const double mid = 0.5 * (a + b);
    const double radius = 0.5 * (b - a);
    integrand = [&f, mid, radius](double t) {
      return f(mid + radius * std::sin(t)) * radius * std::cos(t);
    };
    lo = -0.5 * std::numbers::pi;
    hi = 0.5 * std::numbers::pi;
  }

  std::priority_queue<Panel> panels;
  Panel first = gauss_kronrod(integrand, lo, hi);
  double total = first.value;
  double total_err = first.error;
  panels.push(first);
  int subdivisions = 1;

  auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  while (total_err > tolerance() && subdivisions < opts.max_subdivisions) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      panels.push(worst);  // interval no longer divisible
      break;
    }
    const Panel left = gauss_kronrod(integrand, worst.a, mid);
    const Panel right = gauss_kronrod(integrand, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
  }

  // Re-sum from the panels to shed the drift of incremental updates.
  double value = 0.0;
  double err = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  const bool ok = err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  return {value, err, subdivisions, ok};
}

double bisect(const RealFunction& f, double lo, double hi, double x_tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw InvalidArgument("bisect: f(lo) and f(hi) have the same sign");
  }
  for (int iter = 0; iter < 400 && std::abs(hi - lo) > x_tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

NumerovResult numerov_integrate(const RealFunction& q, const Grid& grid, double psi0,
                                double psi1) {
  if (grid.n < 3 || !(grid.dx > 0.0)) {
    throw InvalidArgument("numerov_integrate needs a grid with n >= 3 and dx > 0");
  }
  NumerovResult result;
  result.psi.grid = grid;
  auto& psi = result.psi.values;
  psi.assign(grid.n, std::numeric_limits<double>::quiet_NaN());
  psi[0] = psi0;
  psi[1] = psi1;

  const double h2 = grid.dx * grid.dx;
  auto weight = [&](std::size_t i) {
    const double qi = q(grid.at(i));
    if (qi * h2 > 1.0) result.coarse_step = true;
    return 1.0 + h2 * qi / 12.0;
  };
  double w_prev = weight(0);
  double w_cur = weight(1);
  for (std::size_t i = 1; i + 1 < grid.n; ++i) {
    const double w_next = weight(i + 1);
    const double next = ((12.0 - 10.0 * w_cur) * psi[i] - w_prev * psi[i - 1]) / w_next;
    if (!std::isfinite(next) || std::abs(next) > 1e300) {
      result.psi.overflow = true;
      break;
    }
    psi[i + 1] = next;
    w_prev = w_cur;
    w_cur = w_next;
  }
  return result;
}

namespace {

void require_fine_step(double dx) {
  if (dx > kMaxResidualStep) {
    throw InvalidArgument("residual: grid step " + std::to_string(dx) +
                          " is too coarse; use dx <= " + std::to_string(kMaxResidualStep));
  }
}

// values[k] is the sample at x0 + (k - offset) * dx.
ResidualReport stencil_residual(const std::vector<double>& values, std::size_t offset,
                                const Grid& grid, std::size_t first, std::size_t last,
                                const RealFunction& q) {
  ResidualReport report;
  const double inv = 1.0 / (12.0 * grid.dx * grid.dx);
  double sum_sq = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const std::size_t k = i + offset;
    const double d2 = (-values[k - 2] + 16.0 * values[k - 1] - 30.0 * values[k] +
                       16.0 * values[k + 1] - values[k + 2]) *
                      inv;
    const double qi = q(grid.at(i));
    const double r = d2 + qi * values[k];
    report.max_abs = std::max(report.max_abs, std::abs(r));
    report.max_phase_step =
        std::max(report.max_phase_step, std::sqrt(std::max(qi, 0.0)) * grid.dx);
    sum_sq += r * r;
    report.normalized_by = std::max(report.normalized_by, std::abs(values[k]));
    ++report.points;
  }
  report.l2 = std::sqrt(sum_sq * grid.dx);
  return report;
}

}  // namespace

ResidualReport residual(const GridFunction& psi, const RealFunction& q) {
  const Grid& grid = psi.grid;
  require_fine_step(grid.dx);
  if (grid.n < 5 || psi.values.size() != grid.n) {
    throw InvalidArgument("residual needs at least 5 samples matching the grid");
  }
  return stencil_residual(psi.values, 0, grid, 2, grid.n - 3, q);
}

ResidualReport residual(const RealFunction& psi, const RealFunction& q, const Grid& grid) {
  require_fine_step(grid.dx);
  if (grid.n < 1) throw InvalidArgument("residual needs a non-empty grid");
  std::vector<double> values(grid.n + 4);
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = psi(grid.x0 + grid.dx * (static_cast<double>(k) - 2.0));
  }
  return stencil_residual(values, 2, grid, 0, grid.n - 1, q);
}

}  // namespace volcano
