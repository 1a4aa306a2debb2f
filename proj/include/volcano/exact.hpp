#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "volcano/numerics.hpp"
#include "volcano/oscillatory.hpp"
#include "volcano/potential.hpp"

namespace volcano {

enum class Parity { Even, Odd };

std::string to_string(Parity p);
Parity parity_from_string(const std::string& s);

/// A2 = (nu/2)(nu/2 + 1) and A3 = -nu^2/4.
struct ConstraintParams {
  double big_a2 = 0.0;
  double big_a3 = 0.0;
};

ConstraintParams constraint_params(double nu);

/// E = -nu^2 / 8.
double eigen_energy(double nu);

/// F(x) = int_0^x cosh^nu t dt.  Integer nu uses the reduction formula;
/// other nu use a table of panel integrals on [0, 40] and the exact
/// exponential form beyond, where cosh^nu x = 2^-nu e^{nu x} to double
/// precision.
class PhaseIntegral {
 public:
  explicit PhaseIntegral(double nu);

  double nu() const { return nu_; }
  double operator()(double x) const;
  double derivative(double x) const;
  /// The x >= 0 with F(x) = f, for f >= 0.
  double inverse(double f) const;

 private:
  double positive(double x) const;

  double nu_;
  bool integer_;
  std::vector<double> table_;
};

class ExactState {
 public:
  /// Normalized state.  Throws InvalidArgument unless nu > 0 and A1 > 0.
  ExactState(double nu, double big_a1, Parity parity);

  /// cos or sin(sqrt(A1) F) / cosh^{nu/2}, without the normalization factor.
  static ExactState unnormalized(double nu, double big_a1, Parity parity);

  double nu() const { return nu_; }
  double big_a1() const { return big_a1_; }
  double big_a2() const { return constraint_params(nu_).big_a2; }
  double big_a3() const { return constraint_params(nu_).big_a3; }
  Parity parity() const { return parity_; }
  double energy() const { return eigen_energy(nu_); }
  double norm_const() const { return norm_; }
  const PhaseIntegral& phase() const { return *phase_; }

  /// sqrt(A1) F(x), the argument of the cos / sin factor.
  double phi(double x) const;

  double operator()(double x) const;
  double derivative(double x) const;

  /// Q(x) = A1 cosh^{2nu} x + A2 sech^2 x + 2 (E + energy_shift).
  double q(double x, double energy_shift = 0.0) const;

  /// The potential this state belongs to, in the CapitalA convention.
  CoshSechParams potential() const;

 private:
  ExactState(double nu, double big_a1, Parity parity, double norm,
             std::shared_ptr<const PhaseIntegral> phase);

  double nu_;
  double big_a1_;
  Parity parity_;
  double norm_;
  std::shared_ptr<const PhaseIntegral> phase_;
};

double eval_state(const ExactState& state, double x);

/// Closed forms for nu = 1, A = (pi/2 (1 + e^{-2 sqrt A1}))^{-1/2} and
/// B = (pi/2 (1 - e^{-2 sqrt A1}))^{-1/2}; numerical quadrature otherwise.
double norm_constant(double nu, double big_a1, Parity parity);

/// int psi^2 over the line for the unnormalized state, by quadrature,
/// whatever nu is.
QuadratureResult norm_integral(double nu, double big_a1, Parity parity,
                               const OscillatoryOptions& opts = {});

/// Zeros of the state in [0, x_max], located by inverting F at the phases
/// where cos (even) or sin (odd) vanishes.  Each is checked to be a sign
/// change of the state.
std::vector<double> node_positions(const ExactState& state, double x_max,
                                   std::size_t max_nodes = 1000000);

/// Number of zeros in [0, x_max], from the phase alone.
long node_count(const ExactState& state, double x_max);

/// dn/dx = sqrt(A1) cosh^nu x / pi: zeros per unit length.
double node_density(const ExactState& state, double x);

/// Numerical check that E lies between the well bottom and the barrier top.
struct WindowAudit {
  double nu = 0.0;
  double big_a1 = 0.0;
  double energy = 0.0;
  double v_min = 0.0;
  std::optional<double> v_max;
  bool inside = false;
  /// The bound A1 > nu/2 quoted in the literature for this window.
  bool quoted_bound_holds = false;
  /// Non-empty when the quoted bound disagrees with the numerical window.
  std::string flag;
};

WindowAudit bound_state_window(double nu, double big_a1);

/// Residual of psi'' + Q psi with Q built from E + energy_shift.
ResidualReport residual(const ExactState& state, const Grid& grid, double energy_shift = 0.0);

/// W = a b' - a' b.  For the unnormalized even/odd pair it equals sqrt(A1).
double wronskian(const ExactState& a, const ExactState& b, double x);

}  // namespace volcano
