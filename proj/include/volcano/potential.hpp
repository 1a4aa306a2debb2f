#pragma once

#include <optional>
#include <string>
#include <variant>

namespace volcano {

/// Whether coupling constants are entered as (a1, a2) in V, or as the
/// Schrodinger-equation coefficients (A1, A2) = (2 a1, 2 a2).
enum class Convention { LowercaseA, CapitalA };

/// V(x) = -(a1 cosh^{2 nu} x + a2 sech^2 x), with hbar = m = 1.
struct CoshSechParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double nu = 1.0;
  Convention convention = Convention::LowercaseA;

  /// Couplings as they enter V(x), whatever the entry convention.
  double lower_a1() const { return convention == Convention::CapitalA ? a1 / 2.0 : a1; }
  double lower_a2() const { return convention == Convention::CapitalA ? a2 / 2.0 : a2; }

  /// Same potential, couplings re-expressed in another convention.
  CoshSechParams in_convention(Convention target) const;
};

/// V(x) = offset + a x^2 - b x^4.
struct QuarticWell {
  double a = 0.0;
  double b = 0.0;
  double offset = 0.0;
};

enum class GeneratorKind {
  LnSech,    // g = ln sech x
  LnCoshNu,  // g = nu ln cosh x
};

struct Generator {
  GeneratorKind kind = GeneratorKind::LnCoshNu;
  double nu = 1.0;  // used by LnCoshNu only
};

/// V(x) = -(a1 e^{2 g(x)} + a2 g''(x)) for a catalogued generator g.
struct GeneratedPotential {
  Generator generator;
  double a1 = 0.0;
  double a2 = 0.0;
};

using PotentialSpec = std::variant<CoshSechParams, QuarticWell, GeneratedPotential>;

enum class CaseClass { VolcanoI, PoschTellerII, SingleBarrierIII, SingleWellIV, Unclassified };

struct ExtremaInfo {
  double v_min = 0.0;  // V(0)
  std::optional<double> x_barrier;
  std::optional<double> v_max;
  bool has_central_well = false;
};

struct TurningPoints {
  double x1 = 0.0;  // inner
  double x2 = 0.0;  // outer
  bool degenerate = false;
};

/// Where an energy sits relative to the well bottom and the barrier top.
enum class EnergyRegime { BelowWell, Trapped, AboveBarrier };

struct TurningPointSearch {
  EnergyRegime regime = EnergyRegime::Trapped;
  std::optional<TurningPoints> points;  // present iff v_min <= E <= v_max
};

inline constexpr double kTurningPointTolerance = 1e-10;

/// log(cosh x), accurate for all finite x.
double log_cosh(double x);

/// cosh(x)^p, switching to log-domain arithmetic for large p|x|.
/// Throws OverflowError when the result is not representable.
double cosh_pow(double x, double p);

double eval_potential(const PotentialSpec& spec, double x);
/// dV/dx; odd in x.
double eval_force_gradient(const PotentialSpec& spec, double x);

/// Throws InvalidArgument on non-finite couplings or nu <= 0 for LnCoshNu.
PotentialSpec from_generator(const Generator& g, double a1, double a2);

/// For g = nu ln cosh x, g'' = nu sech^2 x, so the generated potential equals
/// CoshSech(a1, nu*a2, nu).  Throws for the ln sech generator.
CoshSechParams to_cosh_sech(const GeneratedPotential& generated);

CaseClass classify(double a1, double a2);
std::string to_string(CaseClass c);

ExtremaInfo extrema(const CoshSechParams& params);
TurningPointSearch turning_points(const CoshSechParams& params, double energy);

/// Maclaurin expansion of V through x^4.
QuarticWell taylor_quartic(const CoshSechParams& params);

/// A2 = (nu/2)(nu/2 + 1), the coupling the exact states require, expressed
/// in the given convention.
double exact_solution_a2(double nu, Convention convention);
/// a2 = nu (nu + 1), the value assumed in the Case I discussion.  This
/// differs from exact_solution_a2; both are offered as presets.
double case_one_a2(double nu, Convention convention);

/// Canonical key=value serialization (family, a1, a2, nu, convention, ...).
std::string to_text(const PotentialSpec& spec);
PotentialSpec potential_from_text(const std::string& text);

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

}  // namespace volcano
