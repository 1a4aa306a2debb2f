#include "volcano/potential.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "volcano/errors.hpp"
#include "volcano/numerics.hpp"

namespace volcano {

namespace {

const double kLogMax = std::log(std::numeric_limits<double>::max());

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sech2(double x) { return cosh_pow(x, -2.0); }

// Catalogued generators: g, g', g'', g'''.
struct GeneratorTerms {
  double exp_2g;
  double g1;
  double g2;
  double g3;
};

GeneratorTerms generator_terms(const Generator& g, double x) {
  const double t = std::tanh(x);
  const double s2 = sech2(x);
  switch (g.kind) {
    case GeneratorKind::LnSech:
      return {s2, -t, -s2, 2.0 * s2 * t};
    case GeneratorKind::LnCoshNu: {
      const double two_g = 2.0 * g.nu * log_cosh(x);
      if (two_g > kLogMax) throw OverflowError("exp(2 g(x)) overflows at x = " + std::to_string(x));
      return {std::exp(two_g), g.nu * t, g.nu * s2, -2.0 * g.nu * s2 * t};
    }
  }
  throw InvalidArgument("unknown generator");
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CoshSechParams CoshSechParams::in_convention(Convention target) const {
  if (target == convention) return *this;
  CoshSechParams out = *this;
  out.convention = target;
  const double factor = (target == Convention::CapitalA) ? 2.0 : 0.5;
  out.a1 = a1 * factor;
  out.a2 = a2 * factor;
  return out;
}

double log_cosh(double x) {
  const double ax = std::abs(x);
  if (ax < 1.0) {
    const double s = std::sinh(0.5 * ax);
    return std::log1p(2.0 * s * s);
  }
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

double cosh_pow(double x, double p) {
  const double ax = std::abs(x);
  if (std::abs(p) * ax <= 300.0 && ax < 350.0) return std::pow(std::cosh(ax), p);
  const double log_value = p * log_cosh(ax);
  if (log_value > kLogMax) {
    throw OverflowError("cosh(x)^p overflows for x = " + format_double(x) +
                        ", p = " + format_double(p));
  }
  return std::exp(log_value);
}

double eval_potential(const PotentialSpec& spec, double x) {
  const double ax = std::abs(x);
  return std::visit(
      Overloaded{
          [ax](const CoshSechParams& p) {
            const double a1 = p.lower_a1();
            const double a2 = p.lower_a2();
            const double growth = (a1 == 0.0) ? 0.0 : a1 * cosh_pow(ax, 2.0 * p.nu);
            return -(growth + a2 * sech2(ax));
          },
          [ax](const QuarticWell& q) {
            const double x2 = ax * ax;
            return q.offset + q.a * x2 - q.b * x2 * x2;
          },
          [ax](const GeneratedPotential& g) {
            const GeneratorTerms terms = generator_terms(g.generator, ax);
            const double growth = (g.a1 == 0.0) ? 0.0 : g.a1 * terms.exp_2g;
            return -(growth + g.a2 * terms.g2);
          },
      },
      spec);
}

double eval_force_gradient(const PotentialSpec& spec, double x) {
  const double sign = std::signbit(x) ? -1.0 : 1.0;
  const double ax = std::abs(x);
  const double magnitude = std::visit(
      Overloaded{
          [ax](const CoshSechParams& p) {
            const double a1 = p.lower_a1();
            const double a2 = p.lower_a2();
            const double growth = (a1 == 0.0) ? 0.0 : p.nu * a1 * cosh_pow(ax, 2.0 * p.nu);
            return 2.0 * std::tanh(ax) * (a2 * sech2(ax) - growth);
          },
          [ax](const QuarticWell& q) { return 2.0 * q.a * ax - 4.0 * q.b * ax * ax * ax; },
          [ax](const GeneratedPotential& g) {
            const GeneratorTerms terms = generator_terms(g.generator, ax);
            const double growth = (g.a1 == 0.0) ? 0.0 : 2.0 * g.a1 * terms.g1 * terms.exp_2g;
            return -(growth + g.a2 * terms.g3);
          },
      },
      spec);
  return sign * magnitude;
}

PotentialSpec from_generator(const Generator& g, double a1, double a2) {
  require_finite(a1, "a1");
  require_finite(a2, "a2");
  switch (g.kind) {
    case GeneratorKind::LnSech:
      return GeneratedPotential{g, a1, a2};
    case GeneratorKind::LnCoshNu:
      require_finite(g.nu, "nu");
      if (!(g.nu > 0.0)) throw InvalidArgument("ln cosh^nu generator needs nu > 0");
      return GeneratedPotential{g, a1, a2};
  }
  throw InvalidArgument("unknown generator");
}

CoshSechParams to_cosh_sech(const GeneratedPotential& generated) {
  if (generated.generator.kind != GeneratorKind::LnCoshNu) {
    throw InvalidArgument("only the ln cosh^nu generator maps onto the cosh-sech family");
  }
  const double nu = generated.generator.nu;
  return CoshSechParams{generated.a1, nu * generated.a2, nu, Convention::LowercaseA};
}

CaseClass classify(double a1, double a2) {
  if (a1 > 0.0 && a2 > 0.0) return CaseClass::VolcanoI;
  if (a1 == 0.0 && a2 > 0.0) return CaseClass::PoschTellerII;
  if (a1 < 0.0 && a2 < 0.0) return CaseClass::SingleBarrierIII;
  if (a1 < 0.0 && a2 > 0.0) return CaseClass::SingleWellIV;
  return CaseClass::Unclassified;
}

std::string to_string(CaseClass c) {
  switch (c) {
    case CaseClass::VolcanoI: return "volcano (I)";
    case CaseClass::PoschTellerII: return "Poschl-Teller well (II)";
    case CaseClass::SingleBarrierIII: return "single barrier (III)";
    case CaseClass::SingleWellIV: return "single well (IV)";
    case CaseClass::Unclassified: return "unclassified";
  }
  return "unclassified";
}

namespace {

void require_case_one(const CoshSechParams& p) {
  require_finite(p.a1, "a1");
  require_finite(p.a2, "a2");
  if (!(p.nu > 0.0) || !std::isfinite(p.nu)) throw InvalidArgument("nu must be positive");
  if (classify(p.lower_a1(), p.lower_a2()) != CaseClass::VolcanoI) {
    throw InvalidArgument("Case I (a1 > 0, a2 > 0) parameters required");
  }
}

}  // namespace

ExtremaInfo extrema(const CoshSechParams& params) {
  require_case_one(params);
  const double a1 = params.lower_a1();
  const double a2 = params.lower_a2();
  const double nu = params.nu;
  const PotentialSpec spec = params;

  ExtremaInfo info;
  info.v_min = -(a1 + a2);
  info.has_central_well = a2 > nu * a1;
  if (!info.has_central_well) return info;

  // V'(x) = 0  <=>  cosh^{2nu+2} x = a2 / (nu a1).
  double xb = std::acosh(std::pow(a2 / (nu * a1), 1.0 / (2.0 * nu + 2.0)));
  const auto dv = [&spec](double x) { return eval_force_gradient(spec, x); };
  const double lo = xb * (1.0 - 1e-9);
  const double hi = xb * (1.0 + 1e-9);
  if (dv(lo) > 0.0 && dv(hi) < 0.0) xb = bisect(dv, lo, hi, 0.0);

  const double delta = 1e-6 * std::max(1.0, xb);
  if (!(dv(xb - delta) > 0.0 && dv(xb + delta) < 0.0)) {
    throw ConvergenceError("barrier top failed the V' sign-change check");
  }
  info.x_barrier = xb;
  info.v_max = eval_potential(spec, xb);
  return info;
}

TurningPointSearch turning_points(const CoshSechParams& params, double energy) {
  require_finite(energy, "energy");
  const ExtremaInfo ext = extrema(params);
  if (!ext.has_central_well) {
    throw InvalidArgument("turning points need a central well (a2 > nu a1)");
  }
  const PotentialSpec spec = params;
  const double xb = *ext.x_barrier;
  const double v_max = *ext.v_max;
  const double tol = 1e-12 * std::max(1.0, std::abs(energy));
  const auto gap = [&spec, energy](double x) { return eval_potential(spec, x) - energy; };

  if (energy < ext.v_min - tol) return {EnergyRegime::BelowWell, std::nullopt};
  if (energy > v_max + tol) return {EnergyRegime::AboveBarrier, std::nullopt};
  if (std::abs(energy - v_max) <= tol) {
    return {EnergyRegime::Trapped, TurningPoints{xb, xb, true}};
  }

  double hi = xb + 1.0;
  while (gap(hi) >= 0.0) hi = xb + 2.0 * (hi - xb);
  const double x2 = bisect(gap, xb, hi, 0.0);
  if (std::abs(energy - ext.v_min) <= tol) {
    return {EnergyRegime::Trapped, TurningPoints{0.0, x2, true}};
  }
  const double x1 = bisect(gap, 0.0, xb, 0.0);
  return {EnergyRegime::Trapped, TurningPoints{x1, x2, false}};
}

QuarticWell taylor_quartic(const CoshSechParams& params) {
  require_case_one(params);
  const double a1 = params.lower_a1();
  const double a2 = params.lower_a2();
  const double nu = params.nu;
  // cosh^{2nu} x = 1 + nu x^2 + (nu^2/2 - nu/6) x^4,  sech^2 x = 1 - x^2 + (2/3) x^4.
  return QuarticWell{a2 - nu * a1, a1 * (3.0 * nu * nu - nu) / 6.0 + 2.0 * a2 / 3.0,
                     -(a1 + a2)};
}

double exact_solution_a2(double nu, Convention convention) {
  const double big_a2 = 0.5 * nu * (0.5 * nu + 1.0);
  return convention == Convention::CapitalA ? big_a2 : big_a2 / 2.0;
}

double case_one_a2(double nu, Convention convention) {
  const double a2 = nu * (nu + 1.0);
  return convention == Convention::CapitalA ? 2.0 * a2 : a2;
}

std::string to_string(Convention c) { return c == Convention::CapitalA ? "A" : "a"; }

Convention convention_from_string(const std::string& s) {
  if (s == "a" || s == "lower" || s == "lowercase") return Convention::LowercaseA;
  if (s == "A" || s == "capital" || s == "capitala") return Convention::CapitalA;
  throw InvalidArgument("unknown convention '" + s + "' (expected a or A)");
}

std::string to_text(const PotentialSpec& spec) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&out](const CoshSechParams& p) {
                   out << "family=cosh_sech\n"
                       << "a1=" << format_double(p.a1) << "\n"
                       << "a2=" << format_double(p.a2) << "\n"
                       << "nu=" << format_double(p.nu) << "\n"
                       << "convention=" << to_string(p.convention) << "\n";
                 },
                 [&out](const QuarticWell& q) {
                   out << "family=quartic\n"
                       << "a=" << format_double(q.a) << "\n"
                       << "b=" << format_double(q.b) << "\n"
                       << "offset=" << format_double(q.offset) << "\n";
                 },
                 [&out](const GeneratedPotential& g) {
                   out << "family=generated\n"
                       << "generator="
                       << (g.generator.kind == GeneratorKind::LnSech ? "ln_sech" : "ln_cosh_nu")
                       << "\n"
                       << "a1=" << format_double(g.a1) << "\n"
                       << "a2=" << format_double(g.a2) << "\n"
                       << "nu=" << format_double(g.generator.nu) << "\n";
                 },
             },
             spec);
  return out.str();
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InvalidArgument("value of '" + key + "' is not a number: '" + text + "'");
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

PotentialSpec potential_from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key) != 0) throw InvalidArgument("duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  if (kv.count("family") == 0) throw InvalidArgument("missing key 'family'");
  const std::string family = kv["family"];

  std::set<std::string> allowed;
  if (family == "cosh_sech") {
    allowed = {"family", "a1", "a2", "nu", "convention"};
  } else if (family == "quartic") {
    allowed = {"family", "a", "b", "offset"};
  } else if (family == "generated") {
    allowed = {"family", "generator", "a1", "a2", "nu"};
  } else {
    throw InvalidArgument("unknown family '" + family + "'");
  }
  for (const auto& [key, value] : kv) {
    if (allowed.count(key) == 0) throw InvalidArgument("unknown key '" + key + "'");
  }
  const auto number = [&kv](const std::string& key) -> double {
    const auto it = kv.find(key);
    if (it == kv.end()) throw InvalidArgument("missing key '" + key + "'");
    return parse_double(key, it->second);
  };

  if (family == "cosh_sech") {
    const Convention conv =
        kv.count("convention") ? convention_from_string(kv["convention"]) : Convention::LowercaseA;
    return CoshSechParams{number("a1"), number("a2"), number("nu"), conv};
  }
  if (family == "quartic") {
    return QuarticWell{number("a"), number("b"), kv.count("offset") ? number("offset") : 0.0};
  }
  const std::string gen = kv.count("generator") ? kv["generator"] : "";
  Generator g;
  if (gen == "ln_sech") {
    g.kind = GeneratorKind::LnSech;
    if (kv.count("nu")) g.nu = number("nu");
  } else if (gen == "ln_cosh_nu") {
    g.kind = GeneratorKind::LnCoshNu;
    g.nu = number("nu");
  } else {
    throw InvalidArgument("unknown generator '" + gen + "'");
  }
  return from_generator(g, number("a1"), number("a2"));
}

}  // namespace volcano
