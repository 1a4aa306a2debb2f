#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "volcano/classical.hpp"
#include "volcano/errors.hpp"
#include "volcano/exact.hpp"

namespace volcano::cli {

namespace {

using Json = nlohmann::ordered_json;
using Header = std::vector<std::pair<std::string, std::string>>;

class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + num(values[i]);
  return s;
}

struct Column {
  std::string name;
  std::vector<double> values;
  std::vector<std::string> text;  // used instead of values when non-empty
  std::size_t size() const { return text.empty() ? values.size() : text.size(); }
};

struct Table {
  Header header;
  std::vector<Column> columns;
};

std::string render(const Table& table, Format format) {
  if (format == Format::Json) {
    Json j;
    for (const auto& [k, v] : table.header) j[k] = v;
    for (const auto& c : table.columns) {
      j[c.name] = c.text.empty() ? Json(c.values) : Json(c.text);
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& [k, v] : table.header) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i].name;
  }
  os << "\n";
  const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      const Column& c = table.columns[i];
      os << (i ? "," : "") << (c.text.empty() ? num(c.values[r]) : c.text[r]);
    }
    os << "\n";
  }
  return os.str();
}

std::string extension(Format f) { return f == Format::Json ? ".json" : ".csv"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidArgument("cannot open " + path.string() + " for writing");
  file << text;
}

std::optional<std::filesystem::path> env_out_dir() {
  const char* dir = std::getenv("VOLCANO_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir);
}

// --out, else $VOLCANO_OUT_DIR/<name>, else the output stream.
void emit(const RunConfig& cfg, const std::string& name, const std::string& text, std::ostream& out) {
  if (!cfg.out.empty()) {
    write_file(cfg.out, text);
  } else if (const auto dir = env_out_dir()) {
    write_file(*dir / (name + extension(cfg.format)), text);
  } else {
    out << text;
  }
}

std::filesystem::path out_directory(const RunConfig& cfg) {
  std::filesystem::path dir = !cfg.out.empty() ? std::filesystem::path(cfg.out)
                                               : env_out_dir().value_or(std::filesystem::path("."));
  std::filesystem::create_directories(dir);
  return dir;
}

// Uniform samples from xmin to xmax; a range centred on 0 is sampled at
// exactly opposite points.
Header range_header(const RunConfig& cfg) {
  return {{"xmin", num(cfg.xmin)}, {"xmax", num(cfg.xmax)}, {"dx", num(cfg.dx)}};
}

std::vector<double> sample_points(const RunConfig& cfg) {
  const Grid grid = Grid::spanning(cfg.xmin, cfg.xmax, cfg.dx);
  const double mid = 0.5 * (cfg.xmin + cfg.xmax);
  const double half = 0.5 * (cfg.xmax - cfg.xmin);
  const auto last = static_cast<double>(grid.n - 1);
  std::vector<double> xs(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    xs[i] = mid + half * ((2.0 * static_cast<double>(i) - last) / last);
  }
  return xs;
}

std::vector<double> nu_values(const RunConfig& cfg) {
  return cfg.nu_list.empty() ? std::vector<double>{cfg.nu} : cfg.nu_list;
}

std::vector<Parity> parities(const RunConfig& cfg) {
  if (cfg.parity == "both") return {Parity::Even, Parity::Odd};
  return {parity_from_string(cfg.parity)};
}

std::string tag(double nu) { return "nu=" + num(nu); }

Header base_header(const RunConfig& cfg) {
  Header h{{"command", cfg.command + (cfg.figure_id.empty() ? "" : " " + cfg.figure_id)}};
  h.emplace_back("convention", to_string(cfg.convention));
  if (cfg.a1) h.emplace_back("a1", num(*cfg.a1));
  if (cfg.a2) h.emplace_back("a2", num(*cfg.a2));
  if (!cfg.a2_preset.empty()) h.emplace_back("a2_preset", cfg.a2_preset);
  h.emplace_back("nu", join(nu_values(cfg)));
  for (std::size_t i = 0; i < cfg.notes.size(); ++i) {
    h.emplace_back("note" + std::to_string(i + 1), cfg.notes[i]);
  }
  return h;
}

CoshSechParams cosh_sech(const RunConfig& cfg, double nu) {
  if (!cfg.a1) throw InvalidArgument("--a1 is required");
  double a2 = 0.0;
  if (cfg.a2) {
    a2 = *cfg.a2;
  } else if (cfg.a2_preset == "exact") {
    a2 = exact_solution_a2(nu, cfg.convention);
  } else if (cfg.a2_preset == "case-one") {
    a2 = case_one_a2(nu, cfg.convention);
  } else {
    throw InvalidArgument("--a2 or --a2-preset {exact|case-one} is required");
  }
  if (!std::isfinite(*cfg.a1) || !std::isfinite(a2) || !(nu > 0.0) || !std::isfinite(nu)) {
    throw InvalidArgument("a1, a2 must be finite and nu > 0");
  }
  return CoshSechParams{*cfg.a1, a2, nu, cfg.convention};
}

CoshSechParams case_one(const RunConfig& cfg) {
  const CoshSechParams p = cosh_sech(cfg, cfg.nu);
  if (classify(p.lower_a1(), p.lower_a2()) != CaseClass::VolcanoI) {
    throw InvalidArgument("this command needs Case I parameters (a1 > 0 and a2 > 0)");
  }
  return p;
}

double state_a1(const RunConfig& cfg, double nu) {
  if (!cfg.a1) throw InvalidArgument("--a1 is required");
  const double big_a1 = cfg.convention == Convention::CapitalA ? *cfg.a1 : 2.0 * *cfg.a1;
  if (!(big_a1 > 0.0)) throw InvalidArgument("exact states need a1 > 0");
  if (!(nu > 0.0)) throw InvalidArgument("exact states need nu > 0");
  if (cfg.a2) {
    const double needed = exact_solution_a2(nu, cfg.convention);
    if (std::abs(*cfg.a2 - needed) > 1e-12 * needed) {
      throw InvalidArgument("exact states need a2 = " + num(needed) + " for nu = " + num(nu) +
                            " in convention " + to_string(cfg.convention));
    }
  }
  return big_a1;
}

// ---------------------------------------------------------------- potential

int cmd_potential(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> xs = sample_points(cfg);
  Table table{base_header(cfg), {{"x", xs, {}}}};
  for (auto& kv : range_header(cfg)) table.header.push_back(kv);
  const double factor = cfg.times_two ? 2.0 : 1.0;
  table.header.emplace_back("scaling", cfg.times_two ? "2V" : "V");
  const std::string prefix = cfg.times_two ? "2V" : "V";

  std::vector<std::pair<std::string, PotentialSpec>> series;
  if (!cfg.potential_file.empty()) {
    std::ifstream file(cfg.potential_file);
    if (!file) throw InvalidArgument("cannot read " + cfg.potential_file);
    std::stringstream text;
    text << file.rdbuf();
    series.emplace_back(prefix, potential_from_text(text.str()));
  } else {
    for (const double nu : nu_values(cfg)) {
      const CoshSechParams p = cosh_sech(cfg, nu);
      table.header.emplace_back("case[" + tag(nu) + "]",
                                to_string(classify(p.lower_a1(), p.lower_a2())));
      series.emplace_back(prefix + "[" + tag(nu) + "]", p);
    }
  }
  for (const auto& [name, spec] : series) {
    std::string text = to_text(spec);
    std::replace(text.begin(), text.end(), '\n', ';');
    table.header.emplace_back("spec[" + name + "]", text);
    Column c{name, {}, {}};
    for (const double x : xs) c.values.push_back(factor * eval_potential(spec, x));
    table.columns.push_back(std::move(c));
  }
  emit(cfg, "potential", render(table, cfg.format), out);
  return kOk;
}

// -------------------------------------------------------------------- exact

int cmd_exact(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> xs = sample_points(cfg);
  Table table{base_header(cfg), {{"x", xs, {}}}};
  for (auto& kv : range_header(cfg)) table.header.push_back(kv);
  for (const double nu : nu_values(cfg)) {
    for (const Parity parity : parities(cfg)) {
      const ExactState state(nu, state_a1(cfg, nu), parity);
      const std::string key = tag(nu) + ";" + to_string(parity);
      table.header.emplace_back("state[" + key + "]",
                                "A1=" + num(state.big_a1()) + ";A2=" + num(state.big_a2()) +
                                    ";E=" + num(state.energy()) +
                                    ";norm_const=" + num(state.norm_const()));
      Column psi{"psi[" + key + "]", {}, {}};
      Column density{"density[" + key + "]", {}, {}};
      for (const double x : xs) {
        const double v = state(x);
        psi.values.push_back(v);
        density.values.push_back(v * v);
      }
      table.columns.push_back(std::move(psi));
      table.columns.push_back(std::move(density));
    }
  }
  emit(cfg, "exact", render(table, cfg.format), out);
  return kOk;
}

// ------------------------------------------------------------------- verify

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

constexpr double kResidualThreshold = 1e-6;
constexpr double kNormThreshold = 1e-8;
constexpr double kWronskianThreshold = 1e-10;

std::vector<Check> verify_cell(const RunConfig& cfg, double nu, double big_a1) {
  std::vector<Check> checks;
  const Grid grid = Grid::spanning(cfg.xmin, cfg.xmax, cfg.dx);
  bool both_resolved = true;
  for (const Parity parity : {Parity::Even, Parity::Odd}) {
    const ExactState state(nu, big_a1, parity);
    const ResidualReport r = residual(state, grid, cfg.energy_shift);
    const bool ok = r.relative_max() < kResidualThreshold;
    both_resolved = both_resolved && ok;
    checks.push_back({"residual_" + to_string(parity), ok, r.relative_max(), kResidualThreshold,
                      "E = " + num(state.energy() + cfg.energy_shift) +
                          ", max sqrt(Q) dx = " + num(r.max_phase_step)});
  }
  checks.push_back({"degeneracy", both_resolved, eigen_energy(nu), kResidualThreshold,
                    "even and odd states tested at the same E = " +
                        num(eigen_energy(nu) + cfg.energy_shift)});

  OscillatoryOptions alt;
  alt.near_field_panels = 1024;
  for (const Parity parity : {Parity::Even, Parity::Odd}) {
    const double n = norm_constant(nu, big_a1, parity);
    const double integral = norm_integral(nu, big_a1, parity, alt).value;
    const double err = std::abs(n * n * integral - 1.0);
    checks.push_back({"normalization_" + to_string(parity), err < kNormThreshold, err,
                      kNormThreshold,
                      std::string(nu == 1.0 ? "closed-form" : "numerical") +
                          " constant against an independent quadrature"});
  }

  const ExactState even = ExactState::unnormalized(nu, big_a1, Parity::Even);
  const ExactState odd = ExactState::unnormalized(nu, big_a1, Parity::Odd);
  const double expected = std::sqrt(big_a1);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n; i += 10) {
    worst = std::max(worst, std::abs(wronskian(even, odd, grid.at(i)) - expected) / expected);
  }
  checks.push_back({"wronskian", worst < kWronskianThreshold, worst, kWronskianThreshold,
                    "W = sqrt(A1) = " + num(expected)});

  const WindowAudit audit = bound_state_window(nu, big_a1);
  std::string detail = std::string(audit.inside ? "inside" : "outside") +
                       " (v_min, v_max): v_min = " + num(audit.v_min) +
                       (audit.v_max ? ", v_max = " + num(*audit.v_max) : ", no barrier");
  if (!audit.flag.empty()) detail += "; FLAG: " + audit.flag;
  // An audit: E outside the classical window is a property of the parameters, not a defect.
  checks.push_back({"bound_state_window", true, audit.energy, 0.0, detail});
  return checks;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> nus = cfg.nu_list.empty() ? std::vector<double>{1, 2, 3, 4} : cfg.nu_list;
  Json report;
  report["command"] = "verify";
  report["grid"] = "[" + num(cfg.xmin) + ", " + num(cfg.xmax) + "], dx = " + num(cfg.dx);
  report["energy_shift"] = cfg.energy_shift;
  report["cells"] = Json::array();
  Column c_nu{"nu", {}, {}}, c_a1{"A1", {}, {}}, c_name{"check", {}, {}}, c_pass{"pass", {}, {}},
      c_value{"value", {}, {}}, c_thr{"threshold", {}, {}}, c_detail{"detail", {}, {}};
  bool all = true;
  for (const double nu : nus) {
    for (const double big_a1 : cfg.big_a1_list) {
      Json cell;
      cell["nu"] = nu;
      cell["A1"] = big_a1;
      cell["checks"] = Json::array();
      for (const Check& c : verify_cell(cfg, nu, big_a1)) {
        all = all && c.pass;
        cell["checks"].push_back({{"name", c.name},
                                  {"pass", c.pass},
                                  {"value", c.value},
                                  {"threshold", c.threshold},
                                  {"detail", c.detail}});
        c_nu.text.push_back(num(nu));
        c_a1.text.push_back(num(big_a1));
        c_name.text.push_back(c.name);
        c_pass.text.push_back(c.pass ? "pass" : "FAIL");
        c_value.text.push_back(num(c.value));
        c_thr.text.push_back(num(c.threshold));
        std::string d = c.detail;
        std::replace(d.begin(), d.end(), ',', ';');
        c_detail.text.push_back(d);
      }
      report["cells"].push_back(cell);
    }
  }
  report["all_pass"] = all;
  if (cfg.format == Format::Json) {
    emit(cfg, "verify", report.dump(2) + "\n", out);
  } else {
    Table table{{{"command", "verify"},
                 {"grid", report["grid"].get<std::string>()},
                 {"energy_shift", num(cfg.energy_shift)},
                 {"all_pass", all ? "true" : "false"}},
                {c_nu, c_a1, c_name, c_pass, c_value, c_thr, c_detail}};
    emit(cfg, "verify", render(table, cfg.format), out);
  }
  if (!all) throw VerificationFailed("verification failed; see the report");
  return kOk;
}

// ---------------------------------------------------------------- classical

std::string interval_text(const Interval& i) { return "[" + num(i.lo) + "; " + num(i.hi) + "]"; }

int cmd_classical(const RunConfig& cfg, std::ostream& out) {
  const CoshSechParams params = case_one(cfg);
  Header header = base_header(cfg);
  const ExtremaInfo ext = extrema(params);
  header.emplace_back("v_min", num(ext.v_min));
  if (ext.v_max) {
    header.emplace_back("x_barrier", num(*ext.x_barrier));
    header.emplace_back("v_max", num(*ext.v_max));
  }

  if (!cfg.energy_sweep.empty()) {
    double lo = 0.0;
    double hi = 0.0;
    long n = 0;
    if (std::sscanf(cfg.energy_sweep.c_str(), "%lf:%lf:%ld", &lo, &hi, &n) != 3 || n < 2 ||
        !(hi > lo)) {
      throw InvalidArgument("--energy-sweep expects lo:hi:n with lo < hi and n >= 2");
    }
    Table table{header, {{"E", {}, {}}, {"x1", {}, {}}, {"x2", {}, {}}, {"band", {}, {}}}};
    for (long i = 0; i < n; ++i) {
      const double e = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
      const RegionMap map = allowed_regions(params, e);
      double x1 = NAN;
      double x2 = NAN;
      if (map.has_barrier_band) {
        x1 = map.forbidden[1].lo;
        x2 = map.forbidden[1].hi;
      }
      table.columns[0].values.push_back(e);
      table.columns[1].values.push_back(x1);
      table.columns[2].values.push_back(x2);
      table.columns[3].values.push_back(map.has_barrier_band ? 1.0 : 0.0);
    }
    emit(cfg, "classical", render(table, cfg.format), out);
    return kOk;
  }

  if (cfg.energy) {
    const RegionMap map = allowed_regions(params, *cfg.energy);
    header.emplace_back("E", num(*cfg.energy));
    header.emplace_back("barrier_band", map.has_barrier_band ? "true" : "false");
    if (ext.v_max && *cfg.energy > ext.v_min && *cfg.energy < *ext.v_max) {
      header.emplace_back("period", num(oscillation_period(params, *cfg.energy)));
    }
    Table table{header, {{"region", {}, {}}, {"lo", {}, {}}, {"hi", {}, {}}}};
    const auto add = [&table](const std::string& kind, const std::vector<Interval>& list) {
      for (const Interval& i : list) {
        table.columns[0].text.push_back(kind);
        table.columns[1].text.push_back(num(i.lo));
        table.columns[2].text.push_back(num(i.hi));
      }
    };
    add("allowed", map.allowed);
    add("forbidden", map.forbidden);
    add("escape", map.escape);
    emit(cfg, "classical", render(table, cfg.format), out);
    return kOk;
  }

  const Regime regime = classify_initial(params, cfg.x0, cfg.v0);
  const Trajectory traj =
      integrate_trajectory(params, cfg.x0, cfg.v0, cfg.dt, cfg.steps, cfg.horizon);
  header.emplace_back("x0", num(cfg.x0));
  header.emplace_back("v0", num(cfg.v0));
  header.emplace_back("dt", num(cfg.dt));
  header.emplace_back("steps", std::to_string(cfg.steps));
  header.emplace_back("regime", to_string(regime));
  header.emplace_back("escaped", traj.escaped ? "true" : "false");
  header.emplace_back("max_energy_drift", num(traj.max_energy_drift));
  Table table{header, {{"t", {}, {}}, {"x", {}, {}}, {"v", {}, {}}, {"E", {}, {}}}};
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    table.columns[0].values.push_back(traj.points[i].t);
    table.columns[1].values.push_back(traj.points[i].x);
    table.columns[2].values.push_back(traj.points[i].v);
    table.columns[3].values.push_back(traj.energies[i]);
  }
  emit(cfg, "classical", render(table, cfg.format), out);
  return kOk;
}

// -------------------------------------------------------------- observables

Json verdict_json(const ConvergenceVerdict& v) {
  Json j;
  if (const auto* c = std::get_if<Converged>(&v)) {
    j["verdict"] = "converged";
    j["limit"] = c->limit;
    j["last_delta"] = c->last_delta;
  } else if (const auto* d = std::get_if<Diverging>(&v)) {
    j["verdict"] = "diverging";
    j["growth_rate"] = d->growth_rate;
    j["sign"] = d->sign;
    j["description"] = d->description;
  } else {
    j["verdict"] = "inconclusive";
    j["reason"] = std::get<Inconclusive>(v).reason;
  }
  return j;
}

Table series_table(const Header& header, const ObservableReport& report) {
  Header h = header;
  h.emplace_back("observable", report.name);
  h.emplace_back("verdict", describe(report.verdict));
  Table t{h, {{"L_requested", report.series.requested, {}}, {"L", report.series.cutoffs, {}},
              {"value", report.series.values, {}}}};
  Column tails{"tail", report.series.tails, {}};
  if (tails.values.empty()) tails.values.assign(report.series.values.size(), NAN);
  t.columns.push_back(std::move(tails));
  return t;
}

int cmd_observables(const RunConfig& cfg, std::ostream& out) {
  const std::filesystem::path dir = out_directory(cfg);
  Json summary;
  bool settled = true;
  for (const Parity parity : parities(cfg)) {
    const ExactState state(cfg.nu, state_a1(cfg, cfg.nu), parity);
    const std::string suffix = cfg.parity == "both" ? "_" + to_string(parity) : "";
    Header header = base_header(cfg);
    header.emplace_back("parity", to_string(parity));
    header.emplace_back("A1", num(state.big_a1()));
    header.emplace_back("E", num(state.energy()));
    header.emplace_back("norm_const", num(state.norm_const()));

    const std::vector<std::pair<std::string, ObservableReport>> reports{
        {"x", position_series(state, cfg.cutoffs)},
        {"p", momentum_series(state, cfg.cutoffs)},
        {"x2", expect_x2(state, cfg.cutoffs)},
        {"p2", expect_p2(state, cfg.cutoffs)},
        {"h", regularized_energy(state, cfg.cutoffs)},
    };
    Json block;
    block["A1"] = state.big_a1();
    block["nu"] = state.nu();
    block["E"] = state.energy();
    for (const auto& [file, report] : reports) {
      write_file(dir / (file + suffix + extension(cfg.format)),
                 render(series_table(header, report), cfg.format));
      block[report.name] = verdict_json(report.verdict);
      if (std::holds_alternative<Inconclusive>(report.verdict)) settled = false;
      if (file == "x2") {
        if (const auto* c = std::get_if<Converged>(&report.verdict)) {
          block["delta_x"] = std::sqrt(c->limit);
        }
      }
    }
    block["<x>"]["whole_line"] = expect_position(state);
    block["<p>"]["whole_line"] = expect_momentum(state);
    if (cfg.k_max > 0.0) {
      const MomentumSpectrum spec =
          momentum_spectrum(state, cfg.k_max, static_cast<std::size_t>(cfg.n_k));
      Header h = header;
      h.emplace_back("dx", num(spec.dx));
      h.emplace_back("half_width", num(spec.half_width));
      h.emplace_back("mass", num(spectrum_mass(spec)));
      Table t{h, {{"k", spec.k, {}}, {"re", spec.re, {}}, {"im", spec.im, {}},
                  {"density", spec.density, {}}}};
      write_file(dir / ("spectrum" + suffix + extension(cfg.format)), render(t, cfg.format));
      block["spectrum_mass"] = spectrum_mass(spec);
    }
    summary[to_string(parity)] = block;
  }
  const std::string text = summary.dump(2) + "\n";
  write_file(dir / "summary.json", text);
  out << text;
  if (!settled) throw ConvergenceError("at least one observable series is inconclusive");
  return kOk;
}

// -------------------------------------------------------------------- nodes

int cmd_nodes(const RunConfig& cfg, std::ostream& out) {
  Table table{base_header(cfg), {}};
  table.header.emplace_back("x_max", num(cfg.x_max));
  Column c_state{"state", {}, {}}, c_index{"index", {}, {}}, c_x{"x", {}, {}},
      c_density{"dn_dx", {}, {}};
  for (const double nu : nu_values(cfg)) {
    for (const Parity parity : parities(cfg)) {
      const ExactState state(nu, state_a1(cfg, nu), parity);
      const std::string key = tag(nu) + ";" + to_string(parity);
      const std::vector<double> nodes = node_positions(state, cfg.x_max);
      table.header.emplace_back("count[" + key + "]", std::to_string(nodes.size()));
      table.header.emplace_back("integrated_density[" + key + "]",
                                num(state.phi(cfg.x_max) / std::numbers::pi));
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        c_state.text.push_back(key);
        c_index.text.push_back(std::to_string(i));
        c_x.text.push_back(num(nodes[i]));
        c_density.text.push_back(num(node_density(state, nodes[i])));
      }
    }
  }
  table.columns = {c_state, c_index, c_x, c_density};
  emit(cfg, "nodes", render(table, cfg.format), out);
  return kOk;
}

// ------------------------------------------------------------------ figures

int cmd_figure(RunConfig cfg, std::ostream& out) {
  const std::string& id = cfg.figure_id;
  if (id == "1") {
    cfg.convention = Convention::CapitalA;
    cfg.a1 = 0.009;
    cfg.a2.reset();
    cfg.a2_preset = "exact";
    cfg.nu_list = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    cfg.times_two = true;
    cfg.notes = {"caption reads 2V with a1 = 0.009 and a2 = (nu/2)(nu/2+1)",
                 "taken as the CapitalA convention: 2V = -(A1 cosh^{2nu} x + A2 sech^2 x) with "
                 "A1 = 0.009 and A2 = (nu/2)(nu/2+1)"};
    return cmd_potential(cfg, out);
  }
  if (id == "2") {
    cfg.convention = Convention::LowercaseA;
    cfg.a1 = 0.0;
    cfg.a2 = 0.375;
    cfg.nu_list = {1};
    cfg.notes = {"a1 = 0: the Poschl-Teller well V = -a2 sech^2 x"};
    return cmd_potential(cfg, out);
  }
  if (id == "3" || id == "4" || id == "5" || id == "6") {
    cfg.convention = Convention::LowercaseA;
    cfg.a1 = 0.009;
    cfg.a2.reset();
    cfg.nu_list = {1, 4};
    cfg.parity = (id == "3" || id == "4") ? "even" : "odd";
    cfg.notes = {"captions do not give A1; a1 = 0.009 (A1 = 0.018) is used",
                 std::string(id == "3" || id == "5" ? "wave function" : "probability density") +
                     " columns are the ones to plot"};
    return cmd_exact(cfg, out);
  }
  throw InvalidArgument("unknown figure '" + id + "' (expected 1 to 6)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string convention = "a";
  std::string format = "csv";

  CLI::App app{"Volcano potentials: construction, exact states, verification, figure data"};
  app.set_config("--config", "", "File of key=value lines; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--a1", cfg.a1, "Coupling a1 (or A1 with --convention A)");
  app.add_option("--a2", cfg.a2, "Coupling a2 (or A2 with --convention A)");
  app.add_option("--a2-preset", cfg.a2_preset, "exact: (nu/2)(nu/2+1); case-one: nu(nu+1)")
      ->check(CLI::IsMember({"exact", "case-one"}));
  app.add_option("--nu", cfg.nu, "Shape exponent");
  app.add_option("--nu-list", cfg.nu_list, "Several nu, comma separated")->delimiter(',');
  app.add_option("--convention", convention, "a: (a1, a2) as in V; A: (A1, A2) = (2a1, 2a2)")
      ->check(CLI::IsMember({"a", "A"}));
  app.add_option("--potential-file", cfg.potential_file, "Potential in key=value form");
  CLI::Option* xmin = app.add_option("--xmin", cfg.xmin, "Range start (verify: -5, else -6)");
  CLI::Option* xmax = app.add_option("--xmax", cfg.xmax, "Range end (verify: 5, else 6)");
  CLI::Option* dx = app.add_option("--dx", cfg.dx, "Sample step (verify: 1e-3, else 0.01)");
  app.add_option("--out", cfg.out, "Output file (directory for observables)");
  app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--times-two", cfg.times_two, "Emit 2V instead of V");
  app.add_option("--parity", cfg.parity)->check(CLI::IsMember({"even", "odd", "both"}));
  app.add_option("--big-a1-list", cfg.big_a1_list, "A1 values of the verification matrix")
      ->delimiter(',');
  app.add_option("--energy-shift", cfg.energy_shift, "Offset added to E in residual checks");
  app.add_option("--x0", cfg.x0);
  app.add_option("--v0", cfg.v0);
  app.add_option("--dt", cfg.dt);
  app.add_option("--steps", cfg.steps);
  app.add_option("--horizon", cfg.horizon);
  app.add_option("--energy", cfg.energy, "Energy for a region report");
  app.add_option("--energy-sweep", cfg.energy_sweep, "lo:hi:n forbidden-band sweep");
  app.add_option("--cutoffs", cfg.cutoffs, "Cutoff schedule L, comma separated")->delimiter(',');
  app.add_option("--k-max", cfg.k_max, "Also write the momentum spectrum up to k_max");
  app.add_option("--n-k", cfg.n_k);
  app.add_option("--x-max", cfg.x_max, "Upper end of the node search");

  app.add_subcommand("potential", "Sample V(x)");
  app.add_subcommand("exact", "Sample the exact states and their densities");
  app.add_subcommand("verify", "Residual, normalization, degeneracy, Wronskian, window checks");
  app.add_subcommand("classical", "Trajectory, region report or forbidden-band sweep");
  app.add_subcommand("observables", "Cutoff series and verdicts for <x>, <p>, <x^2>, <p^2>, <H>");
  app.add_subcommand("nodes", "Zeros of the exact states");
  CLI::App* figure = app.add_subcommand("figure", "Data behind a published figure");
  figure->add_option("id", cfg.figure_id, "1 to 6")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  cfg.convention = convention_from_string(convention);
  cfg.format = format == "json" ? Format::Json : Format::Csv;
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command == "verify") {
    if (xmin->count() == 0) cfg.xmin = -5.0;
    if (xmax->count() == 0) cfg.xmax = 5.0;
    if (dx->count() == 0) cfg.dx = 1e-3;
  }
  if (cfg.command == "figure" && cfg.figure_id == "1") {
    if (xmin->count() == 0) cfg.xmin = -2.0;
    if (xmax->count() == 0) cfg.xmax = 2.0;
  }

  try {
    if (cfg.command == "potential" || cfg.command == "exact") {
      if (!(cfg.dx > 0.0) || !(cfg.xmax > cfg.xmin)) {
        throw InvalidArgument("need xmin < xmax and dx > 0");
      }
    }
    if (cfg.command == "potential") return cmd_potential(cfg, out);
    if (cfg.command == "exact") return cmd_exact(cfg, out);
    if (cfg.command == "verify") {
      if (!(cfg.dx <= kMaxResidualStep)) {
        throw InvalidArgument("verify needs dx <= " + num(kMaxResidualStep));
      }
      return cmd_verify(cfg, out);
    }
    if (cfg.command == "classical") return cmd_classical(cfg, out);
    if (cfg.command == "observables") return cmd_observables(cfg, out);
    if (cfg.command == "nodes") return cmd_nodes(cfg, out);
    return cmd_figure(cfg, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const VerificationFailed& e) {
    err << "error: " << e.what() << "\n";
    return kVerification;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace volcano::cli
