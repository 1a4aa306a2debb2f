#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "volcano/observables.hpp"
#include "volcano/potential.hpp"

namespace volcano::cli {

enum ExitCode {
  kOk = 0,
  kValidation = 1,
  kVerification = 2,
  kNonConvergence = 3,
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::string figure_id;

  std::optional<double> a1;
  std::optional<double> a2;
  std::string a2_preset;  // "exact" or "case-one"
  double nu = 1.0;
  std::vector<double> nu_list;
  Convention convention = Convention::LowercaseA;
  std::string potential_file;

  double xmin = -6.0;
  double xmax = 6.0;
  double dx = 0.01;
  std::string out;
  Format format = Format::Csv;
  bool times_two = false;

  std::string parity = "even";  // even, odd or both

  std::vector<double> big_a1_list{0.018, 0.1, 1.0};
  double energy_shift = 0.0;

  double x0 = 0.0;
  double v0 = 0.0;
  double dt = 1e-3;
  long steps = 10000;
  double horizon = 20.0;
  std::optional<double> energy;
  std::string energy_sweep;  // "lo:hi:n"

  std::vector<double> cutoffs = default_cutoffs();
  double k_max = 0.0;
  long n_k = 1001;

  double x_max = 6.0;

  std::vector<std::string> notes;
};

/// Parses argv, runs the command and returns the exit code.  Data goes to
/// `out` unless a file destination applies; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace volcano::cli
