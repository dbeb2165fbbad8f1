#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "extenso/report.hpp"

namespace extenso::cli {

enum class Command { verify_sandwich, residual, bounds, recover_f, counterexample, axioms, theta_phi };

struct RunConfig {
  Command command = Command::verify_sandwich;
  std::string density = "bg";  ///< kind name, inline JSON spec, or path to a JSON spec
  std::optional<double> q;
  std::size_t m = 4;
  std::size_t n = 4;
  std::size_t instances = 100;
  std::uint64_t seed = 0;
  double concentration = 1.0;
  double t_min = 1e-6;
  std::size_t grid_n = 1024;
  std::optional<double> tolerance;  ///< per-command default when unset
  std::vector<double> r;            ///< bounds: evaluation points
  std::string target;               ///< counterexample: remark2 | remark5
  double x = 0.01;
  int k_max = 20;
  unsigned jobs = 1;
  std::string output;  ///< empty means stdout
  std::string format = "json";
};

/// Thrown for a configuration that cannot be run; maps to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunResult {
  BatchReport report;
  int exit_code = 0;  ///< 0 iff fail_count == 0
};

RunResult run(const RunConfig& cfg);

/// Full command-line entry point: parses argv, runs, writes the report.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace extenso::cli
