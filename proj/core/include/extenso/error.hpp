#pragma once

#include <stdexcept>
#include <string>

namespace extenso {

enum class Errc {
  invalid_simplex,
  zero_marginal,
  index_out_of_range,
  dimension_mismatch,
  invalid_parameter,
  undefined_at_zero,
  precondition,
  no_convergence,
  retry_exhausted,
  parse_error,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by the adaptive quadrature when the depth cap or evaluation budget
/// is hit; carries the estimate accumulated so far.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double partial)
      : Error(Errc::no_convergence, what), partial_(partial) {}

  double partial() const noexcept { return partial_; }

 private:
  double partial_;
};

inline const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_simplex: return "InvalidSimplex";
    case Errc::zero_marginal: return "ZeroMarginal";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::invalid_parameter: return "InvalidParameter";
    case Errc::undefined_at_zero: return "UndefinedAtZero";
    case Errc::precondition: return "Precondition";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::retry_exhausted: return "RetryExhausted";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

}  // namespace extenso
