#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extenso/bounds.hpp"
#include "extenso/densities.hpp"
#include "extenso/simplex.hpp"

namespace extenso {

/// Coefficient function f on (0, 1] multiplying the conditional entropies.
using Coefficient = std::function<double(double)>;

/// f(r) = r^q.
Coefficient power_coefficient(double q);

/// S(P) - S(marginal) - sum_j f(p_j) S(conditional_j).
double extensivity_residual(const EntropyFunctional& functional, const JointMatrix& joint, const Coefficient& f);

// ---------------------------------------------------------------------------
// Two-sided estimate of S(P) - S(marginal)
// ---------------------------------------------------------------------------

enum class Verdict { pass, fail, divergent };
const char* to_string(Verdict v) noexcept;

struct SandwichConfig {
  BoundsConfig bounds;
  double base_tolerance = 1e-9;
};

struct SandwichReport {
  double diff = 0.0;   ///< S(P) - S(marginal)
  double lower = 0.0;
  double upper = 0.0;
  double slack_lower = 0.0;  ///< diff - lower
  double slack_upper = 0.0;  ///< upper - diff
  double tolerance = 0.0;
  Verdict verdict = Verdict::pass;
};

/// Evaluates
///   lower = sum_j fl(p_j) S(c_j) + s'(1) sum_j (fu(p_j) - fl(p_j))
///   upper = sum_j fu(p_j) S(c_j) - s'(1) sum_j (fu(p_j) - fl(p_j))
/// with fl, fu from coefficient_bounds, and checks lower <= diff <= upper up
/// to the propagated bound error plus cfg.base_tolerance.
///
/// Requires s(0) = 0 and s'' < 0. A density with s(1) != 0 is replaced by
/// shifted_density first, which leaves diff unchanged.
SandwichReport sandwich_check(const EntropyFunctional& functional, const JointMatrix& joint,
                              const SandwichConfig& cfg = {});

/// The lower bound of sandwich_check on its own; when it is negative the
/// lower estimate says less than S(P) >= S(marginal).
double iff_lhs(const EntropyFunctional& functional, const JointMatrix& joint, const SandwichConfig& cfg = {});

/// 2x2 joint law with p^1_1 = 1/2, p^2_1 = 0, p^1_2 = x/2, p^2_2 = (1-x)/2.
JointMatrix iff_witness_matrix(double x);

// ---------------------------------------------------------------------------
// Power-law recovery of the coefficient function
// ---------------------------------------------------------------------------

enum class PowerVerdict { power, not_power, inconclusive };
const char* to_string(PowerVerdict v) noexcept;

/// Closed-form reconstruction of s from s(1), s'(1), s''(1) and q:
///   q != 1: s(r) = k (r^q - r)/(q - 1) + a r + b
///   q == 1: s(r) = k r log r + a r + b
struct Reconstruction {
  double k = 0.0;
  double a = 0.0;
  double b = 0.0;
  bool log_branch = false;
  double max_error = 0.0;  ///< against Density::s on the reconstruction grid

  double operator()(double r, double q) const;
};

struct PowerRecovery {
  double q_est = 0.0;
  double consistency = 0.0;  ///< max(x_spread, exponent_spread)
  double x_spread = 0.0;     ///< max over r of the relative spread of f(r; x) across x
  double exponent_spread = 0.0;  ///< max over r of |log f(r) / log r - q_est|
  double multiplicativity_defect = 0.0;
  PowerVerdict verdict = PowerVerdict::inconclusive;
  std::optional<Reconstruction> reconstruction;
};

struct RecoveryConfig {
  std::vector<double> r_grid = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50,
                                0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90};
  std::vector<double> x_probes = {0.125, 0.25, 0.375, 0.5};
  std::vector<double> t_probes = {0.5, 0.6, 0.7, 0.8, 0.9};
  std::size_t reconstruction_grid = 256;
  double consistency_tol = 1e-4;
  double multiplicativity_tol = 1e-6;
  double log_branch_width = 1e-3;
};

/// Probes f(r; x) = r^2 s''(rx)/s''(x), which must be independent of x and a
/// power of r if S satisfies the generalized chain rule with coefficient f.
PowerRecovery recover_f(const Density& d, const RecoveryConfig& cfg = {});

/// Residual of r^2 {s''(rx) + s''(r(xi - x))} = f(r) {s''(x) + s''(xi - x)}.
double check_twice_equation(const Density& d, const Coefficient& f, double r, double xi, double x);

/// 3x2 joint law with first column (r x, r (xi - x), r (1 - xi)) and second
/// column (1 - r)/3 in every row.
JointMatrix twice_matrix(double r, double xi, double x);

/// Second central difference in x of extensivity_residual over twice_matrix;
/// approximates check_twice_equation.
double twice_residual_by_differences(const EntropyFunctional& functional, const Coefficient& f, double r,
                                     double xi, double x, double h = 1e-4);

// ---------------------------------------------------------------------------
// Continuity, maximality, expandability
// ---------------------------------------------------------------------------

struct ContinuityModulus {
  double eps = 0.0;
  double modulus = 0.0;  ///< max |S(p) - S(p')| over sampled |p - p'|_inf <= eps
};

struct AxiomReport {
  std::size_t instances = 0;
  std::size_t continuity_failures = 0;
  std::size_t maximality_failures = 0;
  std::size_t expandability_failures = 0;
  double worst_maximality_slack = 0.0;  ///< min of S(uniform) - S(p)
  std::vector<ContinuityModulus> continuity;
  bool modulus_shrinks = true;

  bool passed() const {
    return continuity_failures == 0 && maximality_failures == 0 && expandability_failures == 0 && modulus_shrinks;
  }
};

/// Requires s(0) = 0 and concavity. For each n in sizes, draws
/// instances_per_size random p (seeded) and checks continuity, maximality
/// (S(p) <= S(uniform) + 1e-12) and exact expandability.
AxiomReport axiom_suite(const EntropyFunctional& functional, std::span<const std::size_t> sizes,
                        std::uint64_t seed, std::size_t instances_per_size = 200);

/// S(P) >= S(marginal) - 1e-10.
bool monotonicity_check(const EntropyFunctional& functional, const JointMatrix& joint);

}  // namespace extenso
