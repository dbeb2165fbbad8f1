#include "extenso/extensivity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "extenso/error.hpp"

namespace extenso {

Coefficient power_coefficient(double q) {
  return [q](double r) { return std::pow(r, q); };
}

double extensivity_residual(const EntropyFunctional& functional, const JointMatrix& joint, const Coefficient& f) {
  const SimplexVector p = marginal(joint);
  double weighted = 0.0;
  for (std::size_t j = 0; j < joint.cols(); ++j) {
    const double coeff = f(p[j]);
    if (!std::isfinite(coeff)) {
      throw Error(Errc::invalid_parameter, "coefficient undefined at p_j=" + std::to_string(p[j]));
    }
    weighted += coeff * functional(conditional(joint, j));
  }
  return functional(joint) - functional(p) - weighted;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::divergent: return "divergent";
  }
  return "fail";
}

const char* to_string(PowerVerdict v) noexcept {
  switch (v) {
    case PowerVerdict::power: return "power";
    case PowerVerdict::not_power: return "not_power";
    case PowerVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SandwichReport sandwich_check(const EntropyFunctional& functional, const JointMatrix& joint,
                              const SandwichConfig& cfg) {
  const Density& original = functional.density();
  if (!original.flags().s0_zero || !original.flags().concave) {
    throw Error(Errc::precondition, original.label() + " must satisfy s(0) = 0 and s'' < 0");
  }
  const EntropyFunctional f(original.flags().s1_zero ? original : shifted_density(original));
  const Density& d = f.density();

  const SimplexVector p = marginal(joint);
  SandwichReport out;
  out.diff = f(joint) - f(p);

  const double slope_at_one = d.s1(1.0);
  double weighted_lower = 0.0;
  double weighted_upper = 0.0;
  double gap = 0.0;
  double err_lower = 0.0;
  double err_upper = 0.0;
  double err_gap = 0.0;
  for (std::size_t j = 0; j < joint.cols(); ++j) {
    const CoefficientBounds b = coefficient_bounds(d, p[j], cfg.bounds);
    if (b.divergent) {
      out.lower = out.upper = std::numeric_limits<double>::quiet_NaN();
      out.slack_lower = out.slack_upper = std::numeric_limits<double>::quiet_NaN();
      out.verdict = Verdict::divergent;
      return out;
    }
    const double cond_entropy = f(conditional(joint, j));
    weighted_lower += b.lower * cond_entropy;
    weighted_upper += b.upper * cond_entropy;
    gap += b.upper - b.lower;
    err_lower += b.lower_error() * std::abs(cond_entropy);
    err_upper += b.upper_error() * std::abs(cond_entropy);
    err_gap += b.lower_error() + b.upper_error();
  }
  out.lower = weighted_lower + slope_at_one * gap;
  out.upper = weighted_upper - slope_at_one * gap;
  out.slack_lower = out.diff - out.lower;
  out.slack_upper = out.upper - out.diff;
  out.tolerance = std::max(err_lower, err_upper) + std::abs(slope_at_one) * err_gap + cfg.base_tolerance;
  out.verdict = out.slack_lower >= -out.tolerance && out.slack_upper >= -out.tolerance ? Verdict::pass
                                                                                      : Verdict::fail;
  return out;
}

double iff_lhs(const EntropyFunctional& functional, const JointMatrix& joint, const SandwichConfig& cfg) {
  const SandwichReport report = sandwich_check(functional, joint, cfg);
  if (report.verdict == Verdict::divergent) {
    throw Error(Errc::precondition, "coefficient bounds diverge for " + functional.density().label());
  }
  return report.lower;
}

JointMatrix iff_witness_matrix(double x) {
  if (!(x > 0.0 && x < 1.0)) throw Error(Errc::invalid_parameter, "x must lie in (0, 1)");
  return JointMatrix(2, 2, {0.5, 0.5 * x, 0.0, 0.5 * (1.0 - x)});
}

// ---------------------------------------------------------------------------

double Reconstruction::operator()(double r, double q) const {
  if (log_branch) return (r > 0.0 ? k * r * std::log(r) : 0.0) + a * r + b;
  return k * (std::pow(r, q) - r) / (q - 1.0) + a * r + b;
}

PowerRecovery recover_f(const Density& d, const RecoveryConfig& cfg) {
  if (!d.flags().concave) throw Error(Errc::precondition, d.label() + " is not flagged concave");
  if (cfg.r_grid.empty() || cfg.x_probes.empty()) throw Error(Errc::invalid_parameter, "empty probe grid");

  PowerRecovery out;
  bool finite = true;
  const auto f_at = [&](double r) {
    double sum = 0.0;
    for (double x : cfg.x_probes) {
      const double v = r * r * d.s2(r * x) / d.s2(x);
      if (!std::isfinite(v)) finite = false;
      sum += v;
    }
    return sum / static_cast<double>(cfg.x_probes.size());
  };

  std::vector<double> exponents;
  bool positive = true;
  for (double r : cfg.r_grid) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double x : cfg.x_probes) {
      const double v = r * r * d.s2(r * x) / d.s2(x);
      if (!std::isfinite(v)) finite = false;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double mean = f_at(r);
    out.x_spread = std::max(out.x_spread, (hi - lo) / std::abs(mean));
    if (!(mean > 0.0)) positive = false;
    exponents.push_back(std::log(mean) / std::log(r));
  }
  if (!finite || !positive) {
    out.verdict = finite ? PowerVerdict::not_power : PowerVerdict::inconclusive;
    out.consistency = std::numeric_limits<double>::infinity();
    return out;
  }

  double sum = 0.0;
  for (double e : exponents) sum += e;
  out.q_est = sum / static_cast<double>(exponents.size());
  for (double e : exponents) out.exponent_spread = std::max(out.exponent_spread, std::abs(e - out.q_est));
  out.consistency = std::max(out.x_spread, out.exponent_spread);

  // f(r) f((1-t)/t) = f(r (1-t)/t)
  for (double r : cfg.r_grid) {
    for (double t : cfg.t_probes) {
      const double u = (1.0 - t) / t;
      out.multiplicativity_defect =
          std::max(out.multiplicativity_defect, std::abs(f_at(r) * f_at(u) - f_at(r * u)));
    }
  }
  if (!finite) {
    out.verdict = PowerVerdict::inconclusive;
    return out;
  }

  if (!(out.q_est > 0.0)) {
    out.verdict = PowerVerdict::not_power;
    return out;
  }
  if (out.consistency > cfg.consistency_tol || out.multiplicativity_defect > cfg.multiplicativity_tol) {
    out.verdict = PowerVerdict::not_power;
    return out;
  }
  out.verdict = PowerVerdict::power;

  const double q = out.q_est;
  const double s2_one = d.s2(1.0);
  const double s1_one = d.s1(1.0);
  const double s_one = d.s(1.0);
  Reconstruction rec;
  if (std::abs(q - 1.0) < cfg.log_branch_width) {
    rec.log_branch = true;
    rec.k = s2_one;
    rec.a = -s2_one + s1_one;
    rec.b = s2_one - s1_one + s_one;
  } else {
    rec.k = s2_one / q;
    rec.a = -s2_one / q + s1_one;
    rec.b = s2_one / q - s1_one + s_one;
  }
  for (std::size_t i = 1; i <= cfg.reconstruction_grid; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(cfg.reconstruction_grid);
    rec.max_error = std::max(rec.max_error, std::abs(rec(r, q) - d.s(r)));
  }
  out.reconstruction = rec;
  return out;
}

namespace {

void require_twice_arguments(double r, double xi, double x) {
  if (!(r > 0.0 && r < 1.0)) throw Error(Errc::invalid_parameter, "r must lie in (0, 1)");
  if (!(x > 0.0 && x < xi && xi <= 1.0)) throw Error(Errc::invalid_parameter, "need 0 < x < xi <= 1");
}

}  // namespace

double check_twice_equation(const Density& d, const Coefficient& f, double r, double xi, double x) {
  require_twice_arguments(r, xi, x);
  return r * r * (d.s2(r * x) + d.s2(r * (xi - x))) - f(r) * (d.s2(x) + d.s2(xi - x));
}

JointMatrix twice_matrix(double r, double xi, double x) {
  require_twice_arguments(r, xi, x);
  const double second = (1.0 - r) / 3.0;
  return JointMatrix(3, 2, {r * x, second, r * (xi - x), second, r * (1.0 - xi), second});
}

double twice_residual_by_differences(const EntropyFunctional& functional, const Coefficient& f, double r,
                                     double xi, double x, double h) {
  if (!(x - h > 0.0 && x + h < xi)) throw Error(Errc::invalid_parameter, "difference stencil leaves (0, xi)");
  const auto residual = [&](double at) { return extensivity_residual(functional, twice_matrix(r, xi, at), f); };
  return (residual(x + h) - 2.0 * residual(x) + residual(x - h)) / (h * h);
}

// ---------------------------------------------------------------------------

namespace {

// Exercises exact zeros: drop the smallest entry and renormalize.
SimplexVector with_smallest_zeroed(const SimplexVector& p) {
  std::vector<double> v(p.entries().begin(), p.entries().end());
  *std::min_element(v.begin(), v.end()) = 0.0;
  double total = 0.0;
  for (double x : v) total += x;
  for (double& x : v) x /= total;
  double drift = 1.0;
  for (double x : v) drift -= x;
  *std::max_element(v.begin(), v.end()) += drift;
  return SimplexVector(std::move(v));
}

}  // namespace

AxiomReport axiom_suite(const EntropyFunctional& functional, std::span<const std::size_t> sizes,
                        std::uint64_t seed, std::size_t instances_per_size) {
  const Density& d = functional.density();
  if (!d.flags().s0_zero || !d.flags().concave) {
    throw Error(Errc::precondition, d.label() + " must satisfy s(0) = 0 and be concave");
  }
  constexpr std::array<double, 3> eps_levels = {1e-2, 1e-4, 1e-6};
  constexpr std::array<double, 3> concentrations = {0.2, 1.0, 5.0};

  AxiomReport report;
  report.worst_maximality_slack = std::numeric_limits<double>::infinity();
  for (double eps : eps_levels) report.continuity.push_back({eps, 0.0});

  for (std::size_t n : sizes) {
    const double s_uniform = functional(SimplexVector::uniform(n));
    for (std::size_t i = 0; i < instances_per_size; ++i) {
      auto rng = instance_rng(seed, i, n);
      const SimplexVector p = i % 5 == 4 && n >= 2 ? with_smallest_zeroed(random_simplex(n, rng, concentrations[i % 3]))
                                                   : random_simplex(n, rng, concentrations[i % 3]);
      const double s_p = functional(p);
      ++report.instances;

      const double slack = s_uniform - s_p;
      report.worst_maximality_slack = std::min(report.worst_maximality_slack, slack);
      if (!(slack >= -1e-12)) ++report.maximality_failures;

      if (functional(p.expanded_with_zero()) != s_p) ++report.expandability_failures;

      bool continuity_ok = true;
      for (std::size_t e = 0; e < eps_levels.size(); ++e) {
        const SimplexVector direction = random_simplex(n, rng, 1.0);
        std::vector<double> moved(n);
        for (std::size_t j = 0; j < n; ++j) moved[j] = (1.0 - eps_levels[e]) * p[j] + eps_levels[e] * direction[j];
        const double change = std::abs(functional(SimplexVector(std::move(moved))) - s_p);
        if (!std::isfinite(change)) {
          continuity_ok = false;
          continue;
        }
        report.continuity[e].modulus = std::max(report.continuity[e].modulus, change);
      }
      if (!continuity_ok) ++report.continuity_failures;
    }
  }
  for (std::size_t e = 1; e < report.continuity.size(); ++e) {
    if (report.continuity[e].modulus > report.continuity[e - 1].modulus) report.modulus_shrinks = false;
  }
  return report;
}

bool monotonicity_check(const EntropyFunctional& functional, const JointMatrix& joint) {
  return functional(joint) >= functional(marginal(joint)) - 1e-10;
}

}  // namespace extenso
