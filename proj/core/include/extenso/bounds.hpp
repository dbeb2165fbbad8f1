#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>

#include "extenso/densities.hpp"
#include "extenso/numerics.hpp"

namespace extenso {

struct BoundsConfig {
  double t_min = 1e-6;
  std::size_t grid_n = 1024;
  int probe_k_max = 40;                 ///< extra samples at t = 2^-k
  double divergence_threshold = 1e12;  ///< applied to the scaled upper bound r^2 sup
  int growth_blocks = 8;                ///< consecutive growing witness blocks that signal divergence
  double growth_factor = 1.5;
};

/// Lower and upper coefficient bounds at r:
///   lower = r^2 inf_t s''(rt)/s''(t),  upper = r^2 sup_t s''(rt)/s''(t).
/// The grid inf is an overestimate and the grid sup an underestimate; the
/// *_error members give the slack consumers should apply.
struct CoefficientBounds {
  double r = 1.0;
  double lower = 1.0;
  double upper = 1.0;
  OptResult lower_meta;
  OptResult upper_meta;
  bool divergent = false;

  double lower_error() const { return r * r * lower_meta.est_error; }
  double upper_error() const { return r * r * upper_meta.est_error; }
  double combined_error() const { return lower_error() + upper_error(); }
};

CoefficientBounds coefficient_bounds(const Density& d, double r, const BoundsConfig& cfg = {});

/// CSV with columns r,lower,upper,arg_inf,arg_sup,divergent.
std::string bounds_csv(std::span<const CoefficientBounds> rows);

/// A positive nondecreasing function on (0, inf) given on (0, 1] by -1/s''
/// and continued linearly past 1 with the left slope at 1.
class PhiFunction {
 public:
  PhiFunction(std::function<double(double)> on_unit, double slope_at_one, std::string domain_note);

  double operator()(double r) const;
  double slope_at_one() const noexcept { return slope_; }
  const std::string& domain_note() const noexcept { return note_; }

 private:
  std::function<double(double)> on_unit_;
  double value_at_one_;
  double slope_;
  std::string note_;
};

/// phi = -1/s''. Throws Errc::precondition if s'' >= 0 somewhere on the
/// canonical grid or if -1/s'' decreases there.
PhiFunction phi_from_density(const Density& d);

struct ThetaConfig {
  double r_lo = 1e-4;
  double r_hi = 1e4;
  std::size_t grid_n = 8001;
  std::array<double, 3> eps = {1e-4, 1e-5, 1e-6};
};

/// sup over r of (r / phi(r)) * limsup (phi(r + e) - phi(r)) / e, with the
/// limsup taken as the max over forward steps eps * r, eps in cfg.eps, and the sup over
/// a log grid on [r_lo, r_hi] that always contains r = 1. Returns +inf on
/// overflow.
double theta_phi(const PhiFunction& phi, const ThetaConfig& cfg = {});

}  // namespace extenso
