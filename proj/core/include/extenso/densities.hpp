#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "extenso/simplex.hpp"

namespace extenso {

struct DensityFlags {
  bool s0_zero = false;  ///< s(0) = 0
  bool s1_zero = false;  ///< s(1) = 0
  bool concave = false;  ///< s'' < 0 on (0, 1]
};

/// The scalar function s on [0, 1] that generates S(p) = sum_j s(p_j),
/// together with s' and s'' on (0, 1].
///
/// Densities are immutable and the evaluators are reentrant, so a Density may
/// be shared freely between threads.
class Density {
 public:
  using Fn = std::function<double(double)>;

  Density(std::string label, Fn s, Fn s1, Fn s2, DensityFlags flags,
          std::map<std::string, double> params = {}, std::vector<double> witnesses = {});

  double s(double r) const { return s_(r); }
  double s1(double r) const { return s1_(r); }
  double s2(double r) const { return s2_(r); }

  const DensityFlags& flags() const noexcept { return flags_; }
  const std::string& label() const noexcept { return label_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }
  double param(const std::string& name) const;

  /// Points t where ratios s''(rt)/s''(t) are known to grow without bound
  /// as t -> 0 (empty for most densities). Sampled by the bounds scan.
  std::span<const double> divergence_witnesses() const noexcept { return *witnesses_; }

 private:
  std::string label_;
  Fn s_;
  Fn s1_;
  Fn s2_;
  DensityFlags flags_;
  std::map<std::string, double> params_;
  std::shared_ptr<const std::vector<double>> witnesses_;
};

/// Boltzmann-Gibbs: s(r) = -r log r.
Density bg_density();

/// Tsallis, per coordinate: s(r) = (r - r^q) / (q - 1), q > 0, q != 1.
Density tsallis_density(double q);

/// s'' (r) = -r (|cos(1/r)| + r), s(0) = s'(0) = 0. The ratio s''(t/2)/s''(t)
/// is unbounded along t_k = 1 / ((k + 1/2) pi). Catalog kind "remark2".
Density oscillating_density();

/// s(r) = -int_0^r log sin(pi t / 4) dt + C r with C chosen so that s(1) = 0;
/// s''(r) = -(pi/4) cot(pi r / 4). Catalog kind "remark5".
Density log_sine_density();

/// The constant C = int_0^1 log sin(pi t / 4) dt used by log_sine_density.
double log_sine_constant();

/// r -> s(r) - s(1) r. Same s'', vanishes at 0 (if s does) and at 1.
Density shifted_density(const Density& d);

/// Builds a Density from s alone; s' and s'' come from finite differences.
Density numeric_derivative_fallback(std::string label, Density::Fn s, DensityFlags flags);

/// Density from a JSON spec {"kind": "bg"|"tsallis"|"remark2"|"remark5",
/// "params": {"q": ...}}.
Density density_from_spec(std::string_view json);

/// Same as density_from_spec with the kind given directly.
Density density_from_kind(std::string_view kind, const std::map<std::string, double>& params = {});

/// Outcome of checking a Density against its declared flags and derivative
/// consistency.
struct DensityCheck {
  bool flags_ok = true;
  bool derivatives_ok = true;
  double worst_s1_rel_error = 0.0;
  double worst_s2_rel_error = 0.0;
  std::vector<std::string> problems;
  bool ok() const { return flags_ok && derivatives_ok; }
};

/// Checks |s(0)|, |s(1)| against the flags, s'' < 0 on {k/2048}, and that
/// centered differences (spacing 1e-5) of s and s' match s' and s'' to
/// relative 1e-5 at `samples` interior points.
DensityCheck check_density(const Density& d, std::size_t samples = 64);

/// S(p) = sum_j s(p_j) with compensated summation.
class EntropyFunctional {
 public:
  explicit EntropyFunctional(Density density) : density_(std::move(density)) {}

  const Density& density() const noexcept { return density_; }

  /// Throws Errc::undefined_at_zero on a zero entry unless s(0) = 0.
  double operator()(std::span<const double> p) const;
  double operator()(const SimplexVector& p) const { return (*this)(p.entries()); }
  double operator()(const JointMatrix& joint) const { return (*this)(joint.entries()); }
  double operator()(const ConditionalColumn& c) const { return (*this)(c.distribution()); }

 private:
  Density density_;
};

inline double entropy(const EntropyFunctional& functional, const SimplexVector& p) { return functional(p); }

}  // namespace extenso
