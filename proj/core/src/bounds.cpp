#include "extenso/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "extenso/error.hpp"

namespace extenso {
namespace {

// Witness points grouped by dyadic scale floor(-log2 t); returns the largest
// ratio seen in each scale, ordered towards t -> 0.
std::vector<double> witness_block_maxima(const ScalarFn& h, std::span<const double> witnesses) {
  std::map<int, double> blocks;
  for (double t : witnesses) {
    if (!(t > 0.0 && t <= 1.0)) continue;
    const int scale = static_cast<int>(std::floor(-std::log2(t)));
    const double v = h(t);
    auto [it, inserted] = blocks.try_emplace(scale, v);
    if (!inserted) it->second = std::max(it->second, v);
  }
  std::vector<double> out;
  out.reserve(blocks.size());
  for (const auto& [scale, v] : blocks) out.push_back(v);
  return out;
}

// Divergent when the last growth_blocks blocks grow by growth_factor per
// block on average. Per-block growth is too strict: the numerator of the
// ratio oscillates with r, so single blocks can stall.
bool grows_without_bound(std::span<const double> block_max, const BoundsConfig& cfg) {
  const auto blocks = static_cast<std::size_t>(cfg.growth_blocks);
  if (block_max.size() < blocks + 1) return false;
  const double first = block_max[block_max.size() - blocks - 1];
  const double last = block_max.back();
  if (!std::isfinite(last)) return true;
  return first > 0.0 && last >= std::pow(cfg.growth_factor, cfg.growth_blocks) * first;
}

}  // namespace

CoefficientBounds coefficient_bounds(const Density& d, double r, const BoundsConfig& cfg) {
  if (!(r > 0.0 && r <= 1.0)) throw Error(Errc::invalid_parameter, "r must lie in (0, 1]");
  if (!d.flags().concave) throw Error(Errc::precondition, d.label() + " is not flagged concave");

  CoefficientBounds out;
  out.r = r;
  if (r == 1.0) {
    // The ratio is identically one.
    out.lower_meta.value = out.upper_meta.value = 1.0;
    out.lower_meta.grid_points = out.upper_meta.grid_points = 0;
    return out;
  }

  const ScalarFn ratio = [&d, r](double t) { return d.s2(r * t) / d.s2(t); };

  std::vector<double> extra;
  for (int k = 0; k <= cfg.probe_k_max; ++k) extra.push_back(std::ldexp(1.0, -k));
  const auto witnesses = d.divergence_witnesses();
  extra.insert(extra.end(), witnesses.begin(), witnesses.end());

  out.lower_meta = global_extremum(ratio, Extremum::inf, cfg.t_min, cfg.grid_n, extra);
  out.upper_meta = global_extremum(ratio, Extremum::sup, cfg.t_min, cfg.grid_n, extra);

  const auto blocks = witness_block_maxima(ratio, witnesses);
  // The threshold applies to the scaled bound: for tiny r the raw ratio is
  // legitimately huge (r^(q-2) for Tsallis) while r^2 times it stays small.
  out.divergent = out.upper_meta.divergent || out.lower_meta.divergent ||
                  r * r * out.upper_meta.value > cfg.divergence_threshold || grows_without_bound(blocks, cfg);

  out.lower = r * r * out.lower_meta.value;
  out.upper = out.divergent ? std::numeric_limits<double>::infinity() : r * r * out.upper_meta.value;
  return out;
}

std::string bounds_csv(std::span<const CoefficientBounds> rows) {
  std::string out = "r,lower,upper,arg_inf,arg_sup,divergent\n";
  char buf[256];
  for (const auto& b : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", b.r, b.lower, b.upper,
                  b.lower_meta.arg, b.upper_meta.arg, b.divergent ? 1 : 0);
    out += buf;
  }
  return out;
}

PhiFunction::PhiFunction(std::function<double(double)> on_unit, double slope_at_one, std::string domain_note)
    : on_unit_(std::move(on_unit)), value_at_one_(on_unit_(1.0)), slope_(slope_at_one), note_(std::move(domain_note)) {}

double PhiFunction::operator()(double r) const {
  if (!(r > 0.0)) throw Error(Errc::invalid_parameter, "phi is defined on (0, inf)");
  return r > 1.0 ? value_at_one_ + slope_ * (r - 1.0) : on_unit_(r);
}

PhiFunction phi_from_density(const Density& d) {
  double prev = 0.0;
  for (int k = 1; k <= 2048; ++k) {
    const double r = k / 2048.0;
    const double s2 = d.s2(r);
    if (!(s2 < 0.0)) throw Error(Errc::precondition, "s'' is not negative at r=" + std::to_string(r));
    const double phi = -1.0 / s2;
    if (phi < prev * (1.0 - 1e-12)) {
      throw Error(Errc::precondition, "-1/s'' decreases near r=" + std::to_string(r));
    }
    prev = phi;
  }
  Density base = d;
  const ScalarFn on_unit = [base](double r) { return -1.0 / base.s2(r); };
  const double slope = finite_difference(on_unit, 1.0, 1, 1e-5);
  return PhiFunction(on_unit, slope, "-1/s'' on (0,1]; linear with the left slope at 1 beyond");
}

double theta_phi(const PhiFunction& phi, const ThetaConfig& cfg) {
  if (!(cfg.r_lo > 0.0 && cfg.r_hi > cfg.r_lo) || cfg.grid_n < 2) {
    throw Error(Errc::invalid_parameter, "theta_phi needs 0 < r_lo < r_hi and grid_n >= 2");
  }
  std::vector<double> rs(cfg.grid_n);
  const double lo = std::log(cfg.r_lo);
  const double hi = std::log(cfg.r_hi);
  for (std::size_t i = 0; i < cfg.grid_n; ++i) {
    rs[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cfg.grid_n - 1));
  }
  rs.front() = cfg.r_lo;
  rs.back() = cfg.r_hi;
  if (cfg.r_lo <= 1.0 && cfg.r_hi >= 1.0) rs.push_back(1.0);

  double sup = 0.0;
  for (double r : rs) {
    const double value = phi(r);
    double quotient = -std::numeric_limits<double>::infinity();
    for (double eps : cfg.eps) {
      // Relative steps: an absolute 1e-4 is not small next to r = 1e-4.
      const double step = (r + eps * r) - r;
      quotient = std::max(quotient, (phi(r + step) - value) / step);
    }
    const double ratio = r / value * quotient;
    if (!std::isfinite(ratio)) return std::numeric_limits<double>::infinity();
    sup = std::max(sup, ratio);
  }
  return sup;
}

}  // namespace extenso
