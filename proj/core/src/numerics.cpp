#include "extenso/numerics.hpp"

#include <algorithm>
#include <cstdio>

namespace extenso {

std::vector<double> log_grid(double t_min, std::size_t n) {
  if (!(t_min > 0.0 && t_min < 1.0)) throw Error(Errc::invalid_parameter, "t_min must lie in (0, 1)");
  if (n < 2) throw Error(Errc::invalid_parameter, "grid needs at least two points");
  std::vector<double> t(n);
  const double log_min = std::log(t_min);
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
    t[i] = std::exp(log_min * (1.0 - frac));
  }
  t.front() = t_min;
  t.back() = 1.0;
  return t;
}

namespace {

bool better(Extremum mode, double candidate, double incumbent) {
  return mode == Extremum::inf ? candidate < incumbent : candidate > incumbent;
}

// Golden-section search for the extremum of h on [lo, hi].
std::pair<double, double> golden_section(const ScalarFn& h, Extremum mode, double lo, double hi) {
  constexpr double inv_phi = 0.6180339887498948482;
  const double sign = mode == Extremum::inf ? 1.0 : -1.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = sign * h(c);
  double fd = sign * h(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = sign * h(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = sign * h(d);
    }
  }
  return fc < fd ? std::pair{c, sign * fc} : std::pair{d, sign * fd};
}

}  // namespace

OptResult global_extremum(const ScalarFn& h, Extremum mode, double t_min, std::size_t grid_n,
                          std::span<const double> extra_points) {
  if (grid_n < 256) throw Error(Errc::invalid_parameter, "grid_n must be >= 256");
  const auto grid = log_grid(t_min, grid_n);

  OptResult out;
  out.grid_points = grid_n;

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = h(grid[i]);
    if (!std::isfinite(values[i]) && !out.divergent) {
      out.divergent = true;
      out.divergent_at = grid[i];
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (better(mode, values[i], values[best])) best = i;
  }
  out.value = values[best];
  out.arg = grid[best];

  double gap = 0.0;
  if (best > 0) gap = std::max(gap, std::abs(values[best - 1] - values[best]));
  if (best + 1 < values.size()) gap = std::max(gap, std::abs(values[best + 1] - values[best]));
  out.est_error = std::isfinite(gap) ? gap : std::numeric_limits<double>::infinity();

  for (double t : extra_points) {
    if (!(t > 0.0 && t <= 1.0)) continue;
    const double v = h(t);
    if (!std::isfinite(v)) {
      if (!out.divergent) {
        out.divergent = true;
        out.divergent_at = t;
      }
      continue;
    }
    if (better(mode, v, out.value)) {
      out.value = v;
      out.arg = t;
    }
  }

  if (out.divergent) {
    out.value = mode == Extremum::inf ? -std::numeric_limits<double>::infinity()
                                      : std::numeric_limits<double>::infinity();
    out.arg = out.divergent_at;
    return out;
  }

  // The smallest grid point is the truncation boundary: the true extremum may
  // lie further towards 0, so refining there is meaningless.
  if (best == 0 || out.arg != grid[best]) return out;

  const double lo = grid[best - 1];
  const double hi = best + 1 < grid.size() ? grid[best + 1] : grid[best];
  const auto [t_ref, v_ref] = golden_section(h, mode, lo, hi);
  out.refined = true;
  if (std::isfinite(v_ref) && better(mode, v_ref, out.value)) {
    out.value = v_ref;
    out.arg = t_ref;
  }
  return out;
}

const char* to_string(Trend trend) noexcept {
  switch (trend) {
    case Trend::increasing: return "increasing";
    case Trend::decreasing: return "decreasing";
    case Trend::constant: return "constant";
    case Trend::mixed: return "mixed";
  }
  return "mixed";
}

LimitProbe probe_toward_zero(const ScalarFn& h, int k_max) {
  LimitProbe probe;
  for (int k = 0; k <= k_max; ++k) {
    const double t = std::ldexp(1.0, -k);
    probe.t.push_back(t);
    probe.values.push_back(h(t));
  }
  bool up = false;
  bool down = false;
  for (std::size_t i = 1; i < probe.values.size(); ++i) {
    const double prev = probe.values[i - 1];
    const double cur = probe.values[i];
    const double scale = 1e-12 * std::max({1.0, std::abs(prev), std::abs(cur)});
    if (cur > prev + scale) up = true;
    if (cur < prev - scale) down = true;
  }
  probe.trend = up && down ? Trend::mixed : up ? Trend::increasing : down ? Trend::decreasing : Trend::constant;
  return probe;
}

std::string grid_csv(const ScalarFn& h, double t_min, std::size_t grid_n) {
  std::string out = "t,h\n";
  char buf[64];
  for (double t : log_grid(t_min, grid_n)) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, h(t));
    out += buf;
  }
  return out;
}

double finite_difference(const ScalarFn& g, double r, int order, double h_step) {
  if (!(h_step > 0.0)) throw Error(Errc::invalid_parameter, "h_step must be > 0");
  if (order != 1 && order != 2) throw Error(Errc::invalid_parameter, "order must be 1 or 2");
  if (!(r > 0.0 && r <= 1.0)) throw Error(Errc::invalid_parameter, "r must lie in (0, 1]");
  const double h = h_step;
  const int reach = order == 1 ? 2 : 3;
  const bool fits_left = r - h > 0.0;
  const bool fits_right = r + h <= 1.0;
  if (fits_left && fits_right) {
    if (order == 1) return (g(r + h) - g(r - h)) / (2.0 * h);
    return (g(r + h) - 2.0 * g(r) + g(r - h)) / (h * h);
  }
  if (!fits_right && r - reach * h > 0.0) {
    if (order == 1) return (3.0 * g(r) - 4.0 * g(r - h) + g(r - 2.0 * h)) / (2.0 * h);
    return (2.0 * g(r) - 5.0 * g(r - h) + 4.0 * g(r - 2.0 * h) - g(r - 3.0 * h)) / (h * h);
  }
  if (r + reach * h <= 1.0) {
    if (order == 1) return (-3.0 * g(r) + 4.0 * g(r + h) - g(r + 2.0 * h)) / (2.0 * h);
    return (2.0 * g(r) - 5.0 * g(r + h) + 4.0 * g(r + 2.0 * h) - g(r + 3.0 * h)) / (h * h);
  }
  throw Error(Errc::invalid_parameter, "step too large for the interval (0, 1]");
}

}  // namespace extenso
