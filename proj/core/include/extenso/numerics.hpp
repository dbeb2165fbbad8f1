#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "extenso/error.hpp"

namespace extenso {

using ScalarFn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureStats {
  double value = 0.0;
  std::size_t evaluations = 0;
  int max_depth = 0;
};

namespace detail {

inline constexpr int kQuadDepthCap = 60;
inline constexpr int kQuadMinDepth = 4;
inline constexpr std::size_t kQuadEvalBudget = 50'000'000;

template <class F>
struct SimpsonState {
  const F& g;
  QuadratureStats stats;
  bool capped = false;

  double eval(double t) {
    ++stats.evaluations;
    return static_cast<double>(g(t));
  }

  // Recursive adaptive Simpson with Richardson correction (Lyness).
  double refine(double a, double fa, double m, double fm, double b, double fb, double whole,
                double tol, int depth) {
    if (depth > stats.max_depth) stats.max_depth = depth;
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (!std::isfinite(delta)) {
      throw NoConvergence("non-finite integrand near t=" + std::to_string(m), stats.value);
    }
    if (depth >= kQuadMinDepth && std::abs(delta) <= 15.0 * tol) {
      return left + right + delta / 15.0;
    }
    if (depth >= kQuadDepthCap || stats.evaluations > kQuadEvalBudget || lm <= a || rm >= b) {
      capped = true;
      return left + right + delta / 15.0;
    }
    return refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
           refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace detail

/// Adaptive Simpson quadrature of g over [a, b] to absolute tolerance
/// abs_tol. Throws NoConvergence (with the partial estimate) when an
/// interval needs more than 60 halvings.
template <class F>
QuadratureStats adaptive_quadrature_stats(const F& g, double a, double b, double abs_tol) {
  if (!(abs_tol > 0.0)) throw Error(Errc::invalid_parameter, "abs_tol must be > 0");
  if (a == b) return {};
  detail::SimpsonState<F> state{g, {}, false};
  const double fa = state.eval(a);
  const double fb = state.eval(b);
  const double m = 0.5 * (a + b);
  const double fm = state.eval(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  state.stats.value = state.refine(a, fa, m, fm, b, fb, whole, abs_tol, 0);
  if (state.capped) {
    throw NoConvergence("adaptive Simpson hit the depth cap", state.stats.value);
  }
  return state.stats;
}

template <class F>
double adaptive_quadrature(const F& g, double a, double b, double abs_tol) {
  return adaptive_quadrature_stats(g, a, b, abs_tol).value;
}

/// Quadrature for integrands with an integrable singularity at the left
/// endpoint a (g(a) need not be finite). The interval is cut geometrically
/// towards a; each piece is integrated adaptively and the remaining tail is
/// extrapolated from the ratio of the last two pieces.
template <class F>
double adaptive_quadrature_singular(const F& g, double a, double b, double abs_tol) {
  if (!(abs_tol > 0.0)) throw Error(Errc::invalid_parameter, "abs_tol must be > 0");
  const double width = b - a;
  double total = 0.0;
  double prev_piece = 0.0;
  double hi = b;
  for (int k = 0; k < 1000; ++k) {
    const double lo = a + width * std::ldexp(1.0, -(k + 1));
    if (lo <= a || lo >= hi) break;
    // Tolerances sum to less than abs_tol / 2 and stay well above rounding
    // level relative to the pieces, unlike a geometric split.
    const double piece_tol = 0.25 * abs_tol / ((k + 1.0) * (k + 1.0));
    const double piece = adaptive_quadrature(g, lo, hi, piece_tol);
    total += piece;
    if (k >= 2 && prev_piece != 0.0) {
      const double ratio = piece / prev_piece;
      if (ratio > 0.0 && ratio < 1.0) {
        const double tail = piece * ratio / (1.0 - ratio);
        if (std::abs(tail) <= 0.25 * abs_tol) return total + tail;
      }
    }
    prev_piece = piece;
    hi = lo;
  }
  throw NoConvergence("singular tail did not settle", total);
}

/// Fixed 20-point Gauss-Legendre rule on [a, b]. For a fixed integrand the
/// result is a smooth function of the endpoints, which adaptive rules are not.
template <class F>
double gauss_legendre_20(const F& g, double a, double b) {
  static constexpr std::array<double, 10> x = {
      0.0765265211334973337546404, 0.2277858511416450780804962, 0.3737060887154195606725482,
      0.5108670019508270980043641, 0.6360536807265150254528367, 0.7463319064601507926143051,
      0.8391169718222188233945291, 0.9122344282513259058677524, 0.9639719272779137912676661,
      0.9931285991850949247861224};
  static constexpr std::array<double, 10> w = {
      0.1527533871307258506980843, 0.1491729864726037467878287, 0.1420961093183820513292983,
      0.1316886384491766268984945, 0.1181945319615184173123774, 0.1019301198172404350367501,
      0.0832767415767047487247581, 0.0626720483341090635695065, 0.0406014298003869413310400,
      0.0176140071391521183118620};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += w[i] * (static_cast<double>(g(c - h * x[i])) + static_cast<double>(g(c + h * x[i])));
  }
  return sum * h;
}

// ---------------------------------------------------------------------------
// 1-D global extremum over (0, 1]
// ---------------------------------------------------------------------------

enum class Extremum { inf, sup };

struct OptResult {
  double value = 0.0;     ///< extremum estimate
  double arg = 1.0;       ///< where it was found, in [t_min, 1] or a probe point
  std::size_t grid_points = 0;
  bool refined = false;   ///< golden-section refinement ran on a bracketing cell
  double est_error = 0.0; ///< largest value gap to the neighbouring grid points
  bool divergent = false; ///< h was non-finite somewhere
  double divergent_at = std::numeric_limits<double>::quiet_NaN();
};

/// Log-spaced grid of n points on [t_min, 1]; the last point is exactly 1.
std::vector<double> log_grid(double t_min, std::size_t n);

/// Coarse scan on a log grid over [t_min, 1], then golden-section search in
/// the cell bracketing the best grid point. `extra_points` (any t in (0, 1])
/// are sampled as additional candidates. The returned inf never exceeds the
/// smallest sampled value; the sup never falls below the largest.
OptResult global_extremum(const ScalarFn& h, Extremum mode, double t_min = 1e-6,
                          std::size_t grid_n = 1024, std::span<const double> extra_points = {});

enum class Trend { increasing, decreasing, constant, mixed };
const char* to_string(Trend trend) noexcept;

struct LimitProbe {
  std::vector<double> t;
  std::vector<double> values;
  Trend trend = Trend::constant;
};

/// Samples h on t = 2^-k, k = 0..k_max and classifies the trend as t -> 0.
LimitProbe probe_toward_zero(const ScalarFn& h, int k_max = 40);

/// CSV dump "t,h" of h on the log grid.
std::string grid_csv(const ScalarFn& h, double t_min, std::size_t grid_n);

// ---------------------------------------------------------------------------
// Finite differences on (0, 1]
// ---------------------------------------------------------------------------

/// Second-order accurate estimate of g' (order 1) or g'' (order 2) at r.
/// Centered where the stencil fits inside (0, 1]; one-sided otherwise.
double finite_difference(const ScalarFn& g, double r, int order, double h_step);

}  // namespace extenso
