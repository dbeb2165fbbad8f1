#include "extenso/densities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "extenso/error.hpp"
#include "extenso/numerics.hpp"

namespace extenso {

using std::numbers::pi;

Density::Density(std::string label, Fn s, Fn s1, Fn s2, DensityFlags flags,
                 std::map<std::string, double> params, std::vector<double> witnesses)
    : label_(std::move(label)),
      s_(std::move(s)),
      s1_(std::move(s1)),
      s2_(std::move(s2)),
      flags_(flags),
      params_(std::move(params)),
      witnesses_(std::make_shared<const std::vector<double>>(std::move(witnesses))) {}

double Density::param(const std::string& name) const {
  const auto it = params_.find(name);
  if (it == params_.end()) throw Error(Errc::invalid_parameter, label_ + " has no parameter '" + name + "'");
  return it->second;
}

Density bg_density() {
  return Density(
      "bg",
      [](double r) { return r > 0.0 ? -r * std::log(r) : 0.0; },
      [](double r) { return -std::log(r) - 1.0; },
      [](double r) { return -1.0 / r; },
      DensityFlags{.s0_zero = true, .s1_zero = true, .concave = true});
}

Density tsallis_density(double q) {
  if (!(q > 0.0) || q == 1.0 || !std::isfinite(q)) {
    throw Error(Errc::invalid_parameter, "Tsallis index must satisfy q > 0, q != 1");
  }
  const double qm1 = q - 1.0;
  // r - r^q = -r * expm1((q-1) log r) stays accurate for q near 1.
  return Density(
      "tsallis",
      [q, qm1](double r) { return r > 0.0 ? -r * std::expm1(qm1 * std::log(r)) / qm1 : 0.0; },
      [q, qm1](double r) {
        const double lr = std::log(r);
        return -std::expm1(qm1 * lr) / qm1 - std::exp(qm1 * lr);
      },
      [q](double r) { return -q * std::pow(r, q - 2.0); },
      DensityFlags{.s0_zero = true, .s1_zero = true, .concave = true}, {{"q", q}});
}

// ---------------------------------------------------------------------------
// Oscillating density
// ---------------------------------------------------------------------------

namespace {

// Integrand of s' : g(u) = u (|cos(1/u)| + u), so s'(r) = -G0(r) and
// s(r) = -(r G0(r) - G1(r)) with G0 = int_0^r g, G1 = int_0^r u g(u) du.
double oscillating_g(double u) { return u * (std::abs(std::cos(1.0 / u)) + u); }

constexpr double kOscillatingCutoff = 1e-6;

struct MomentPair {
  double g0 = 0.0;
  double g1 = 0.0;
};

// |cos(1/u)| is smooth between consecutive zeros of cos(1/u), so a fixed
// Gauss-Legendre rule per piece is accurate and smooth in the endpoints.
MomentPair piece_moments(double a, double b) {
  return {gauss_legendre_20(oscillating_g, a, b),
          gauss_legendre_20([](double u) { return u * oscillating_g(u); }, a, b)};
}

// Below the cutoff |cos(1/u)| is replaced by its mean 2/pi; the error in the
// moments is bounded by int_0^c u du = c^2 / 2 = 5e-13.
MomentPair tail_moments(double r) {
  return {r * r / pi + r * r * r / 3.0, 2.0 * r * r * r / (3.0 * pi) + r * r * r * r / 4.0};
}

struct OscillatingTable {
  std::vector<double> knots;  // ascending: zeros of cos(1/u) above the cutoff, then 1
  std::vector<MomentPair> cumulative;

  OscillatingTable() {
    const auto k_max = static_cast<long>(std::floor(1.0 / (pi * kOscillatingCutoff) - 0.5));
    knots.reserve(static_cast<std::size_t>(k_max) + 2);
    for (long k = k_max; k >= 0; --k) knots.push_back(1.0 / ((static_cast<double>(k) + 0.5) * pi));
    knots.push_back(1.0);
    cumulative.resize(knots.size());
    cumulative[0] = tail_moments(knots[0]);
    // Kahan-compensated running sums.
    double c0 = 0.0;
    double c1 = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
      const MomentPair piece = piece_moments(knots[i - 1], knots[i]);
      const double y0 = piece.g0 - c0;
      const double t0 = cumulative[i - 1].g0 + y0;
      c0 = (t0 - cumulative[i - 1].g0) - y0;
      const double y1 = piece.g1 - c1;
      const double t1 = cumulative[i - 1].g1 + y1;
      c1 = (t1 - cumulative[i - 1].g1) - y1;
      cumulative[i] = {t0, t1};
    }
  }

  MomentPair at(double r) const {
    if (r <= knots.front()) return tail_moments(r);
    auto it = std::upper_bound(knots.begin(), knots.end(), r);
    const auto i = static_cast<std::size_t>(std::distance(knots.begin(), it)) - 1;
    const MomentPair base = cumulative[i];
    if (r == knots[i]) return base;
    const MomentPair extra = piece_moments(knots[i], r);
    return {base.g0 + extra.g0, base.g1 + extra.g1};
  }
};

std::shared_ptr<const OscillatingTable> oscillating_table() {
  static const auto table = std::make_shared<const OscillatingTable>();
  return table;
}

std::vector<double> oscillating_witnesses() {
  // t_k = 1/((k + 1/2) pi) for k in blocks {2^j, ..., 2^j + 7}.
  // Past k ~ 2^20 the rounding error in cos(1/t_k) (about k pi eps) swamps
  // t_k itself and the computed ratio stops growing, so stop there.
  std::vector<double> t;
  for (int j = 0; j <= 20; ++j) {
    const double base = std::ldexp(1.0, j);
    for (int d = 0; d < 8; ++d) t.push_back(1.0 / ((base + d + 0.5) * pi));
  }
  return t;
}

}  // namespace

Density oscillating_density() {
  auto table = oscillating_table();
  return Density(
      "remark2",
      [table](double r) {
        if (r <= 0.0) return 0.0;
        const auto m = table->at(r);
        return -(r * m.g0 - m.g1);
      },
      [table](double r) { return r <= 0.0 ? 0.0 : -table->at(r).g0; },
      [](double r) { return -r * (std::abs(std::cos(1.0 / r)) + r); },
      DensityFlags{.s0_zero = true, .s1_zero = false, .concave = true}, {}, oscillating_witnesses());
}

// ---------------------------------------------------------------------------
// Log-sine density
// ---------------------------------------------------------------------------

namespace {

// log(sin x / x) with x = pi t / 4: the smooth remainder after removing the
// logarithmic singularity log(pi t / 4) at t = 0.
double log_sinc_remainder(double t) {
  const double x = 0.25 * pi * t;
  return x > 0.0 ? std::log(std::sin(x) / x) : 0.0;
}

// int_0^r log sin(pi t / 4) dt = r log(pi r / 4) - r + int_0^r log(sin x / x) dt.
double log_sine_integral(double r) {
  if (r <= 0.0) return 0.0;
  return r * std::log(0.25 * pi * r) - r + gauss_legendre_20(log_sinc_remainder, 0.0, r);
}

}  // namespace

double log_sine_constant() {
  static const double c =
      std::log(0.25 * pi) - 1.0 + adaptive_quadrature(log_sinc_remainder, 0.0, 1.0, 1e-14);
  return c;
}

Density log_sine_density() {
  const double c = log_sine_constant();
  return Density(
      "remark5",
      [c](double r) { return r > 0.0 ? -log_sine_integral(r) + c * r : 0.0; },
      [c](double r) { return -std::log(std::sin(0.25 * pi * r)) + c; },
      [](double r) { return -0.25 * pi / std::tan(0.25 * pi * r); },
      DensityFlags{.s0_zero = true, .s1_zero = true, .concave = true}, {{"C", c}});
}

// ---------------------------------------------------------------------------

Density shifted_density(const Density& d) {
  const double s_at_one = d.s(1.0);
  Density base = d;
  DensityFlags flags = d.flags();
  flags.s1_zero = true;
  const auto witnesses = d.divergence_witnesses();
  return Density(
      "shifted(" + d.label() + ")",
      [base, s_at_one](double r) { return base.s(r) - s_at_one * r; },
      [base, s_at_one](double r) { return base.s1(r) - s_at_one; },
      [base](double r) { return base.s2(r); }, flags, d.params(),
      std::vector<double>(witnesses.begin(), witnesses.end()));
}

Density numeric_derivative_fallback(std::string label, Density::Fn s, DensityFlags flags) {
  auto shared = std::make_shared<const Density::Fn>(std::move(s));
  auto first = [shared](double r) {
    return finite_difference(*shared, r, 1, std::max(1e-6, 1e-6 * r));
  };
  // A second difference loses about eps/h^2; h ~ eps^(1/4) balances that
  // against the O(h^2) truncation error.
  auto second = [shared](double r) {
    return finite_difference(*shared, r, 2, 1e-4 * std::max(1.0, r));
  };
  return Density(std::move(label), [shared](double r) { return (*shared)(r); }, first, second, flags);
}

DensityCheck check_density(const Density& d, std::size_t samples) {
  DensityCheck out;
  auto complain = [&out](bool& slot, const std::string& msg) {
    slot = false;
    out.problems.push_back(msg);
  };
  const DensityFlags& f = d.flags();
  if (f.s0_zero && !(std::abs(d.s(0.0)) <= 1e-12)) complain(out.flags_ok, "s(0) != 0");
  if (f.s1_zero && !(std::abs(d.s(1.0)) <= 1e-12)) complain(out.flags_ok, "s(1) != 0");
  if (f.concave) {
    for (int k = 1; k <= 2048; ++k) {
      const double r = k / 2048.0;
      if (!(d.s2(r) < 0.0)) {
        std::ostringstream msg;
        msg << "s''(" << r << ") = " << d.s2(r) << " is not negative";
        complain(out.flags_ok, msg.str());
        break;
      }
    }
  }

  constexpr double h = 1e-5;
  constexpr double tol = 1e-5;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = 0.05 + 0.9 * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
    const double s_minus = d.s(r - h);
    const double s_mid = d.s(r);
    const double s_plus = d.s(r + h);
    const double fd1 = (s_plus - s_minus) / (2.0 * h);
    const double fd2 = (s_plus - 2.0 * s_mid + s_minus) / (h * h);
    const double fd2_from_s1 = (d.s1(r + h) - d.s1(r - h)) / (2.0 * h);
    const double s1 = d.s1(r);
    const double s2 = d.s2(r);
    const auto rel = [](double approx, double exact) {
      return std::abs(approx - exact) / std::max(std::abs(exact), 1e-300);
    };
    out.worst_s1_rel_error = std::max(out.worst_s1_rel_error, rel(fd1, s1));
    out.worst_s2_rel_error = std::max({out.worst_s2_rel_error, rel(fd2, s2), rel(fd2_from_s1, s2)});
  }
  if (!(out.worst_s1_rel_error <= tol)) complain(out.derivatives_ok, "s' disagrees with differences of s");
  if (!(out.worst_s2_rel_error <= tol)) complain(out.derivatives_ok, "s'' disagrees with differences of s or s'");
  return out;
}

double EntropyFunctional::operator()(std::span<const double> p) const {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : p) {
    if (x == 0.0 && !density_.flags().s0_zero) {
      throw Error(Errc::undefined_at_zero, density_.label() + " has no s(0) = 0 convention");
    }
    const double v = density_.s(x);
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

}  // namespace extenso
