// Acceptance run: prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "extenso/extenso.hpp"
#include "oracles.hpp"
#ifdef EXTENSO_HAVE_CLI
#include "cli.hpp"
#endif

using namespace extenso;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<Density> concave_catalog() {
  return {bg_density(), tsallis_density(0.5), tsallis_density(2), tsallis_density(3), oscillating_density(),
          log_sine_density()};
}

JointMatrix batch_joint(std::uint64_t seed, std::uint64_t i) {
  auto rng = instance_rng(seed, i);
  const double conc[] = {0.2, 1.0, 5.0};
  return random_joint(1 + i % 8, 1 + (i / 8) % 8, rng, conc[i % 3]);
}

Outcome extensivity_exactness() {
  const auto start = std::chrono::steady_clock::now();
  struct Case {
    Density d;
    double q;
  };
  const Case cases[] = {{bg_density(), 1.0}, {tsallis_density(0.5), 0.5}, {tsallis_density(2), 2.0},
                        {tsallis_density(3), 3.0}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const EntropyFunctional S(c.d);
    const auto f = power_coefficient(c.q);
    for (std::uint64_t i = 0; i < 1000; ++i) worst = std::max(worst, std::abs(extensivity_residual(S, batch_joint(101, i), f)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-10 && secs < 10.0, "max |residual| " + fmt(worst) + " over 4000 laws in " + fmt(secs) + " s"};
}

Outcome bounds_oracle() {
  double worst = 0.0;
  for (double q : {0.5, 2.0})
    for (int k = 1; k <= 9; ++k) {
      const double r = k / 10.0;
      const auto b = coefficient_bounds(tsallis_density(q), r);
      worst = std::max({worst, std::abs(b.lower - std::pow(r, q)), std::abs(b.upper - std::pow(r, q))});
    }
  return {worst <= 1e-6, "max |bound - r^q| " + fmt(worst)};
}

Outcome sandwich_soundness() {
  const Density ds[] = {bg_density(), tsallis_density(0.5), tsallis_density(2), log_sine_density()};
  std::size_t fails = 0, collapse_misses = 0;
  std::ostringstream detail;
  for (const auto& d : ds) {
    const EntropyFunctional S(d);
    const bool tsallis = d.label() == "tsallis";
    std::size_t passes = 0;
    for (std::uint64_t i = 0; i < 500; ++i) {
      const auto r = sandwich_check(S, batch_joint(202, i));
      if (r.verdict == Verdict::pass) ++passes; else ++fails;
      if (tsallis && r.upper - r.lower > r.tolerance) ++collapse_misses;
    }
    detail << d.label() << (tsallis ? "(q=" + fmt(d.param("q")) + ")" : "") << " " << passes << "/500 ";
  }
  detail << "collapse misses " << collapse_misses;
  return {fails == 0 && collapse_misses == 0, detail.str()};
}

Outcome oscillating_divergence() {
  const auto d = oscillating_density();
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double t = 1.0 / ((k + 0.5) * std::numbers::pi);
    const double closed = 0.5 * ((k + 0.5) * std::numbers::pi + 0.5);
    worst = std::max(worst, std::abs(d.s2(t / 2) / d.s2(t) - closed));
  }
  const bool divergent = coefficient_bounds(d, 0.5).divergent;
  return {worst <= 1e-8 && divergent,
          "max ratio error " + fmt(worst) + ", bounds at r=1/2 " + (divergent ? "divergent" : "finite")};
}

Outcome log_sine_extremes() {
  const auto d = log_sine_density();
  auto h = [&](double t) { return d.s2(t / 2) / d.s2(t); };
  const double inf = global_extremum(h, Extremum::inf).value;
  const double sup = global_extremum(h, Extremum::sup).value;
  const double theta = theta_phi(phi_from_density(d));
  const EntropyFunctional S(d);
  bool negative = true;
  for (double x : {0.02, 0.01, 0.005}) negative = negative && iff_lhs(S, iff_witness_matrix(x)) < 0.0;
  const double limit = oracle::kLogSineS1At1 * (std::numbers::sqrt2 - 1) / 2;
  const double gap = std::abs(iff_lhs(S, iff_witness_matrix(0.005)) - limit);
  const bool ok = std::abs(inf - 2) <= 1e-4 && std::abs(sup - 1 - std::numbers::sqrt2) <= 1e-4 &&
                  std::abs(theta - std::numbers::pi / 2) <= 1e-3 && negative && gap <= 0.05;
  return {ok, "inf " + fmt(inf - 2) + " off, sup " + fmt(sup - 1 - std::numbers::sqrt2) + " off, theta " +
                  fmt(theta - std::numbers::pi / 2) + " off, iff<0 " + (negative ? "yes" : "no") +
                  ", |iff(0.005) - limit| " + fmt(gap)};
}

Outcome power_recovery() {
  struct Case {
    Density d;
    double q;
  };
  const Case powers[] = {{tsallis_density(0.5), 0.5}, {bg_density(), 1.0}, {tsallis_density(2), 2.0}};
  double q_err = 0.0, rec_err = 0.0;
  bool all_power = true;
  for (const auto& c : powers) {
    const auto pr = recover_f(c.d);
    all_power = all_power && pr.verdict == PowerVerdict::power && pr.reconstruction.has_value();
    q_err = std::max(q_err, std::abs(pr.q_est - c.q));
    if (pr.reconstruction) rec_err = std::max(rec_err, pr.reconstruction->max_error);
  }
  const bool others = recover_f(log_sine_density()).verdict != PowerVerdict::power &&
                      recover_f(oscillating_density()).verdict != PowerVerdict::power;
  return {all_power && others && q_err <= 1e-6 && rec_err <= 1e-8,
          "max |q_est - q| " + fmt(q_err) + ", reconstruction error " + fmt(rec_err) + ", non-power densities " +
              (others ? "rejected" : "accepted")};
}

Outcome axioms() {
  const std::size_t sizes[] = {1, 2, 3, 4, 5, 6, 7, 8};
  std::ostringstream detail;
  bool ok = true;
  for (const auto& d : concave_catalog()) {
    const auto rep = axiom_suite(EntropyFunctional(d), sizes, 303, 200);
    ok = ok && rep.passed();
    if (!rep.passed()) detail << d.label() << " failed ";
  }
  detail << "6 densities x 8 sizes x 200 draws";
  return {ok, detail.str()};
}

Outcome identity() {
  double worst = 0.0;
  for (const auto& d : {tsallis_density(0.5), tsallis_density(2), log_sine_density()})
    for (double a : {0.25, 0.5, 0.9})
      for (double r : {0.25, 0.5, 0.9}) {
        const double lhs = oracle::double_integral([&](double u) { return d.s2(u); }, a, r);
        worst = std::max(worst, std::abs(lhs - (a * d.s1(a) * r - d.s(a * r))));
      }
  return {worst <= 1e-6, "max |lhs - rhs| " + fmt(worst)};
}

Outcome monotonicity() {
  std::size_t fails = 0;
  for (const auto& d : concave_catalog()) {
    const EntropyFunctional S(d);
    for (std::uint64_t i = 0; i < 500; ++i) fails += !monotonicity_check(S, batch_joint(404, i));
  }
  return {fails == 0, std::to_string(fails) + " failures over 6 x 500 laws"};
}

Outcome determinism() {
#ifdef EXTENSO_HAVE_CLI
  cli::RunConfig cfg;
  cfg.command = cli::Command::verify_sandwich;
  cfg.density = "remark5";
  cfg.instances = 40;
  cfg.seed = 77;
  const auto first = to_json(cli::run(cfg).report);
  const auto second = to_json(cli::run(cfg).report);
  cfg.jobs = 3;
  const auto threaded = to_json(cli::run(cfg).report);
  return {first == second && first == threaded, "two runs and a 3-thread run give identical JSON"};
#else
  return {false, "built without the CLI"};
#endif
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 extensivity exactness", extensivity_exactness},
      {"2 bounds oracle", bounds_oracle},
      {"3 sandwich soundness", sandwich_soundness},
      {"4 oscillating divergence", oscillating_divergence},
      {"5 log-sine extremes", log_sine_extremes},
      {"6 power recovery", power_recovery},
      {"7 axioms", axioms},
      {"8 double-integral identity", identity},
      {"9 monotonicity", monotonicity},
      {"10 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.ok;
    std::printf("[%s] %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
