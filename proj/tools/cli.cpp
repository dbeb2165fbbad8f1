#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "extenso/extenso.hpp"

namespace extenso::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v, int digits = 12) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string describe(const Density& d) {
  std::string out = d.label();
  if (d.params().empty()) return out;
  out += '(';
  bool first = true;
  for (const auto& [k, v] : d.params()) {
    out += (first ? "" : ",") + k + "=" + fmt(v, 15);
    first = false;
  }
  return out + ')';
}

Density resolve_density(const RunConfig& cfg) {
  try {
    const std::string& spec = cfg.density;
    if (!spec.empty() && spec.front() == '{') return density_from_spec(spec);
    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) {
      std::ifstream in(spec);
      std::stringstream buf;
      buf << in.rdbuf();
      return density_from_spec(buf.str());
    }
    std::map<std::string, double> params;
    if (cfg.q) params["q"] = *cfg.q;
    return density_from_kind(spec, params);
  } catch (const Error& e) {
    throw UsageError(std::string("bad density spec: ") + e.what());
  }
}

// Runs f(i) for i in [0, count) on up to `jobs` threads. Results are stored by
// index, so the merge order never depends on scheduling.
template <class F>
auto parallel_map(std::size_t count, unsigned jobs, F f) {
  using T = decltype(f(std::size_t{}));
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

BoundsConfig bounds_config(const RunConfig& cfg) {
  BoundsConfig b;
  b.t_min = cfg.t_min;
  b.grid_n = cfg.grid_n;
  return b;
}

void track_slack(BatchReport& rep, double slack) {
  if (!std::isfinite(slack)) return;
  if (!std::isfinite(rep.worst_slack) || slack < rep.worst_slack) rep.worst_slack = slack;
}

BatchReport begin_report(const RunConfig& cfg, std::string density, std::string check) {
  BatchReport rep;
  rep.density = std::move(density);
  rep.check = std::move(check);
  rep.seed = cfg.seed;
  rep.worst_slack = kNaN;
  return rep;
}

BatchReport run_sandwich(const RunConfig& cfg, const Density& d) {
  const EntropyFunctional functional(d);
  SandwichConfig sc;
  sc.bounds = bounds_config(cfg);
  sc.base_tolerance = cfg.tolerance.value_or(1e-9);
  auto results = parallel_map(cfg.instances, cfg.jobs, [&](std::size_t i) {
    auto rng = instance_rng(cfg.seed, i);
    return sandwich_check(functional, random_joint(cfg.m, cfg.n, rng, cfg.concentration), sc);
  });

  BatchReport rep = begin_report(cfg, describe(d), "verify-sandwich");
  rep.instances = results.size();
  double worst_gap = -kInf;  // max of (upper - lower) - tolerance
  for (const auto& r : results) {
    switch (r.verdict) {
      case Verdict::pass: ++rep.pass_count; break;
      case Verdict::fail: ++rep.fail_count; break;
      case Verdict::divergent: ++rep.divergent_count; continue;
    }
    track_slack(rep, std::min(r.slack_lower, r.slack_upper) + r.tolerance);
    worst_gap = std::max(worst_gap, (r.upper - r.lower) - r.tolerance);
  }
  if (rep.divergent_count > 0) {
    rep.notes.push_back("coefficient bounds diverge; sandwich not evaluated on divergent instances");
  } else if (!results.empty() && worst_gap <= 0.0) {
    rep.notes.push_back("equality collapse: upper - lower <= tolerance on every instance");
  } else if (!results.empty()) {
    rep.notes.push_back("max (upper - lower - tolerance) = " + fmt(worst_gap));
  }
  return rep;
}

double residual_exponent(const RunConfig& cfg, const Density& d) {
  if (cfg.q) return *cfg.q;
  const auto it = d.params().find("q");
  return it != d.params().end() ? it->second : 1.0;
}

BatchReport run_residual(const RunConfig& cfg, const Density& d) {
  const EntropyFunctional functional(d);
  const double q = residual_exponent(cfg, d);
  const Coefficient f = power_coefficient(q);
  const double tol = cfg.tolerance.value_or(1e-10);
  auto residuals = parallel_map(cfg.instances, cfg.jobs, [&](std::size_t i) {
    auto rng = instance_rng(cfg.seed, i);
    return extensivity_residual(functional, random_joint(cfg.m, cfg.n, rng, cfg.concentration), f);
  });

  BatchReport rep = begin_report(cfg, describe(d), "residual");
  rep.instances = residuals.size();
  double worst = 0.0;
  for (double r : residuals) {
    const bool ok = std::abs(r) <= tol;
    ++(ok ? rep.pass_count : rep.fail_count);
    track_slack(rep, tol - std::abs(r));
    worst = std::max(worst, std::abs(r));
  }
  rep.notes.push_back("coefficient f(r) = r^" + fmt(q, 17));
  rep.notes.push_back("max |residual| = " + fmt(worst));
  return rep;
}

BatchReport run_bounds(const RunConfig& cfg, const Density& d) {
  std::vector<double> rs = cfg.r;
  if (rs.empty())
    for (int i = 1; i <= 9; ++i) rs.push_back(i / 10.0);
  for (double r : rs)
    if (!(r > 0.0 && r <= 1.0)) throw UsageError("--r values must lie in (0, 1]");
  const BoundsConfig bc = bounds_config(cfg);
  auto rows = parallel_map(rs.size(), cfg.jobs, [&](std::size_t i) { return coefficient_bounds(d, rs[i], bc); });

  BatchReport rep = begin_report(cfg, describe(d), "bounds");
  rep.instances = rows.size();
  for (const auto& b : rows) {
    ++(b.divergent ? rep.divergent_count : rep.pass_count);
    rep.rows.push_back({{"r", b.r},
                        {"lower", b.lower},
                        {"upper", b.upper},
                        {"arg_inf", b.lower_meta.arg},
                        {"arg_sup", b.upper_meta.arg},
                        {"lower_error", b.lower_error()},
                        {"upper_error", b.upper_error()},
                        {"divergent", b.divergent ? 1.0 : 0.0}});
  }
  if (rep.divergent_count > 0) rep.notes.push_back("upper bound diverges as t -> 0 for some r");
  return rep;
}

BatchReport run_recover(const RunConfig& cfg, const Density& d) {
  const PowerRecovery pr = recover_f(d);
  BatchReport rep = begin_report(cfg, describe(d), "recover-f");
  rep.instances = 1;
  ++(pr.verdict == PowerVerdict::inconclusive ? rep.fail_count : rep.pass_count);
  rep.notes.push_back(std::string("verdict = ") + to_string(pr.verdict));
  rep.notes.push_back("q_est = " + fmt(pr.q_est, 15));
  ReportRow row = {{"q_est", pr.q_est},
                   {"consistency", pr.consistency},
                   {"x_spread", pr.x_spread},
                   {"exponent_spread", pr.exponent_spread},
                   {"multiplicativity_defect", pr.multiplicativity_defect}};
  if (pr.reconstruction) {
    const auto& rc = *pr.reconstruction;
    row.insert(row.end(), {{"k", rc.k},
                           {"a", rc.a},
                           {"b", rc.b},
                           {"log_branch", rc.log_branch ? 1.0 : 0.0},
                           {"reconstruction_error", rc.max_error}});
  }
  rep.rows.push_back(std::move(row));
  return rep;
}

BatchReport run_counterexample_remark5(const RunConfig& cfg) {
  if (!(cfg.x > 0.0 && cfg.x < 1.0)) throw UsageError("--x must lie in (0, 1)");
  const Density d = log_sine_density();
  const EntropyFunctional functional(d);
  SandwichConfig sc;
  sc.bounds = bounds_config(cfg);
  const double limit = d.s1(1.0) * (std::numbers::sqrt2 - 1.0) / 2.0;

  BatchReport rep = begin_report(cfg, describe(d), "counterexample");
  // The requested x plus two halvings, to show the approach to the limit.
  for (double x : {cfg.x, cfg.x / 2, cfg.x / 4}) {
    const double lhs = iff_lhs(functional, iff_witness_matrix(x), sc);
    rep.rows.push_back({{"x", x}, {"iff_lhs", lhs}, {"limit", limit}, {"gap", lhs - limit}});
  }
  const double lhs = rep.rows.front()[1].second;
  rep.instances = 1;
  ++(lhs < 0.0 ? rep.pass_count : rep.fail_count);
  rep.worst_slack = -lhs;
  rep.notes.push_back("iff_lhs(x = " + fmt(cfg.x) + ") = " + fmt(lhs) +
                      (lhs < 0.0 ? " < 0: lower estimate falls below zero" : " >= 0: not reproduced at this x"));
  rep.notes.push_back("limit s'(1)(sqrt(2) - 1)/2 = " + fmt(limit));
  return rep;
}

BatchReport run_counterexample_remark2(const RunConfig& cfg) {
  if (cfg.k_max < 1) throw UsageError("--k-max must be >= 1");
  const Density d = oscillating_density();
  const double tol = cfg.tolerance.value_or(1e-8);
  BatchReport rep = begin_report(cfg, describe(d), "counterexample");
  bool monotone = true;
  double prev = -kInf;
  for (int k = 1; k <= cfg.k_max; ++k) {
    const double t = 1.0 / ((k + 0.5) * std::numbers::pi);
    const double ratio = d.s2(t / 2) / d.s2(t);
    const double closed = 0.5 * ((k + 0.5) * std::numbers::pi + 0.5);
    const double err = std::abs(ratio - closed);
    ++(err <= tol ? rep.pass_count : rep.fail_count);
    track_slack(rep, tol - err);
    monotone = monotone && ratio > prev;
    prev = ratio;
    rep.rows.push_back({{"k", static_cast<double>(k)},
                        {"t_k", t},
                        {"ratio", ratio},
                        {"closed_form", closed},
                        {"abs_error", err}});
  }
  rep.instances = rep.rows.size();
  if (!monotone) ++rep.fail_count;
  rep.notes.push_back(monotone ? "ratio grows monotonically in k" : "ratio is not monotone in k");
  const auto half = coefficient_bounds(d, 0.5, bounds_config(cfg));
  if (half.divergent) {
    ++rep.divergent_count;
    rep.notes.push_back("coefficient_bounds(r = 1/2) reports divergent upper bound");
  } else {
    ++rep.fail_count;
    rep.notes.push_back("coefficient_bounds(r = 1/2) did not detect divergence");
  }
  return rep;
}

BatchReport run_axioms(const RunConfig& cfg, const Density& d) {
  const EntropyFunctional functional(d);
  std::vector<std::size_t> sizes;
  for (std::size_t k = 2; k <= std::max<std::size_t>(2, cfg.n); ++k) sizes.push_back(k);
  const AxiomReport ax = axiom_suite(functional, sizes, cfg.seed, cfg.instances);

  BatchReport rep = begin_report(cfg, describe(d), "axioms");
  rep.instances = ax.instances;
  rep.fail_count = ax.continuity_failures + ax.maximality_failures + ax.expandability_failures +
                   (ax.modulus_shrinks ? 0 : 1);
  rep.pass_count = ax.instances - std::min(ax.instances, rep.fail_count);
  rep.worst_slack = ax.worst_maximality_slack;
  rep.notes.push_back("continuity failures = " + std::to_string(ax.continuity_failures));
  rep.notes.push_back("maximality failures = " + std::to_string(ax.maximality_failures));
  rep.notes.push_back("expandability failures = " + std::to_string(ax.expandability_failures));
  rep.notes.push_back(ax.modulus_shrinks ? "continuity modulus shrinks with eps"
                                         : "continuity modulus does not shrink with eps");
  for (const auto& c : ax.continuity) rep.rows.push_back({{"eps", c.eps}, {"modulus", c.modulus}});
  return rep;
}

BatchReport run_theta(const RunConfig& cfg, const Density& d) {
  BatchReport rep = begin_report(cfg, describe(d), "theta-phi");
  rep.instances = 1;
  try {
    const PhiFunction phi = phi_from_density(d);
    const double theta = theta_phi(phi);
    ++rep.pass_count;
    rep.notes.push_back("theta_phi = " + fmt(theta));
    rep.notes.push_back(phi.domain_note());
    rep.rows.push_back({{"theta_phi", theta}, {"phi_slope_at_one", phi.slope_at_one()}});
  } catch (const Error& e) {
    if (e.code() != Errc::precondition) throw;
    ++rep.fail_count;
    rep.notes.push_back(e.what());
  }
  return rep;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  if (cfg.instances < 1) throw UsageError("--instances must be >= 1");
  if (cfg.m < 1 || cfg.n < 1) throw UsageError("--m and --n must be >= 1");
  if (cfg.jobs < 1) throw UsageError("--jobs must be >= 1");
  if (cfg.grid_n < 256) throw UsageError("--grid-n must be >= 256");
  if (!(cfg.t_min > 0.0 && cfg.t_min < 1.0)) throw UsageError("--t-min must lie in (0, 1)");
  if (!(cfg.concentration > 0.0)) throw UsageError("--concentration must be > 0");

  RunResult out;
  switch (cfg.command) {
    case Command::verify_sandwich: out.report = run_sandwich(cfg, resolve_density(cfg)); break;
    case Command::residual: out.report = run_residual(cfg, resolve_density(cfg)); break;
    case Command::bounds: out.report = run_bounds(cfg, resolve_density(cfg)); break;
    case Command::recover_f: out.report = run_recover(cfg, resolve_density(cfg)); break;
    case Command::axioms: out.report = run_axioms(cfg, resolve_density(cfg)); break;
    case Command::theta_phi: out.report = run_theta(cfg, resolve_density(cfg)); break;
    case Command::counterexample:
      if (cfg.target == "remark5") {
        out.report = run_counterexample_remark5(cfg);
      } else if (cfg.target == "remark2") {
        out.report = run_counterexample_remark2(cfg);
      } else {
        throw UsageError("counterexample target must be remark2 or remark5");
      }
      break;
  }
  out.exit_code = out.report.fail_count == 0 ? 0 : 1;
  return out;
}

namespace {

constexpr const char* kFooter = R"(Reports:
  JSON (default) is the canonical form. Keys: density, check, instances,
  pass_count, fail_count, worst_slack, divergent_count, seed, notes, and rows
  when the command produces a detail table.
  CSV is a projection. Commands with a detail table print it; the others print
  one summary line with the JSON keys above as columns.
  Detail table columns:
    bounds            r,lower,upper,arg_inf,arg_sup,lower_error,upper_error,divergent
    recover-f         q_est,consistency,x_spread,exponent_spread,
                      multiplicativity_defect[,k,a,b,log_branch,reconstruction_error]
    counterexample    remark5: x,iff_lhs,limit,gap
                      remark2: k,t_k,ratio,closed_form,abs_error
    axioms            eps,modulus
    theta-phi         theta_phi,phi_slope_at_one
Exit status: 0 when nothing failed (divergence alone is not a failure),
1 when a check failed, 2 on a usage error.
The seed falls back to $EXTENSO_SEED, then 0.)";

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Generalized entropy functionals: coefficient bounds, sandwich checks, power-law recovery."};
  app.name("extenso");
  app.footer(kFooter);
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--density", cfg.density, "kind (bg, tsallis, remark2, remark5), JSON spec, or path to one");
  app.add_option("--q", cfg.q, "Tsallis index");
  app.add_option("--m", cfg.m, "rows of random joint laws")->check(CLI::PositiveNumber);
  app.add_option("--n", cfg.n, "columns of random joint laws; max simplex size for axioms")
      ->check(CLI::PositiveNumber);
  app.add_option("--instances", cfg.instances, "random instances (per size for axioms)")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "base seed")->envname("EXTENSO_SEED");
  app.add_option("--concentration", cfg.concentration, "Dirichlet concentration")->check(CLI::PositiveNumber);
  app.add_option("--t-min", cfg.t_min, "left end of the bounds scan");
  app.add_option("--grid-n", cfg.grid_n, "bounds scan grid size (>= 256)");
  app.add_option("--tolerance", cfg.tolerance, "override the command's tolerance");
  app.add_option("--jobs", cfg.jobs, "worker threads; output does not depend on it")->check(CLI::PositiveNumber);
  app.add_option("--output,-o", cfg.output, "write the report here instead of stdout");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  const std::pair<const char*, Command> plain[] = {
      {"verify-sandwich", Command::verify_sandwich},
      {"residual", Command::residual},
      {"bounds", Command::bounds},
      {"recover-f", Command::recover_f},
      {"axioms", Command::axioms},
      {"theta-phi", Command::theta_phi},
  };
  const char* help[] = {
      "check lower <= S(P) - S(marginal) <= upper on random joint laws",
      "chain-rule residual with f(r) = r^q on random joint laws",
      "coefficient bounds at --r points",
      "recover the coefficient function and test for a power law",
      "continuity, maximality and expandability on random vectors",
      "growth index of phi = -1/s''",
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (std::size_t i = 0; i < std::size(plain); ++i) subs.emplace_back(app.add_subcommand(plain[i].first, help[i]), plain[i].second);
  subs[2].first->add_option("--r", cfg.r, "points in (0, 1]; default 0.1, 0.2, ..., 0.9");

  auto* ce = app.add_subcommand("counterexample", "reproduce the remark2 or remark5 construction");
  ce->add_option("target", cfg.target, "remark2 or remark5")->required()->check(CLI::IsMember({"remark2", "remark5"}));
  ce->add_option("--x", cfg.x, "remark5: parameter of the 2x2 witness law");
  ce->add_option("--k-max", cfg.k_max, "remark2: largest k in the t_k table");
  subs.emplace_back(ce, Command::counterexample);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }
  for (const auto& [sub, command] : subs)
    if (sub->parsed()) cfg.command = command;

  RunResult result;
  try {
    result = run(cfg);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string text = cfg.format == "csv" ? to_csv(result.report) : to_json(result.report);
  if (cfg.output.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << cfg.output << "\n";
      return 2;
    }
    file << text;
  }
  const auto& rep = result.report;
  err << rep.check << " " << rep.density << ": " << rep.pass_count << " pass, " << rep.fail_count << " fail, "
      << rep.divergent_count << " divergent\n";
  return result.exit_code;
}

}  // namespace extenso::cli
