#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>

#include "homog/averaging.hpp"
#include "homog/convergence.hpp"
#include "homog/error.hpp"
#include "homog/fk.hpp"
#include "homog/io/config.hpp"
#include "homog/io/csv.hpp"
#include "homog/io/svg.hpp"

namespace homog::cli {

namespace {

using io::CsvTable;
using io::ExperimentConfig;
using io::format_double;

struct Overrides {
  std::string config;
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> paths;
  std::optional<std::string> out;
};

ExperimentConfig load(const Overrides& o) {
  auto c = io::load_config(o.config);
  if (o.eps) {
    if (!(*o.eps > 0.0 && *o.eps <= 1.0)) throw ConfigError("--eps must lie in (0, 1]");
    if (!c.relaxed && !is_integral_inverse(*o.eps))
      throw ConfigError("--eps: 1/eps must be an integer unless the config sets \"relaxed\"");
    c.eps = {*o.eps};
  }
  if (o.seed) c.mc.seed = *o.seed;
  if (o.paths) {
    if (*o.paths == 0) throw ConfigError("--paths must be positive");
    c.mc.paths = *o.paths;
  }
  if (o.out) c.out_dir = *o.out;
  std::filesystem::create_directories(c.out_dir);
  return c;
}

ProblemInstance instance(const ExperimentConfig& c) {
  return ProblemInstance::make(c.coefficient, c.f, c.eps.front(), c.relaxed);
}

std::size_t grid(const ExperimentConfig& c, double eps) {
  return c.intervals ? c.intervals : default_grid_size(eps);
}

SimulationOptions sim_options(const ExperimentConfig& c) {
  SimulationOptions o;
  o.bridge_correction = c.mc.bridge;
  return o;
}

std::filesystem::path artifact(const ExperimentConfig& c, const std::string& name) {
  return c.out_dir / name;
}

int cmd_solve(const ExperimentConfig& c, std::ostream& out) {
  const auto p = instance(c);
  const std::size_t n = grid(c, p.eps);
  const ExactSolution ue(p);
  const HomogenizedSolution u(p.a, p.f);
  const auto fe = ue.sample(n);
  const auto fh = u.sample(n);
  CsvTable t{{"x", "u_eps", "u_hom"}, {}};
  double sup = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    t.add({format_double(fe.grid[i]), format_double(fe.values[i]), format_double(fh.values[i])});
    sup = std::max(sup, std::abs(fe.values[i] - fh.values[i]));
  }
  io::write_csv(t, artifact(c, "solve.csv"));
  if (c.svg) {
    io::Polyline avg{"moving average", {}, {}};
    const std::function<double(double)> uf = [&ue](double y) { return ue(y); };
    const auto fractions = p.a.cell_breakpoints();
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = fe.grid[i];
      if (x < 0.5 * p.eps || x > 1.0 - 0.5 * p.eps) continue;
      avg.x.push_back(x);
      avg.y.push_back(moving_average(uf, x, p.eps, fractions));
    }
    io::write_svg(io::render_lines_svg("solutions at eps = " + format_double(p.eps),
                                       {{"u_eps", fe.grid, fe.values}, {"u_hom", fh.grid, fh.values},
                                        avg}),
                  artifact(c, "solve.svg"));
  }
  out << "eps = " << format_double(p.eps) << "\n"
      << "c_eps = " << format_double(ue.flux_constant()) << "\n"
      << "max |u_eps - u_hom| = " << format_double(sup) << "\n";
  return kExitOk;
}

int cmd_average(const ExperimentConfig& c, std::ostream& out) {
  const auto p = instance(c);
  const auto prof = error_profile(p, grid(c, p.eps));
  CsvTable t{{"x", "u_eps", "average", "u_hom"}, {}};
  for (std::size_t i = 0; i < prof.x.size(); ++i)
    t.add({format_double(prof.x[i]), format_double(prof.exact[i]), format_double(prof.averaged[i]),
           format_double(prof.homogenized[i])});
  io::write_csv(t, artifact(c, "average.csv"));
  out << "eps = " << format_double(p.eps) << "\n"
      << "sup |u_eps - u| = " << format_double(prof.sup_error(ErrorVariant::raw())) << "\n"
      << "sup |A u_eps - u| = " << format_double(prof.sup_error(ErrorVariant::averaged())) << "\n";
  return kExitOk;
}

int cmd_corrector(const ExperimentConfig& c, std::ostream& out) {
  const auto p = instance(c);
  const Corrector ell(p.a, p.f);
  const auto prof = error_profile(p, grid(c, p.eps));
  CsvTable t{{"x", "corrector", "averaged_minus_hom"}, {}};
  for (std::size_t i = 0; i < prof.x.size(); ++i)
    t.add({format_double(prof.x[i]), format_double(prof.corrector[i]),
           format_double(prof.averaged[i] - prof.homogenized[i])});
  io::write_csv(t, artifact(c, "corrector.csv"));
  out << "M1 = " << format_double(ell.m1()) << "\n"
      << "M2 = " << format_double(ell.m2()) << "\n"
      << "int f = " << format_double(ell.integral_f()) << "\n"
      << "int int f = " << format_double(ell.double_integral_f()) << "\n"
      << "vanishes = " << (ell.vanishes() ? "true" : "false") << "\n"
      << "sup |A u_eps - l_eps - u| = "
      << format_double(prof.sup_error(ErrorVariant::corrected(-1))) << "\n"
      << "sup |A u_eps + l_eps - u| = "
      << format_double(prof.sup_error(ErrorVariant::corrected(1))) << "\n";
  return kExitOk;
}

int cmd_converge(const ExperimentConfig& c, std::ostream& out) {
  SweepOptions opts;
  opts.intervals = c.intervals;
  opts.relaxed = c.relaxed;
  const auto report = sweep(c.coefficient, c.f, c.eps, c.variants, opts);
  io::write_csv(io::convergence_table(report), artifact(c, "converge.csv"));
  io::write_csv(io::convergence_summary(report), artifact(c, "converge_summary.csv"));
  if (c.svg) io::write_svg(io::render_convergence_svg(report), artifact(c, "converge.svg"));
  out << "instance: " << report.instance << "\n";
  if (!report.tags.empty()) out << "tags: " << report.tags << "\n";
  for (const auto& s : report.series) {
    out << s.variant.name() << ": " << to_string(s.status);
    if (s.status == FitStatus::Fitted) out << " rate = " << format_double(s.fit.rate);
    out << "\n";
  }
  if (report.corrector_sign != 0)
    out << "corrector sign = " << report.corrector_sign << " (rates: + "
        << format_double(report.calibration_rate_plus) << ", - "
        << format_double(report.calibration_rate_minus) << ")\n";
  return kExitOk;
}

int cmd_fk_verify(const ExperimentConfig& c, std::ostream& out) {
  const auto p = instance(c);
  const auto params = c.path_params();
  const auto est = fk_estimate_u_eps(p, params, sim_options(c));
  const double reference = u_eps(p, params.x0);
  const double z = est.z_score(reference);
  CsvTable t{{"x", "t", "dt", "paths", "seed", "mean", "stderr", "u_eps", "z", "absorbed_left",
              "absorbed_right"},
             {}};
  t.add({format_double(params.x0), format_double(params.horizon), format_double(params.dt),
         std::to_string(params.paths), std::to_string(params.seed), format_double(est.mean),
         format_double(est.stderr_), format_double(reference), format_double(z),
         format_double(est.absorbed_left), format_double(est.absorbed_right)});
  io::write_csv(t, artifact(c, "fk_verify.csv"));
  out << "estimate = " << format_double(est.mean) << " +- " << format_double(est.stderr_) << "\n"
      << "u_eps(x) = " << format_double(reference) << "\n"
      << "z = " << format_double(z) << "\n";
  return kExitOk;
}

int cmd_cell_mass(const ExperimentConfig& c, std::ostream& out) {
  const auto p = instance(c);
  const auto table = cell_mass_check(p.a, p.eps, c.path_params(), sim_options(c));
  io::write_csv(io::cell_mass_csv(table), artifact(c, "cell_mass.csv"));
  out << "cells = " << table.rows.size() << "\n"
      << "max |z| = " << format_double(table.max_abs_z) << "\n"
      << "absorbed = " << format_double(table.absorbed_left) << ", "
      << format_double(table.absorbed_right) << "\n";
  return kExitOk;
}

int cmd_bootstrap(const ExperimentConfig& c, std::ostream& out) {
  const auto p = instance(c);
  const auto params = c.path_params();
  const auto d = delta_estimate(p, params, {}, sim_options(c));

  CsvTable pts{{"x", "source_mc", "source_exact", "source_stderr", "terminal_mc", "terminal_exact",
                "terminal_stderr", "value"},
               {}};
  for (const auto& q : d.points)
    pts.add({format_double(q.x), format_double(q.source_mc), format_double(q.source_exact),
             format_double(q.source_stderr), format_double(q.terminal_mc),
             format_double(q.terminal_exact), format_double(q.terminal_stderr),
             format_double(q.value)});
  io::write_csv(pts, artifact(c, "delta_points.csv"));

  const std::size_t n = grid(c, p.eps);
  const ExactSolution ue(p);
  const HomogenizedSolution u(p.a, p.f);
  SolutionField phi = ue.sample(n);
  const auto hom = u.sample(n);
  for (std::size_t i = 0; i <= n; ++i) phi.values[i] = std::abs(phi.values[i] - hom.values[i]);
  phi.values.front() = 0.0;
  phi.values.back() = 0.0;
  const auto b = bootstrap_bound(phi, d.delta, params.horizon, u.effective_coefficient());

  CsvTable t{{"key", "value"}, {}};
  auto row = [&t](const std::string& k, double v) { t.add({k, format_double(v)}); };
  row("delta", d.delta);
  row("delta_stderr", d.stderr_);
  row("delta_x", d.x_at_max);
  row("analytic_bound", d.analytic_bound);
  row("max_phi", b.max_phi);
  row("iterations", static_cast<double>(b.iterations));
  row("contraction", b.contraction);
  row("implied_bound", b.implied_bound);
  row("hypothesis_holds", b.hypothesis_holds ? 1.0 : 0.0);
  row("violation", b.violation);
  row("violation_x", b.violation_x.value_or(std::nan("")));
  row("verified", b.verified ? 1.0 : 0.0);
  io::write_csv(t, artifact(c, "bootstrap.csv"));

  out << "delta = " << format_double(d.delta) << " +- " << format_double(d.stderr_) << "\n"
      << "analytic bound = " << format_double(d.analytic_bound) << "\n"
      << "max |u_eps - u| = " << format_double(b.max_phi) << "\n"
      << "implied bound = " << format_double(b.implied_bound) << "\n";
  if (!b.hypothesis_holds)
    out << "hypothesis violated at x = " << format_double(*b.violation_x) << " by "
        << format_double(b.violation) << "\n";
  out << "verified = " << (b.verified ? "true" : "false") << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Periodic homogenization experiments for -(a(x/eps) u')' = f on (0,1)", "homog1d"};
  app.require_subcommand(1);

  using Command = int (*)(const ExperimentConfig&, std::ostream&);
  struct Verb {
    const char* name;
    const char* help;
    Command fn;
  };
  const Verb verbs[] = {
      {"solve", "u_eps and u on a grid", cmd_solve},
      {"average", "moving average of u_eps against u", cmd_average},
      {"corrector", "corrector moments and profile", cmd_corrector},
      {"converge", "sup errors over the eps list and fitted rates", cmd_converge},
      {"fk-verify", "Monte Carlo Feynman-Kac estimate of u_eps(x)", cmd_fk_verify},
      {"cell-mass", "per-cell occupation masses against the homogenized kernel", cmd_cell_mass},
      {"bootstrap", "measured delta and the bootstrap sup bound", cmd_bootstrap},
  };

  Overrides o;
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    sub->add_option("config", o.config, "JSON experiment configuration")->required();
    sub->add_option("--eps", o.eps, "single eps replacing the configured list");
    sub->add_option("--seed", o.seed, "Monte Carlo master seed");
    sub->add_option("--paths", o.paths, "Monte Carlo path count");
    sub->add_option("--out", o.out, "output directory");
    subs.emplace_back(sub, v.fn);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "homog1d: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    for (const auto& [sub, fn] : subs)
      if (sub->parsed()) return fn(load(o), out);
  } catch (const ConfigError& e) {
    err << "homog1d: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "homog1d: precondition violated: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "homog1d: numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "homog1d: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace homog::cli
