#include <algorithm>
#include <cmath>
#include <limits>

#include "homog/error.hpp"
#include "homog/fk.hpp"

namespace homog {

std::vector<double> default_delta_points() {
  std::vector<double> xs(17);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 0.1 + 0.05 * static_cast<double>(i);
  return xs;
}

namespace {

double sampled_sup(const std::function<double(double)>& g, std::size_t intervals) {
  double m = 0.0;
  for (std::size_t i = 0; i <= intervals; ++i)
    m = std::max(m, std::abs(g(static_cast<double>(i) / static_cast<double>(intervals))));
  return m;
}

}  // namespace

DeltaEstimate delta_estimate(const ProblemInstance& p, const PathParams& params,
                             std::span<const double> points, const SimulationOptions& options) {
  const double t = params.horizon;
  if (!(t > 0.0)) throw PreconditionError("delta estimate needs t > 0");
  std::vector<double> xs(points.begin(), points.end());
  if (xs.empty()) xs = default_delta_points();

  const double abar = harmonic_mean(p.a);
  const ExactSolution ue(p);
  const HomogenizedSolution u(abar, p.f);
  const std::size_t n = default_grid_size(p.eps);
  const SineSeries u_series(u.sample(n).values);
  const SineSeries ue_series(ue.sample(n).values);

  const PathSimulator sim(p.a, p.eps);
  SimulationOptions opts = options;
  opts.running_cost = &p.f;

  DeltaEstimate d;
  d.delta = -1.0;
  for (double x : xs) {
    PathParams pp = params;
    pp.x0 = x;
    const auto paths = sim.run(pp, opts);
    std::vector<double> cost(paths.size()), terminal(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
      cost[i] = paths[i].running_cost;
      terminal[i] = paths[i].side == ExitSide::None ? ue(paths[i].endpoint) : 0.0;
    }
    const auto src = summarize(cost);
    const auto term = summarize(terminal);
    DeltaPoint pt;
    pt.x = x;
    pt.source_mc = src.mean;
    pt.source_stderr = src.stderr_;
    pt.source_exact = u(x) - u_series.evaluate(x, abar, t);
    pt.terminal_mc = term.mean;
    pt.terminal_stderr = term.stderr_;
    pt.terminal_exact = ue_series.evaluate(x, abar, t);
    pt.value = std::abs(pt.source_mc - pt.source_exact) + std::abs(pt.terminal_mc - pt.terminal_exact);
    pt.stderr_ = std::hypot(pt.source_stderr, pt.terminal_stderr);
    if (pt.value > d.delta) {
      d.delta = pt.value;
      d.stderr_ = pt.stderr_;
      d.x_at_max = x;
    }
    d.points.push_back(pt);
  }

  d.f_sup = certified_sup_abs(p.f);
  d.f_prime_sup = p.f.is_smooth() ? certified_sup_abs(p.f.derivative())
                                  : std::numeric_limits<double>::quiet_NaN();
  d.u_prime_sup = sampled_sup([&](double y) { return u.derivative(y); }, 4000);
  const auto fine = std::max<std::size_t>(4000, static_cast<std::size_t>(std::ceil(64.0 / p.eps)));
  d.u_eps_prime_sup = sampled_sup([&](double y) { return ue.derivative(y); }, fine);
  d.analytic_bound =
      p.eps * (d.f_sup + d.f_prime_sup) + p.eps * (d.u_prime_sup + d.u_eps_prime_sup) / t;
  return d;
}

}  // namespace homog
