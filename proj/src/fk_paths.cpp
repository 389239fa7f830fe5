#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "homog/error.hpp"
#include "homog/fk.hpp"
#include "homog/parallel.hpp"

namespace homog {

namespace {

constexpr std::size_t kBlock = 32;
// Bridge crossing probability is below e^{-72} once both endpoints are this
// many local standard deviations from the boundary.
constexpr double kBridgeReach = 6.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t step_count(const PathParams& params) {
  if (params.horizon <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(params.horizon / params.dt - 1e-9));
}

}  // namespace

std::uint64_t path_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

PathSimulator::PathSimulator(simd::TrigPoly profile, bool reciprocal, double eps, bool constant)
    : profile_(std::move(profile)), reciprocal_(reciprocal), eps_(eps), constant_(constant) {}

PathSimulator::PathSimulator(const PeriodicCoefficient& a, double eps) : eps_(eps) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  auto g = a.spec().to_trig_poly();
  if (!a.is_smooth() || !g)
    throw NumericalError("path simulation needs a differentiable coefficient, got " +
                         a.describe());
  profile_ = std::move(*g);
  reciprocal_ = a.convention() == CoefficientConvention::Reciprocal;
  constant_ = a.is_constant();
}

PathSimulator PathSimulator::homogenized(double abar) {
  if (!(abar > 0.0)) throw PreconditionError("effective coefficient must be positive");
  return PathSimulator(simd::TrigPoly{{abar}, 0.0, {}, {}}, false, 1.0, true);
}

void PathSimulator::validate(const PathParams& params) const {
  if (!(params.dt > 0.0)) throw PreconditionError("dt must be positive");
  if (params.dt > eps_ * eps_ / 10.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt = " << params.dt << " is too large for eps = " << eps_
       << " (need dt <= eps^2/10 = " << eps_ * eps_ / 10.0 << ")";
    throw PreconditionError(os.str());
  }
  if (!(params.x0 > 0.0 && params.x0 < 1.0))
    throw PreconditionError("starting point must lie in (0,1)");
  if (!(params.horizon >= 0.0)) throw PreconditionError("horizon must be non-negative");
  if (params.paths == 0) throw PreconditionError("path count must be positive");
}

void PathSimulator::run_block(const PathParams& params, const SimulationOptions& options,
                              std::uint64_t first, std::size_t count, PathOutcome* out) const {
  const simd::KernelSet& ks = options.kernels ? *options.kernels : simd::active_kernels();
  const auto coeff_view = simd::TrigPolyView::of(profile_, true);
  const FunctionSpec* cost = options.running_cost;
  std::optional<simd::TrigPoly> cost_poly;
  if (cost) cost_poly = cost->to_trig_poly();
  const auto cost_view = cost_poly ? simd::TrigPolyView::of(*cost_poly, false) : simd::TrigPolyView{};

  std::vector<std::mt19937_64> engines;
  engines.reserve(count);
  std::vector<std::normal_distribution<double>> normals(count);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) engines.emplace_back(path_seed(params.seed, first + i));

  // Alive lanes are kept compacted at the front; lane[j] is the block index.
  std::array<std::size_t, kBlock> lane{};
  std::array<double, kBlock> x{}, z{}, val{}, der{}, drift{}, diff{}, noise{}, next{}, fval{};
  std::size_t alive = count;
  for (std::size_t j = 0; j < count; ++j) {
    lane[j] = j;
    x[j] = params.x0;
    out[j] = PathOutcome{params.x0, 0.0, std::nullopt, ExitSide::None};
  }

  const std::size_t steps = step_count(params);
  const double inv_eps = 1.0 / eps_;
  for (std::size_t s = 0; s < steps && alive > 0; ++s) {
    const double t0 = static_cast<double>(s) * params.dt;
    const bool last = s + 1 == steps;
    const double h = last ? params.horizon - t0 : params.dt;
    const double t1 = last ? params.horizon : t0 + params.dt;

    for (std::size_t j = 0; j < alive; ++j) {
      noise[j] = options.zero_noise ? 0.0 : normals[lane[j]](engines[lane[j]]);
      z[j] = x[j] * inv_eps;
    }
    ks.trig_poly_eval(coeff_view, z.data(), val.data(), der.data(), alive);
    for (std::size_t j = 0; j < alive; ++j) {
      if (reciprocal_) {
        diff[j] = 1.0 / val[j];
        drift[j] = -der[j] * diff[j] * diff[j] * inv_eps;
      } else {
        diff[j] = val[j];
        drift[j] = der[j] * inv_eps;
      }
    }
    if (cost) {
      if (cost_poly) {
        ks.trig_poly_eval(cost_view, x.data(), fval.data(), nullptr, alive);
      } else {
        for (std::size_t j = 0; j < alive; ++j) fval[j] = (*cost)(x[j]);
      }
      for (std::size_t j = 0; j < alive; ++j) out[lane[j]].running_cost += fval[j] * h;
    }
    ks.euler_propose(x.data(), drift.data(), diff.data(), noise.data(), h, next.data(), alive);

    // Descending order keeps swap-removal from skipping lanes.
    for (std::size_t j = alive; j-- > 0;) {
      const std::size_t l = lane[j];
      ExitSide side = ExitSide::None;
      if (next[j] <= 0.0) {
        side = ExitSide::Left;
      } else if (next[j] >= 1.0) {
        side = ExitSide::Right;
      } else if (options.bridge_correction) {
        const double var = 2.0 * diff[j] * h;
        const double reach2 = kBridgeReach * kBridgeReach * var;
        const double dl0 = x[j], dl1 = next[j];
        const double dr0 = 1.0 - x[j], dr1 = 1.0 - next[j];
        const double dl = std::min(dl0, dl1), dr = std::min(dr0, dr1);
        if (dl * dl < reach2) {
          if (uniform(engines[l]) < std::exp(-2.0 * dl0 * dl1 / var)) side = ExitSide::Left;
        }
        if (side == ExitSide::None && dr * dr < reach2) {
          if (uniform(engines[l]) < std::exp(-2.0 * dr0 * dr1 / var)) side = ExitSide::Right;
        }
      }
      if (side == ExitSide::None) {
        x[j] = next[j];
        continue;
      }
      out[l].side = side;
      out[l].exit_time = t1;
      out[l].endpoint = side == ExitSide::Left ? 0.0 : 1.0;
      --alive;
      lane[j] = lane[alive];
      x[j] = x[alive];
    }
  }
  for (std::size_t j = 0; j < alive; ++j) out[lane[j]].endpoint = x[j];
}

std::vector<PathOutcome> PathSimulator::run(const PathParams& params,
                                            const SimulationOptions& options) const {
  validate(params);
  std::vector<PathOutcome> out(params.paths);
  const std::size_t blocks = (params.paths + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      const std::uint64_t first = b * kBlock;
      const std::size_t count = std::min<std::uint64_t>(kBlock, params.paths - first);
      run_block(params, options, first, count, out.data() + first);
    }
  });
  return out;
}

PathOutcome PathSimulator::run_one(const PathParams& params, std::uint64_t index,
                                   const SimulationOptions& options) const {
  PathParams one = params;
  one.paths = 1;
  validate(one);
  PathOutcome out;
  run_block(params, options, index, 1, &out);
  return out;
}

PathOutcome simulate_path(const PeriodicCoefficient& a, double eps, const PathParams& params,
                          std::uint64_t index, const SimulationOptions& options) {
  return PathSimulator(a, eps).run_one(params, index, options);
}

// ---------------------------------------------------------------------------

double MCEstimate::z_score(double reference) const {
  const double d = mean - reference;
  if (stderr_ > 0.0) return d / stderr_;
  return d == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), d);
}

MCEstimate summarize(std::span<const double> samples) {
  MCEstimate e;
  e.paths = samples.size();
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  e.mean = pairwise_sum(samples) / n;
  if (samples.size() > 1) {
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double d = samples[i] - e.mean;
      sq[i] = d * d;
    }
    e.stderr_ = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return e;
}

namespace {

void count_absorbed(const std::vector<PathOutcome>& paths, MCEstimate& e) {
  std::uint64_t left = 0, right = 0;
  for (const auto& p : paths) {
    left += p.side == ExitSide::Left;
    right += p.side == ExitSide::Right;
  }
  const double n = static_cast<double>(paths.size());
  e.absorbed_left = static_cast<double>(left) / n;
  e.absorbed_right = static_cast<double>(right) / n;
}

}  // namespace

MCEstimate fk_estimate_u_eps(const ProblemInstance& p, const PathParams& params,
                             const SimulationOptions& options) {
  const PathSimulator sim(p.a, p.eps);
  SimulationOptions opts = options;
  opts.running_cost = &p.f;
  const auto paths = sim.run(params, opts);
  const ExactSolution u(p);
  std::vector<double> samples(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    // u_eps vanishes on the boundary, so exited paths contribute cost only.
    const double terminal = paths[i].side == ExitSide::None ? u(paths[i].endpoint) : 0.0;
    samples[i] = terminal + paths[i].running_cost;
  }
  auto e = summarize(samples);
  count_absorbed(paths, e);
  return e;
}

MCEstimate exit_time_estimate(const PeriodicCoefficient& a, double eps, const PathParams& params,
                              const SimulationOptions& options) {
  const auto paths = PathSimulator(a, eps).run(params, options);
  std::vector<double> samples(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i)
    samples[i] = paths[i].exit_time.value_or(params.horizon);
  auto e = summarize(samples);
  count_absorbed(paths, e);
  return e;
}

// ---------------------------------------------------------------------------

double homogenized_cell_mass(double abar, double t, double x, double lo, double hi) {
  if (!(abar > 0.0)) throw PreconditionError("effective coefficient must be positive");
  if (!(t > 0.0)) throw PreconditionError("cell mass needs t > 0");
  const double pi = std::numbers::pi;
  const double rate = abar * pi * pi * t;
  // Terms decay like e^{-rate k^2}; stop once they are below 1e-18 relative.
  const auto kmax = static_cast<std::size_t>(std::ceil(std::sqrt(42.0 / rate))) + 2;
  std::vector<double> terms(kmax);
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double kd = static_cast<double>(k);
    terms[k - 1] = std::exp(-rate * kd * kd) * std::sin(kd * pi * x) *
                   (std::cos(kd * pi * lo) - std::cos(kd * pi * hi)) / (kd * pi);
  }
  return 2.0 * pairwise_sum(terms);
}

CellMassTable cell_mass_check(const PeriodicCoefficient& a, double eps, const PathParams& params,
                              const SimulationOptions& options) {
  if (!(params.horizon > 0.0)) throw PreconditionError("cell mass needs t > 0");
  const double abar = harmonic_mean(a);
  SimulationOptions opts = options;
  opts.running_cost = nullptr;
  const auto paths = PathSimulator(a, eps).run(params, opts);
  PathSimulator hom = PathSimulator::homogenized(abar);
  // The homogenized run shares the time step; its own dt bound is looser.
  const auto hom_paths = hom.run(params, opts);

  CellMassTable table;
  table.paths = params.paths;
  const double x = params.x0;
  const double slack = 1e-12;
  const auto kmin = static_cast<long>(std::ceil(-x / eps - slack));
  const auto kmax = static_cast<long>(std::floor((1.0 - x) / eps + slack)) - 1;
  for (long k = kmin; k <= kmax; ++k) {
    const double lo = x + static_cast<double>(k) * eps;
    const double hi = lo + eps;
    if (lo <= slack || hi >= 1.0 - slack) continue;
    table.rows.push_back({k, lo, hi, 0.0, homogenized_cell_mass(abar, params.horizon, x, lo, hi),
                          0.0, 0.0});
  }

  const double n = static_cast<double>(params.paths);
  auto bin = [&](const std::vector<PathOutcome>& ps, double CellMassRow::*field) {
    std::vector<std::uint64_t> counts(table.rows.size(), 0);
    for (const auto& p : ps) {
      if (p.side != ExitSide::None) continue;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (p.endpoint >= table.rows[r].lo && p.endpoint < table.rows[r].hi) {
          ++counts[r];
          break;
        }
      }
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r)
      table.rows[r].*field = static_cast<double>(counts[r]) / n;
  };
  bin(paths, &CellMassRow::mc_mass);
  bin(hom_paths, &CellMassRow::homogenized_mc_mass);

  std::uint64_t left = 0, right = 0;
  for (const auto& p : paths) {
    left += p.side == ExitSide::Left;
    right += p.side == ExitSide::Right;
  }
  table.absorbed_left = static_cast<double>(left) / n;
  table.absorbed_right = static_cast<double>(right) / n;
  table.interior_mass = 1.0 - table.absorbed_left - table.absorbed_right;

  for (auto& row : table.rows) {
    const double q = std::clamp(row.exact_mass, 0.0, 1.0);
    const double se = std::sqrt(q * (1.0 - q) / n);
    const double d = row.mc_mass - row.exact_mass;
    row.z = se > 0.0 ? d / se
                     : (std::abs(d) <= 1e-15 ? 0.0
                                             : std::copysign(std::numeric_limits<double>::infinity(), d));
    table.max_abs_z = std::max(table.max_abs_z, std::abs(row.z));
  }
  return table;
}

}  // namespace homog
