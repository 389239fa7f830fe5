#pragma once

// Probabilistic side of the problem: Feynman-Kac path ensembles for the
// oscillating and homogenized diffusions, per-cell occupation masses, the
// Dirichlet heat semigroup of the homogenized operator and the bootstrap
// argument that turns phi <= delta + e^{t L} phi into a sup bound.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "homog/homsolver.hpp"
#include "homog/simd/kernels.hpp"

namespace homog {

// ---------------------------------------------------------------------------
// Path simulation
// ---------------------------------------------------------------------------

struct PathParams {
  double x0 = 0.5;
  double horizon = 1.0;
  double dt = 1e-5;
  std::uint64_t paths = 1;
  std::uint64_t seed = 0;
};

enum class ExitSide { None, Left, Right };

struct PathOutcome {
  double endpoint = 0.0;
  /// int_0^{min(t, tau)} f(X_s) ds, left-point rule; 0 without a cost hook.
  double running_cost = 0.0;
  std::optional<double> exit_time;
  ExitSide side = ExitSide::None;
};

struct SimulationOptions {
  /// Running cost accumulated until exit; nullptr disables accumulation.
  const FunctionSpec* running_cost = nullptr;
  /// Test hook: every Gaussian increment is zero.
  bool zero_noise = false;
  /// Kill a path whose Brownian bridge between two interior positions
  /// crossed the boundary (local variance 2 a(x/eps) dt).
  bool bridge_correction = true;
  /// Kernel set; nullptr selects simd::active_kernels().
  const simd::KernelSet* kernels = nullptr;
};

/// Euler-Maruyama for dX = a'(X/eps)/eps dt + sqrt(2 a(X/eps)) dW on (0,1),
/// the diffusion generated by (a(x/eps) u')'. Paths stop at the first exit
/// and stay at the exit point. Path i draws its increments from a generator
/// seeded from (seed, i) only, so results do not depend on scheduling.
class PathSimulator {
public:
  /// Throws NumericalError for non-differentiable coefficients.
  PathSimulator(const PeriodicCoefficient& a, double eps);

  /// Constant-coefficient diffusion with diffusivity abar.
  static PathSimulator homogenized(double abar);

  /// dt must not exceed eps^2/10 (PreconditionError otherwise).
  std::vector<PathOutcome> run(const PathParams& params, const SimulationOptions& options = {}) const;
  PathOutcome run_one(const PathParams& params, std::uint64_t index,
                      const SimulationOptions& options = {}) const;

  double eps() const { return eps_; }

private:
  PathSimulator(simd::TrigPoly profile, bool reciprocal, double eps, bool constant);
  void validate(const PathParams& params) const;
  void run_block(const PathParams& params, const SimulationOptions& options, std::uint64_t first,
                 std::size_t count, PathOutcome* out) const;

  simd::TrigPoly profile_;
  bool reciprocal_ = false;
  double eps_ = 1.0;
  bool constant_ = false;
};

PathOutcome simulate_path(const PeriodicCoefficient& a, double eps, const PathParams& params,
                          std::uint64_t index, const SimulationOptions& options = {});

/// Seed for path `index` derived from the master seed (splitmix64 mixing).
std::uint64_t path_seed(std::uint64_t master, std::uint64_t index);

struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(paths)
  std::uint64_t paths = 0;
  double absorbed_left = 0.0;
  double absorbed_right = 0.0;

  double z_score(double reference) const;
};

/// Mean and standard error with pairwise summation in index order.
MCEstimate summarize(std::span<const double> samples);

/// E u_eps(X_t) + E int_0^{t ^ tau} f(X_s) ds for X started at params.x0,
/// run to params.horizon; u_eps from the explicit formula.
MCEstimate fk_estimate_u_eps(const ProblemInstance& p, const PathParams& params,
                             const SimulationOptions& options = {});

/// Mean exit time min(tau, horizon) and absorbed fractions.
MCEstimate exit_time_estimate(const PeriodicCoefficient& a, double eps, const PathParams& params,
                              const SimulationOptions& options = {});

// ---------------------------------------------------------------------------
// Cell masses
// ---------------------------------------------------------------------------

struct CellMassRow {
  long cell_index = 0;
  double lo = 0.0;
  double hi = 0.0;
  double mc_mass = 0.0;
  double exact_mass = 0.0;
  double z = 0.0;
  /// Same cell from an ensemble of the homogenized diffusion on the same seed.
  double homogenized_mc_mass = 0.0;
};

struct CellMassTable {
  std::vector<CellMassRow> rows;
  double max_abs_z = 0.0;
  double absorbed_left = 0.0;
  double absorbed_right = 0.0;
  double interior_mass = 0.0;
  std::uint64_t paths = 0;
};

/// Homogenized Dirichlet heat kernel mass
/// int_lo^hi l_t(x, y) dy = 2 sum_k e^{-abar k^2 pi^2 t} sin(k pi x) (cos k pi lo - cos k pi hi)/(k pi).
double homogenized_cell_mass(double abar, double t, double x, double lo, double hi);

/// Occupation mass at time params.horizon of the eps-diffusion started at
/// params.x0, over every cell [x0 + k eps, x0 + (k+1) eps] inside (0,1),
/// against the homogenized kernel. z uses the binomial standard error of
/// the exact mass.
CellMassTable cell_mass_check(const PeriodicCoefficient& a, double eps, const PathParams& params,
                              const SimulationOptions& options = {});

// ---------------------------------------------------------------------------
// Dirichlet heat semigroup of abar d^2/dx^2 on (0,1)
// ---------------------------------------------------------------------------

/// Discrete sine transform on the grid i/N: values (zero endpoints) <->
/// coefficients of sin(k pi x), k = 1..N-1.
class SineSeries {
public:
  /// Values at i/N, i = 0..N; endpoints are ignored (treated as zero).
  explicit SineSeries(std::span<const double> values, const simd::KernelSet* kernels = nullptr);

  std::size_t intervals() const { return n_; }
  /// Coefficient of sin(k pi x); index 0 is unused.
  const std::vector<double>& coefficients() const { return coeffs_; }

  /// sum_k c_k e^{-abar k^2 pi^2 t} sin(k pi x) at an arbitrary x.
  double evaluate(double x, double abar, double t) const;
  /// The same on the grid i/N.
  std::vector<double> propagate(double abar, double t) const;

private:
  std::size_t n_;
  const simd::KernelSet* kernels_;
  std::vector<double> table_;
  std::vector<double> coeffs_;
};

/// e^{t abar d^2/dx^2} phi, spectrally.
SolutionField heat_propagate(const SolutionField& phi, double abar, double t);
std::vector<double> heat_propagate(std::span<const double> values, double abar, double t);

/// c = 1 - max_x (e^{t abar d^2/dx^2} 1)(x) on a grid with N intervals.
double contraction_constant(double abar, double t, std::size_t intervals = 1000);

struct BootstrapResult {
  bool hypothesis_holds = false;
  /// First grid point where phi > delta + e^{tL} phi, and by how much.
  std::optional<double> violation_x;
  double violation = 0.0;
  std::size_t iterations = 0;     // k = ceil(1/t), so that k t lies in [1, 2)
  bool iteration_holds = false;   // phi <= k delta + e^{k t L} phi on the grid
  double contraction = 0.0;       // c at time k t
  double implied_bound = 0.0;     // k delta / c
  double max_phi = 0.0;
  bool verified = false;          // hypothesis holds and max phi <= implied bound
};

/// Checks phi <= delta + e^{tL} phi on the grid and, if it holds, the
/// bound max phi <= k delta / c obtained by iterating it k = ceil(1/t) times.
BootstrapResult bootstrap_bound(const SolutionField& phi, double delta, double t, double abar);

// ---------------------------------------------------------------------------
// Error terms
// ---------------------------------------------------------------------------

struct DeltaPoint {
  double x = 0.0;
  double source_mc = 0.0;       // E int_0^{t ^ tau} f(X_s) ds
  double source_exact = 0.0;    // int_0^t e^{sL} f ds (x) = u - e^{tL} u
  double source_stderr = 0.0;
  double terminal_mc = 0.0;     // E u_eps(X_t)
  double terminal_exact = 0.0;  // e^{tL} u_eps (x)
  double terminal_stderr = 0.0;
  double value = 0.0;           // |source diff| + |terminal diff|
  double stderr_ = 0.0;
};

struct DeltaEstimate {
  std::vector<DeltaPoint> points;
  double delta = 0.0;
  double stderr_ = 0.0;  // at the maximizing point
  double x_at_max = 0.0;
  /// eps (|f| + |f'|) + eps (|u'| + |u_eps'|) / t with sup norms.
  double analytic_bound = 0.0;
  double f_sup = 0.0, f_prime_sup = 0.0, u_prime_sup = 0.0, u_eps_prime_sup = 0.0;
};

/// 17 equispaced points in [0.1, 0.9].
std::vector<double> default_delta_points();

/// Monte Carlo estimate of
/// delta = max_x |int_0^t int (k_s - l_s) f| + |int (k_t - l_t) u_eps|.
/// params.x0 is ignored; params.horizon is t.
DeltaEstimate delta_estimate(const ProblemInstance& p, const PathParams& params,
                             std::span<const double> points = {},
                             const SimulationOptions& options = {});

}  // namespace homog
