#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "homog/funcspec.hpp"
#include "homog/quadrature.hpp"

namespace homog {

/// -(a(x/eps) u')' = f on (0,1), u(0) = u(1) = 0.
struct ProblemInstance {
  PeriodicCoefficient a;
  FunctionSpec f;
  double eps = 0.0;
  /// Accept eps with non-integer 1/eps; results are tagged accordingly.
  bool relaxed = false;

  /// Validates eps (1/eps integral unless relaxed) and returns the instance.
  static ProblemInstance make(PeriodicCoefficient a, FunctionSpec f, double eps,
                              bool relaxed = false);

  /// 1/eps is a positive integer.
  bool integral_cells() const;
  /// Integral cell count and a continuous coefficient.
  bool within_rate_hypotheses() const;
  std::string hypothesis_tags() const;
};

/// True when 1/eps is within 1e-9 of a positive integer.
bool is_integral_inverse(double eps);

enum class Provenance { ExactFormula, Homogenized, FiniteDifference, MovingAverage };

const char* to_string(Provenance p);

/// Values on the uniform grid x_i = i/N, i = 0..N.
struct SolutionField {
  std::vector<double> grid;
  std::vector<double> values;
  Provenance provenance = Provenance::ExactFormula;

  std::size_t intervals() const { return grid.empty() ? 0 : grid.size() - 1; }
};

std::vector<double> uniform_grid(std::size_t intervals);

/// max(1000, ceil(8/eps)): every eps-cell gets at least eight samples.
std::size_t default_grid_size(double eps);

// ---------------------------------------------------------------------------
// Coefficient functionals
// ---------------------------------------------------------------------------

/// Integral of g(z) over one period, split at the coefficient's breakpoints.
double period_integral(const PeriodicCoefficient& a, const std::function<double(double)>& g);

/// abar = (int_0^1 1/a)^-1.
double harmonic_mean(const PeriodicCoefficient& a);
double arithmetic_mean(const PeriodicCoefficient& a);

/// M1 = int_0^1 a(y)^-1 (y - 1/2) dy.
double moment_m1(const PeriodicCoefficient& a);

/// M2 = int_{-1/2}^{1/2} int_0^y a(z)^-1 dz dy, with a extended periodically
/// for negative z. Evaluated as the single integral
/// int_{-1/2}^{1/2} sign(z) (1/2 - |z|) a(z)^-1 dz.
double moment_m2(const PeriodicCoefficient& a);

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

/// Flux constant of the exact solution,
/// c_eps = int_0^1 a(x/eps)^-1 F(x) dx / int_0^1 a(x/eps)^-1 dx, F = int_0^x f.
/// For integral 1/eps the denominator is 1/abar.
double c_eps(const ProblemInstance& p);

/// c_eps = c0 + eps c1 + O(eps^2), c0 = int_0^1 F, c1 = abar M1 int_0^1 f.
struct CepsExpansion {
  double c0 = 0.0;
  double c1 = 0.0;
};
CepsExpansion c_eps_asymptotic(const PeriodicCoefficient& a, const FunctionSpec& f);

/// u_eps(x) = int_0^x a(y/eps)^-1 (c_eps - F(y)) dy, tabulated at every
/// eps-cell boundary so that a query costs one partial-cell Gauss rule.
class ExactSolution {
public:
  explicit ExactSolution(const ProblemInstance& p, int order = kDefaultGaussOrder);

  double operator()(double x) const { return prefix_(x); }
  /// u_eps'(x) = a(x/eps)^-1 (c_eps - F(x)).
  double derivative(double x) const;
  double flux_constant() const { return c_; }
  const ProblemInstance& problem() const { return p_; }
  /// Breakpoints of [0,1] where the integrand may be non-smooth.
  const std::vector<double>& partition() const { return prefix_.nodes(); }

  SolutionField sample(std::size_t intervals) const;

private:
  ProblemInstance p_;
  FunctionSpec antiderivative_f_;
  double c_ = 0.0;
  PrefixIntegral prefix_;
};

/// u(x) = (c x - int_0^x F) / abar with c = int_0^1 F.
class HomogenizedSolution {
public:
  HomogenizedSolution(double abar, const FunctionSpec& f);
  HomogenizedSolution(const PeriodicCoefficient& a, const FunctionSpec& f)
      : HomogenizedSolution(harmonic_mean(a), f) {}

  double operator()(double x) const;
  double derivative(double x) const;
  double effective_coefficient() const { return abar_; }

  SolutionField sample(std::size_t intervals) const;

private:
  double abar_;
  FunctionSpec first_;   // F
  FunctionSpec second_;  // int_0^x F
  double c_;
};

double u_eps(const ProblemInstance& p, double x);
double u_hom(const PeriodicCoefficient& a, const FunctionSpec& f, double x);

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

/// Thomas algorithm for a tridiagonal system; lower[0] and upper[n-1] are
/// ignored. Throws NumericalError on a zero pivot.
std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs);

/// Conservative second-order scheme with harmonic-mean face coefficients,
/// -(A_{i+1/2}(u_{i+1}-u_i) - A_{i-1/2}(u_i-u_{i-1})) / h^2 = f(x_i).
SolutionField fd_oracle(const ProblemInstance& p, std::size_t intervals);

}  // namespace homog
