#include "homog/homsolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "homog/error.hpp"

namespace homog {

namespace {

// Sub-cells per period for integrals over one period of the coefficient.
constexpr double kPeriodPieces = 64.0;

std::vector<double> problem_partition(const ProblemInstance& p, double lo, double hi) {
  const auto fractions = p.a.cell_breakpoints();
  const auto extra = p.f.interior_breakpoints();
  return eps_partition(lo, hi, p.eps, fractions, extra);
}

}  // namespace

bool is_integral_inverse(double eps) {
  if (!(eps > 0.0)) return false;
  const double inv = 1.0 / eps;
  return inv >= 1.0 - 1e-9 && std::abs(inv - std::round(inv)) <= 1e-9 * std::max(1.0, inv);
}

ProblemInstance ProblemInstance::make(PeriodicCoefficient a, FunctionSpec f, double eps,
                                      bool relaxed) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("eps must be positive");
  if (!relaxed && !is_integral_inverse(eps)) {
    std::ostringstream os;
    os << "1/eps must be a positive integer (got eps = " << eps
       << "); enable relaxed mode to run outside the rate hypotheses";
    throw PreconditionError(os.str());
  }
  if (relaxed && !(eps < 1.0) && !is_integral_inverse(eps))
    throw PreconditionError("relaxed mode requires eps in (0,1)");
  return ProblemInstance{std::move(a), std::move(f), eps, relaxed};
}

bool ProblemInstance::integral_cells() const { return is_integral_inverse(eps); }

bool ProblemInstance::within_rate_hypotheses() const {
  return integral_cells() && a.within_theory_hypotheses();
}

std::string ProblemInstance::hypothesis_tags() const {
  std::string tags;
  if (!integral_cells()) tags += "outside rate hypotheses (1/eps not integral);";
  if (!a.within_theory_hypotheses()) tags += "outside smoothness hypotheses (discontinuous coefficient);";
  return tags;
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::ExactFormula: return "exact-formula";
    case Provenance::Homogenized: return "homogenized";
    case Provenance::FiniteDifference: return "finite-difference";
    case Provenance::MovingAverage: return "moving-average";
  }
  return "unknown";
}

std::vector<double> uniform_grid(std::size_t intervals) {
  if (intervals == 0) throw PreconditionError("grid needs at least one interval");
  std::vector<double> g(intervals + 1);
  const double n = static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) g[i] = static_cast<double>(i) / n;
  return g;
}

std::size_t default_grid_size(double eps) {
  return std::max<std::size_t>(1000, static_cast<std::size_t>(std::ceil(8.0 / eps - 1e-9)));
}

// ---------------------------------------------------------------------------

double period_integral(const PeriodicCoefficient& a, const std::function<double(double)>& g) {
  const auto bps = a.cell_breakpoints();
  const auto part = eps_partition(0.0, 1.0, 1.0 / kPeriodPieces, {}, bps);
  return integrate_partition(g, part, GaussRule::cached(kDefaultGaussOrder));
}

double harmonic_mean(const PeriodicCoefficient& a) {
  // Exact (no quadrature rounding) for constant coefficients.
  if (a.is_constant()) return a.value(0.0);
  return 1.0 / period_integral(a, [&](double z) { return a.reciprocal(z); });
}

double arithmetic_mean(const PeriodicCoefficient& a) {
  return period_integral(a, [&](double z) { return a.value(z); });
}

double moment_m1(const PeriodicCoefficient& a) {
  return period_integral(a, [&](double y) { return a.reciprocal(y) * (y - 0.5); });
}

double moment_m2(const PeriodicCoefficient& a) {
  std::vector<double> extra;
  for (double b : a.cell_breakpoints()) {
    extra.push_back(b);
    extra.push_back(b - 1.0);
  }
  const auto part = eps_partition(-0.5, 0.5, 1.0 / kPeriodPieces, {}, extra);
  return integrate_partition(
      [&](double z) {
        const double w = z < 0.0 ? -(0.5 + z) : 0.5 - z;
        return w * a.reciprocal(z);
      },
      part, GaussRule::cached(kDefaultGaussOrder));
}

double c_eps(const ProblemInstance& p) {
  const auto part = problem_partition(p, 0.0, 1.0);
  const auto& rule = GaussRule::cached(kDefaultGaussOrder);
  const auto big_f = p.f.antiderivative();
  const double inv_eps = 1.0 / p.eps;
  const double num = integrate_partition(
      [&](double x) { return p.a.reciprocal(x * inv_eps) * big_f(x); }, part, rule);
  const double den =
      integrate_partition([&](double x) { return p.a.reciprocal(x * inv_eps); }, part, rule);
  return num / den;
}

CepsExpansion c_eps_asymptotic(const PeriodicCoefficient& a, const FunctionSpec& f) {
  const auto big_f = f.antiderivative();
  CepsExpansion e;
  e.c0 = big_f.integral(0.0, 1.0);
  e.c1 = harmonic_mean(a) * moment_m1(a) * f.integral(0.0, 1.0);
  return e;
}

// ---------------------------------------------------------------------------

ExactSolution::ExactSolution(const ProblemInstance& p, int order)
    : p_(p), antiderivative_f_(p.f.antiderivative()), c_(c_eps(p)) {
  const double inv_eps = 1.0 / p_.eps;
  // Captures by value so that copies of the solution stay self-contained.
  prefix_ = PrefixIntegral(
      [a = p_.a, big_f = antiderivative_f_, c = c_, inv_eps](double y) {
        return a.reciprocal(y * inv_eps) * (c - big_f(y));
      },
      problem_partition(p_, 0.0, 1.0), order);
}

double ExactSolution::derivative(double x) const {
  return p_.a.reciprocal(x / p_.eps) * (c_ - antiderivative_f_(x));
}

SolutionField ExactSolution::sample(std::size_t intervals) const {
  SolutionField s{uniform_grid(intervals), {}, Provenance::ExactFormula};
  s.values.resize(s.grid.size());
  for (std::size_t i = 0; i < s.grid.size(); ++i) s.values[i] = (*this)(s.grid[i]);
  s.values.front() = 0.0;
  return s;
}

HomogenizedSolution::HomogenizedSolution(double abar, const FunctionSpec& f)
    : abar_(abar), first_(f.antiderivative()), second_(first_.antiderivative()), c_(second_(1.0)) {
  if (!(abar > 0.0)) throw PreconditionError("effective coefficient must be positive");
}

double HomogenizedSolution::operator()(double x) const { return (c_ * x - second_(x)) / abar_; }

double HomogenizedSolution::derivative(double x) const { return (c_ - first_(x)) / abar_; }

SolutionField HomogenizedSolution::sample(std::size_t intervals) const {
  SolutionField s{uniform_grid(intervals), {}, Provenance::Homogenized};
  s.values.resize(s.grid.size());
  for (std::size_t i = 0; i < s.grid.size(); ++i) s.values[i] = (*this)(s.grid[i]);
  s.values.front() = 0.0;
  s.values.back() = 0.0;
  return s;
}

double u_eps(const ProblemInstance& p, double x) {
  if (x < 0.0 || x > 1.0) throw PreconditionError("u_eps is defined on [0,1]");
  return ExactSolution(p)(x);
}

double u_hom(const PeriodicCoefficient& a, const FunctionSpec& f, double x) {
  if (x < 0.0 || x > 1.0) throw PreconditionError("u_hom is defined on [0,1]");
  return HomogenizedSolution(a, f)(x);
}

// ---------------------------------------------------------------------------

std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw PreconditionError("tridiagonal system bands must have equal length");
  if (n == 0) return {};
  std::vector<double> c(n), d(n), x(n);
  double pivot = diag[0];
  if (pivot == 0.0) throw NumericalError("singular tridiagonal system (zero pivot at row 0)");
  c[0] = upper[0] / pivot;
  d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      std::ostringstream os;
      os << "singular tridiagonal system (zero pivot at row " << i << ")";
      throw NumericalError(os.str());
    }
    c[i] = upper[i] / pivot;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

SolutionField fd_oracle(const ProblemInstance& p, std::size_t intervals) {
  if (intervals < 2) throw PreconditionError("finite-difference oracle needs N >= 2");
  SolutionField s{uniform_grid(intervals), std::vector<double>(intervals + 1, 0.0),
                  Provenance::FiniteDifference};
  const double h = 1.0 / static_cast<double>(intervals);
  const double inv_eps = 1.0 / p.eps;
  const auto fractions = p.a.cell_breakpoints();
  const auto& rule = GaussRule::cached(kDefaultGaussOrder);

  // Harmonic mean of a(x/eps) over each face interval [x_j, x_{j+1}].
  std::vector<double> face(intervals);
  for (std::size_t j = 0; j < intervals; ++j) {
    const auto part = eps_partition(s.grid[j], s.grid[j + 1], p.eps, fractions);
    const double resistance =
        integrate_partition([&](double x) { return p.a.reciprocal(x * inv_eps); }, part, rule);
    face[j] = h / resistance;
  }

  const std::size_t m = intervals - 1;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    lower[k] = -face[i - 1];
    upper[k] = -face[i];
    diag[k] = face[i - 1] + face[i];
    rhs[k] = h * h * p.f(s.grid[i]);
  }
  const auto u = solve_tridiagonal(lower, diag, upper, rhs);
  std::copy(u.begin(), u.end(), s.values.begin() + 1);
  return s;
}

}  // namespace homog
