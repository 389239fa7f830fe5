#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "homog/simd/kernels.hpp"

namespace homog {

// ---------------------------------------------------------------------------
// Function classes
// ---------------------------------------------------------------------------

struct Constant {
  double value = 0.0;
};

/// Coefficients in ascending degree.
struct Polynomial {
  std::vector<double> coefficients;
};

/// mean + sum_k cos[k-1] cos(2 pi k x / period) + sin[k-1] sin(2 pi k x / period).
struct TrigSeries {
  double mean = 0.0;
  std::vector<double> cosines;
  std::vector<double> sines;
  double period = 1.0;
};

/// values[j] on [breakpoints[j], breakpoints[j+1]).
struct PiecewiseConstant {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

/// Polynomial plus a zero-mean trigonometric series. Produced by
/// antidifferentiating trigonometric series; not part of the config schema.
struct PolyTrig {
  std::vector<double> polynomial;
  std::vector<double> cosines;
  std::vector<double> sines;
  double period = 1.0;
};

/// Polynomial per piece, in the global variable x. Produced by
/// antidifferentiating piecewise functions.
struct PiecewisePolynomial {
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> pieces;
};

/// Immutable scalar function on [0,1] drawn from a small set of classes
/// that are closed under differentiation and antidifferentiation.
class FunctionSpec {
public:
  using Variant = std::variant<Constant, Polynomial, TrigSeries, PiecewiseConstant,
                               PolyTrig, PiecewisePolynomial>;

  FunctionSpec() : rep_(Constant{}) {}

  static FunctionSpec constant(double value);
  static FunctionSpec polynomial(std::vector<double> coefficients);
  static FunctionSpec trig(double mean, std::vector<double> cosines, std::vector<double> sines,
                           double period = 1.0);
  static FunctionSpec piecewise_constant(std::vector<double> breakpoints,
                                         std::vector<double> values);
  static FunctionSpec poly_trig(std::vector<double> polynomial, std::vector<double> cosines,
                                std::vector<double> sines, double period = 1.0);
  static FunctionSpec piecewise_polynomial(std::vector<double> breakpoints,
                                           std::vector<std::vector<double>> pieces);

  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }

  /// G with G(0) = 0 and G' = g away from breakpoints.
  FunctionSpec antiderivative() const;

  /// Closed-form derivative. Throws NumericalError for piecewise classes.
  FunctionSpec derivative() const;

  /// Exact integral over [lo, hi] through the antiderivative.
  double integral(double lo, double hi) const;

  /// Pointwise scaled copy, c * g.
  FunctionSpec scaled(double c) const;

  bool is_smooth() const;
  bool is_constant() const;

  /// Interior breakpoints in (0,1); empty for smooth classes.
  std::vector<double> interior_breakpoints() const;

  /// Kernel-ready representation for the smooth classes.
  std::optional<simd::TrigPoly> to_trig_poly() const;

  const Variant& variant() const { return rep_; }
  std::string describe() const;

private:
  explicit FunctionSpec(Variant rep) : rep_(std::move(rep)) {}
  Variant rep_;
};

/// A lower bound m <= min_{[0,1]} g. Exact for constant and piecewise-constant
/// classes; for smooth pieces the slack is below 1e-10 (dense sampling plus a
/// second-derivative interpolation bound).
double certified_minimum(const FunctionSpec& g);

/// An upper bound M >= max_{[0,1]} g, same accuracy as certified_minimum.
double certified_maximum(const FunctionSpec& g);

/// Upper bound on sup |g| over [0,1].
double certified_sup_abs(const FunctionSpec& g);

// ---------------------------------------------------------------------------
// Periodic coefficient
// ---------------------------------------------------------------------------

enum class CoefficientConvention {
  Profile,     // the spec describes a itself
  Reciprocal,  // the spec describes 1/a
};

/// One period of a strictly positive 1-periodic coefficient, extended to the
/// real line by a(z) = a(z mod 1), negative z included.
class PeriodicCoefficient {
public:
  /// Throws PreconditionError if the certified minimum of a is not positive.
  static PeriodicCoefficient from_profile(FunctionSpec a);
  static PeriodicCoefficient from_reciprocal(FunctionSpec inverse);

  double value(double z) const;
  double reciprocal(double z) const;
  /// a'(z). Throws NumericalError for piecewise profiles.
  double derivative(double z) const;

  double lower_bound() const { return lower_bound_; }
  CoefficientConvention convention() const { return convention_; }
  const FunctionSpec& spec() const { return spec_; }

  bool is_constant() const { return spec_.is_constant(); }
  bool is_smooth() const { return spec_.is_smooth(); }
  /// Continuity is assumed by the theory; piecewise profiles fall outside it.
  bool within_theory_hypotheses() const { return spec_.is_smooth(); }

  /// Breakpoints of one period, in (0,1).
  std::vector<double> cell_breakpoints() const { return spec_.interior_breakpoints(); }

  std::string describe() const;

private:
  PeriodicCoefficient(FunctionSpec spec, CoefficientConvention convention, double lower_bound);

  FunctionSpec spec_;
  CoefficientConvention convention_;
  double lower_bound_;
  std::optional<FunctionSpec> spec_derivative_;
};

/// Fractional part in [0,1), also for negative arguments.
double wrap_unit(double z);

/// a((x/eps) mod 1).
double eval_periodic_scaled(const PeriodicCoefficient& a, double x, double eps);

}  // namespace homog
