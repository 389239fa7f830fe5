#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "homog/homsolver.hpp"

namespace homog {

enum class ErrorKind { Raw, Averaged, Corrected };

/// Which pointwise error a sup-norm measures:
///   raw        |u_eps - u|
///   averaged   |A_eps u_eps - u|
///   corrected  |A_eps u_eps + sign * l_eps - u|
struct ErrorVariant {
  ErrorKind kind = ErrorKind::Raw;
  int sign = 0;  // +1 or -1 for Corrected, 0 otherwise

  static ErrorVariant raw() { return {ErrorKind::Raw, 0}; }
  static ErrorVariant averaged() { return {ErrorKind::Averaged, 0}; }
  static ErrorVariant corrected(int sign);

  /// "raw", "averaged", "corrected+" or "corrected-".
  std::string name() const;
  static ErrorVariant parse(const std::string& name);

  friend bool operator==(const ErrorVariant&, const ErrorVariant&) = default;
};

/// (1/eps) int_{x-eps/2}^{x+eps/2} u(y) dy. The window is split at multiples
/// of eps (and at the given fractions of each cell). Throws PreconditionError
/// unless eps/2 <= x <= 1 - eps/2.
double moving_average(const std::function<double(double)>& u, double x, double eps,
                      std::span<const double> cell_fractions = {});

/// The affine corrector l_eps(x) = eps (int f) M1 x + eps (int int f) M2.
/// Moments are computed once per coefficient; l_eps is linear in eps.
class Corrector {
public:
  Corrector(const PeriodicCoefficient& a, const FunctionSpec& f);

  double operator()(double eps, double x) const { return slope(eps) * x + intercept(eps); }
  double slope(double eps) const { return eps * int_f_ * m1_; }
  double intercept(double eps) const { return eps * int_int_f_ * m2_; }

  /// Both affine coefficients vanish (to 1e-12), so l_eps = 0 for every eps.
  bool vanishes() const;

  double m1() const { return m1_; }
  double m2() const { return m2_; }
  double integral_f() const { return int_f_; }
  double double_integral_f() const { return int_int_f_; }

private:
  double m1_, m2_, int_f_, int_int_f_;
};

double corrector(const PeriodicCoefficient& a, const FunctionSpec& f, double eps, double x);
bool corrector_vanishes(const PeriodicCoefficient& a, const FunctionSpec& f);

/// u_eps, u, A_eps u_eps and l_eps sampled on the grid points of i/N that lie
/// in [eps, 1 - eps].
struct ErrorProfile {
  std::vector<double> x;
  std::vector<double> exact;
  std::vector<double> homogenized;
  std::vector<double> averaged;
  std::vector<double> corrector;

  /// Pointwise values of the variant's quantity compared against `homogenized`.
  std::vector<double> variant_values(const ErrorVariant& v) const;
  double sup_error(const ErrorVariant& v) const;
};

/// Grid points i/N inside [eps, 1 - eps]; N must satisfy N >= 8/eps.
ErrorProfile error_profile(const ProblemInstance& p, std::size_t intervals);

/// max over grid points in [eps, 1 - eps] of the variant's pointwise error.
double sup_error(const ProblemInstance& p, const ErrorVariant& variant, std::size_t intervals);

}  // namespace homog
