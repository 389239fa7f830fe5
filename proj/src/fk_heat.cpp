#include <algorithm>
#include <cmath>
#include <numbers>

#include "homog/error.hpp"
#include "homog/fk.hpp"

namespace homog {

SineSeries::SineSeries(std::span<const double> values, const simd::KernelSet* kernels)
    : n_(values.size() < 2 ? 0 : values.size() - 1),
      kernels_(kernels ? kernels : &simd::active_kernels()) {
  if (n_ < 2) throw PreconditionError("sine series needs at least two grid intervals");
  table_ = simd::make_sine_table(n_);
  // The transform is its own inverse up to the factor 2/N.
  std::vector<double> interior(values.begin(), values.end() - 1);
  interior[0] = 0.0;
  std::vector<double> out(n_ + 1);
  kernels_->sine_synthesis(table_.data(), interior.data(), n_, out.data());
  coeffs_.assign(n_, 0.0);
  const double scale = 2.0 / static_cast<double>(n_);
  for (std::size_t k = 1; k < n_; ++k) coeffs_[k] = scale * out[k];
}

double SineSeries::evaluate(double x, double abar, double t) const {
  const double pi = std::numbers::pi;
  const double rate = abar * pi * pi * t;
  double sum = 0.0;
  for (std::size_t k = 1; k < n_; ++k) {
    const double kd = static_cast<double>(k);
    const double damp = std::exp(-rate * kd * kd);
    if (damp == 0.0) break;
    sum += coeffs_[k] * damp * std::sin(kd * pi * x);
  }
  return sum;
}

std::vector<double> SineSeries::propagate(double abar, double t) const {
  const double pi = std::numbers::pi;
  const double rate = abar * pi * pi * t;
  std::vector<double> damped(n_, 0.0);
  for (std::size_t k = 1; k < n_; ++k) {
    const double kd = static_cast<double>(k);
    damped[k] = coeffs_[k] * std::exp(-rate * kd * kd);
  }
  std::vector<double> out(n_ + 1);
  kernels_->sine_synthesis(table_.data(), damped.data(), n_, out.data());
  return out;
}

std::vector<double> heat_propagate(std::span<const double> values, double abar, double t) {
  if (!(abar > 0.0)) throw PreconditionError("effective coefficient must be positive");
  if (!(t >= 0.0)) throw PreconditionError("propagation time must be non-negative");
  return SineSeries(values).propagate(abar, t);
}

SolutionField heat_propagate(const SolutionField& phi, double abar, double t) {
  if (phi.grid.size() != phi.values.size())
    throw PreconditionError("solution field grid and values differ in length");
  SolutionField out;
  out.grid = phi.grid;
  out.values = heat_propagate(phi.values, abar, t);
  out.provenance = phi.provenance;
  return out;
}

double contraction_constant(double abar, double t, std::size_t intervals) {
  std::vector<double> one(intervals + 1, 1.0);
  one.front() = 0.0;
  one.back() = 0.0;
  const auto w = heat_propagate(one, abar, t);
  return 1.0 - *std::max_element(w.begin(), w.end());
}

BootstrapResult bootstrap_bound(const SolutionField& phi, double delta, double t, double abar) {
  if (!(t > 0.0)) throw PreconditionError("bootstrap needs t > 0");
  if (!(delta >= 0.0)) throw PreconditionError("delta must be non-negative");
  if (phi.values.size() < 3) throw PreconditionError("bootstrap needs a grid field");
  const auto& v = phi.values;
  const std::size_t n = phi.intervals();

  BootstrapResult r;
  r.max_phi = *std::max_element(v.begin(), v.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(r.max_phi));

  const auto once = heat_propagate(v, abar, t);
  r.hypothesis_holds = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double excess = v[i] - (delta + once[i]);
    if (excess > tol && excess > r.violation) {
      r.hypothesis_holds = false;
      r.violation = excess;
      r.violation_x = phi.grid[i];
    }
  }

  r.iterations = static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / t - 1e-12)));
  const double kd = static_cast<double>(r.iterations);
  const auto iterated = heat_propagate(v, abar, kd * t);
  r.iteration_holds = true;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > kd * delta + iterated[i] + tol) r.iteration_holds = false;

  r.contraction = contraction_constant(abar, kd * t, n);
  r.implied_bound = kd * delta / r.contraction;
  r.verified = r.hypothesis_holds && r.max_phi <= r.implied_bound + tol;
  return r;
}

}  // namespace homog
