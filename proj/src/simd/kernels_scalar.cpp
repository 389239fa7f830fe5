#include <algorithm>
#include <cmath>
#include <numbers>

#include "homog/simd/kernels.hpp"

namespace homog::simd {

namespace {

void trig_poly_eval_scalar(const TrigPolyView& g, const double* z, double* value, double* deriv,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double x = z[i];
    if (g.wrap_unit) {
      x -= std::floor(x);
      if (x >= 1.0) x = 0.0;
    }
    double v = 0.0, d = 0.0;
    for (std::size_t j = g.poly_len; j-- > 0;) {
      d = d * x + v;
      v = v * x + g.poly[j];
    }
    for (std::size_t k = 0; k < g.harmonics; ++k) {
      const double w = static_cast<double>(k + 1) * g.omega;
      const double c = std::cos(w * x), s = std::sin(w * x);
      v += g.cosines[k] * c + g.sines[k] * s;
      d += w * (g.sines[k] * c - g.cosines[k] * s);
    }
    value[i] = v;
    if (deriv) deriv[i] = d;
  }
}

void euler_propose_scalar(const double* x, const double* drift, const double* diffusivity,
                          const double* noise, double dt, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i] + drift[i] * dt + std::sqrt(2.0 * diffusivity[i] * dt) * noise[i];
}

void sine_synthesis_scalar(const double* table, const double* coeffs, std::size_t n, double* out) {
  const std::size_t period = 2 * n;
  out[0] = 0.0;
  out[n] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t k = 1; k < n; ++k) {
      idx += i;
      if (idx >= period) idx -= period;
      acc += coeffs[k] * table[idx];
    }
    out[i] = acc;
  }
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar", trig_poly_eval_scalar, euler_propose_scalar,
                             sine_synthesis_scalar, max_abs_diff_scalar};
  return set;
}

std::vector<double> make_sine_table(std::size_t n) {
  std::vector<double> t(2 * n);
  for (std::size_t j = 0; j < 2 * n; ++j) {
    // Exact zeros at j = 0 and j = n.
    if (j % n == 0) {
      t[j] = 0.0;
      continue;
    }
    t[j] = std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }
  return t;
}

}  // namespace homog::simd
