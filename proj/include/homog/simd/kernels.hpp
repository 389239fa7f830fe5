#pragma once

// Data-parallel inner loops used by the Monte Carlo path engine, the
// spectral heat propagator and the error metrics. Every kernel has a scalar
// reference; wider variants are selected once at runtime from the CPU
// features and must agree with the reference to rounding.

#include <cstddef>
#include <vector>

namespace homog::simd {

/// g(z) = sum_j poly[j] z^j
///      + sum_k cos[k-1] cos(k omega z) + sin[k-1] sin(k omega z).
struct TrigPoly {
  std::vector<double> poly;
  double omega = 0.0;
  std::vector<double> cosines;
  std::vector<double> sines;
};

/// Non-owning view handed to the kernels.
struct TrigPolyView {
  const double* poly = nullptr;
  std::size_t poly_len = 0;
  double omega = 0.0;
  const double* cosines = nullptr;
  const double* sines = nullptr;
  std::size_t harmonics = 0;
  /// Replace z by z - floor(z) before evaluating (periodic extension).
  bool wrap_unit = false;

  static TrigPolyView of(const TrigPoly& g, bool wrap) {
    return {g.poly.data(), g.poly.size(), g.omega, g.cosines.data(), g.sines.data(),
            g.cosines.size(), wrap};
  }
};

/// value[i] = g(z[i]); deriv[i] = g'(z[i]) if deriv != nullptr.
using TrigPolyEvalFn = void (*)(const TrigPolyView& g, const double* z, double* value,
                                double* deriv, std::size_t n);

/// out[i] = x[i] + drift[i] dt + sqrt(2 diffusivity[i] dt) noise[i].
using EulerProposeFn = void (*)(const double* x, const double* drift, const double* diffusivity,
                                const double* noise, double dt, double* out, std::size_t n);

/// out[i] = sum_{k=1}^{n-1} coeffs[k] sin(pi k i / n) for i = 0..n, using
/// sine_table[j] = sin(pi j / n), j = 0..2n-1. coeffs has n entries (index 0 unused).
using SineSynthesisFn = void (*)(const double* sine_table, const double* coeffs, std::size_t n,
                                 double* out);

/// max_i |a[i] - b[i]|, 0 for n == 0.
using MaxAbsDiffFn = double (*)(const double* a, const double* b, std::size_t n);

struct KernelSet {
  const char* name;
  TrigPolyEvalFn trig_poly_eval;
  EulerProposeFn euler_propose;
  SineSynthesisFn sine_synthesis;
  MaxAbsDiffFn max_abs_diff;
};

const KernelSet& scalar_kernels();

/// nullptr when the AVX2 variants were not compiled in or the CPU lacks AVX2/FMA.
const KernelSet* avx2_kernels();

/// Widest supported set, unless HOMOG1D_SIMD=scalar is set in the environment.
const KernelSet& active_kernels();

/// sin(pi j / n) for j = 0..2n-1.
std::vector<double> make_sine_table(std::size_t n);

}  // namespace homog::simd
