// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// is only entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "homog/simd/kernels.hpp"

namespace homog::simd {

namespace {

// fdlibm split of pi/2 and the minimax polynomials on [-pi/4, pi/4].
constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kPio2_1 = 1.57079632673412561417e+00;
constexpr double kPio2_2 = 6.07710050630396597660e-11;
constexpr double kPio2_3 = 2.02226624871116645580e-21;

constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;

constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

// Accurate to a few ulp for |x| up to ~1e6, which covers k * omega * z for
// z in [0,1] and the harmonic counts used here.
inline void sincos4(__m256d x, __m256d& s, __m256d& c) {
  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, set1(kTwoOverPi)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, set1(kPio2_1), x);
  r = _mm256_fnmadd_pd(n, set1(kPio2_2), r);
  r = _mm256_fnmadd_pd(n, set1(kPio2_3), r);
  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_fmadd_pd(z, set1(kS6), set1(kS5));
  ps = _mm256_fmadd_pd(z, ps, set1(kS4));
  ps = _mm256_fmadd_pd(z, ps, set1(kS3));
  ps = _mm256_fmadd_pd(z, ps, set1(kS2));
  ps = _mm256_fmadd_pd(z, ps, set1(kS1));
  const __m256d sr = _mm256_fmadd_pd(_mm256_mul_pd(z, r), ps, r);

  __m256d pc = _mm256_fmadd_pd(z, set1(kC6), set1(kC5));
  pc = _mm256_fmadd_pd(z, pc, set1(kC4));
  pc = _mm256_fmadd_pd(z, pc, set1(kC3));
  pc = _mm256_fmadd_pd(z, pc, set1(kC2));
  pc = _mm256_fmadd_pd(z, pc, set1(kC1));
  const __m256d cr =
      _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc, _mm256_fnmadd_pd(set1(0.5), z, set1(1.0)));

  const __m256i q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d sflip = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(q, two), 62));
  const __m256d cflip =
      _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), 62));

  s = _mm256_xor_pd(_mm256_blendv_pd(sr, cr, swap), sflip);
  c = _mm256_xor_pd(_mm256_blendv_pd(cr, sr, swap), cflip);
}

inline void trig_poly4(const TrigPolyView& g, __m256d x, __m256d& v, __m256d& d) {
  if (g.wrap_unit) {
    x = _mm256_sub_pd(x, _mm256_floor_pd(x));
    x = _mm256_andnot_pd(_mm256_cmp_pd(x, set1(1.0), _CMP_GE_OQ), x);
  }
  v = _mm256_setzero_pd();
  d = _mm256_setzero_pd();
  for (std::size_t j = g.poly_len; j-- > 0;) {
    d = _mm256_fmadd_pd(d, x, v);
    v = _mm256_fmadd_pd(v, x, set1(g.poly[j]));
  }
  if (g.harmonics == 0) return;
  __m256d s1, c1;
  sincos4(_mm256_mul_pd(x, set1(g.omega)), s1, c1);
  __m256d sk = s1, ck = c1;
  for (std::size_t k = 0; k < g.harmonics; ++k) {
    if (k > 0) {
      // Angle addition: (k+1) theta from k theta and theta.
      const __m256d sn = _mm256_fmadd_pd(sk, c1, _mm256_mul_pd(ck, s1));
      const __m256d cn = _mm256_fmsub_pd(ck, c1, _mm256_mul_pd(sk, s1));
      sk = sn;
      ck = cn;
    }
    const __m256d cc = set1(g.cosines[k]);
    const __m256d ss = set1(g.sines[k]);
    const __m256d w = set1(static_cast<double>(k + 1) * g.omega);
    v = _mm256_fmadd_pd(cc, ck, _mm256_fmadd_pd(ss, sk, v));
    d = _mm256_fmadd_pd(w, _mm256_fmsub_pd(ss, ck, _mm256_mul_pd(cc, sk)), d);
  }
}

// Remainder lanes go through the same vector code on a padded copy, so the
// result for an element does not depend on its position in the batch.
void trig_poly_eval_avx2(const TrigPolyView& g, const double* z, double* value, double* deriv,
                         std::size_t n) {
  std::size_t i = 0;
  __m256d v, d;
  for (; i + 4 <= n; i += 4) {
    trig_poly4(g, _mm256_loadu_pd(z + i), v, d);
    _mm256_storeu_pd(value + i, v);
    if (deriv) _mm256_storeu_pd(deriv + i, d);
  }
  if (i == n) return;
  alignas(32) double zin[4] = {0.0, 0.0, 0.0, 0.0};
  alignas(32) double vout[4], dout[4];
  std::copy(z + i, z + n, zin);
  trig_poly4(g, _mm256_load_pd(zin), v, d);
  _mm256_store_pd(vout, v);
  _mm256_store_pd(dout, d);
  std::copy(vout, vout + (n - i), value + i);
  if (deriv) std::copy(dout, dout + (n - i), deriv + i);
}

inline __m256d euler4(__m256d x, __m256d drift, __m256d diffusivity, __m256d noise, double dt) {
  const __m256d sigma = _mm256_sqrt_pd(_mm256_mul_pd(set1(2.0 * dt), diffusivity));
  const __m256d r = _mm256_fmadd_pd(drift, set1(dt), x);
  return _mm256_fmadd_pd(sigma, noise, r);
}

void euler_propose_avx2(const double* x, const double* drift, const double* diffusivity,
                        const double* noise, double dt, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, euler4(_mm256_loadu_pd(x + i), _mm256_loadu_pd(drift + i),
                                     _mm256_loadu_pd(diffusivity + i), _mm256_loadu_pd(noise + i), dt));
  if (i == n) return;
  alignas(32) double buf[4][4] = {};
  const std::size_t m = n - i;
  std::copy(x + i, x + n, buf[0]);
  std::copy(drift + i, drift + n, buf[1]);
  std::copy(diffusivity + i, diffusivity + n, buf[2]);
  std::copy(noise + i, noise + n, buf[3]);
  alignas(32) double r[4];
  _mm256_store_pd(r, euler4(_mm256_load_pd(buf[0]), _mm256_load_pd(buf[1]), _mm256_load_pd(buf[2]),
                            _mm256_load_pd(buf[3]), dt));
  std::copy(r, r + m, out + i);
}

void sine_synthesis_avx2(const double* table, const double* coeffs, std::size_t n, double* out) {
  const auto period = static_cast<std::int64_t>(2 * n);
  const __m256i vperiod = _mm256_set1_epi64x(period);
  const __m256i vlast = _mm256_set1_epi64x(period - 1);
  out[0] = 0.0;
  out[n] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const auto ii = static_cast<std::int64_t>(i);
    __m256i idx = _mm256_set_epi64x((4 * ii) % period, (3 * ii) % period, (2 * ii) % period,
                                    ii % period);
    const __m256i step = _mm256_set1_epi64x((4 * ii) % period);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 1;
    for (; k + 4 <= n; k += 4) {
      const __m256d t = _mm256_i64gather_pd(table, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(coeffs + k), t, acc);
      idx = _mm256_add_epi64(idx, step);
      idx = _mm256_sub_epi64(idx, _mm256_and_si256(_mm256_cmpgt_epi64(idx, vlast), vperiod));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    auto j = static_cast<std::int64_t>((static_cast<std::int64_t>(k) * ii) % period);
    for (; k < n; ++k) {
      sum += coeffs[k] * table[j];
      j += ii;
      if (j >= period) j -= period;
    }
    out[i] = sum;
  }
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  const __m256d sign = set1(-0.0);
  __m256d m = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace

const KernelSet& avx2_kernel_set() {
  static const KernelSet set{"avx2", trig_poly_eval_avx2, euler_propose_avx2,
                             sine_synthesis_avx2, max_abs_diff_avx2};
  return set;
}

}  // namespace homog::simd
