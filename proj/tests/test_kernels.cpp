#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "homog/simd/kernels.hpp"
#include "instances.hpp"

using namespace homog::simd;
using homog::testing::kPi;

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double rel_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
  return worst;
}

}  // namespace

TEST_CASE("scalar trig polynomial against direct evaluation") {
  const TrigPoly g{{0.5, -1.0}, 2 * kPi, {0.3, 0.1}, {1.0, -0.2}};
  const auto z = uniform(37, -1.5, 2.5, 1);
  std::vector<double> v(z.size()), d(z.size());
  scalar_kernels().trig_poly_eval(TrigPolyView::of(g, false), z.data(), v.data(), d.data(), z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double w = 2 * kPi;
    const double x = z[i];
    const double val = 0.5 - x + 0.3 * std::cos(w * x) + 0.1 * std::cos(2 * w * x) +
                       std::sin(w * x) - 0.2 * std::sin(2 * w * x);
    const double der = -1.0 - 0.3 * w * std::sin(w * x) - 0.2 * w * std::sin(2 * w * x) +
                       w * std::cos(w * x) - 0.4 * w * std::cos(2 * w * x);
    CHECK(std::abs(v[i] - val) <= 1e-13);
    CHECK(std::abs(d[i] - der) <= 1e-12);
  }
}

TEST_CASE("wrapped evaluation is periodic") {
  const TrigPoly g{{0.0, 0.0, 1.0}, 0.0, {}, {}};
  const double z[] = {0.25, 1.25, -0.75};
  double v[3];
  scalar_kernels().trig_poly_eval(TrigPolyView::of(g, true), z, v, nullptr, 3);
  CHECK(v[0] == 0.0625);
  CHECK(v[1] == 0.0625);
  CHECK(v[2] == 0.0625);
}

TEST_CASE("scalar sine synthesis") {
  const std::size_t n = 16;
  const auto table = make_sine_table(n);
  CHECK(table[0] == 0.0);
  CHECK(std::abs(table[n / 2] - 1.0) <= 1e-15);
  std::vector<double> c(n, 0.0), out(n + 1);
  c[3] = 2.0;
  scalar_kernels().sine_synthesis(table.data(), c.data(), n, out.data());
  for (std::size_t i = 0; i <= n; ++i)
    CHECK(std::abs(out[i] - 2.0 * std::sin(3 * kPi * static_cast<double>(i) / n)) <= 1e-14);
}

TEST_CASE("max_abs_diff examples") {
  const double a[] = {1.0, -2.0, 3.0, 0.5, 0.0};
  const double b[] = {1.5, -2.0, 0.0, 0.5, -4.0};
  CHECK(scalar_kernels().max_abs_diff(a, b, 5) == 4.0);
  CHECK(scalar_kernels().max_abs_diff(a, b, 0) == 0.0);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const KernelSet* wide = avx2_kernels();
  if (wide == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine");
    return;
  }
  const KernelSet& ref = scalar_kernels();
  // Odd lengths exercise the remainder lanes.
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    const TrigPoly g{{2.0, 0.1, -0.05}, 2 * kPi, {0.7, 0.2, -0.1}, {1.0, 0.0, 0.3}};
    const auto z = uniform(n, -3.0, 3.0, n);
    for (bool wrap : {false, true}) {
      std::vector<double> v0(n), d0(n), v1(n), d1(n);
      ref.trig_poly_eval(TrigPolyView::of(g, wrap), z.data(), v0.data(), d0.data(), n);
      wide->trig_poly_eval(TrigPolyView::of(g, wrap), z.data(), v1.data(), d1.data(), n);
      CHECK(rel_gap(v0, v1) <= 1e-13);
      CHECK(rel_gap(d0, d1) <= 1e-12);
    }

    const auto x = uniform(n, 0.0, 1.0, n + 1);
    const auto drift = uniform(n, -50.0, 50.0, n + 2);
    const auto diff = uniform(n, 0.3, 1.0, n + 3);
    const auto noise = uniform(n, -4.0, 4.0, n + 4);
    std::vector<double> o0(n), o1(n);
    ref.euler_propose(x.data(), drift.data(), diff.data(), noise.data(), 1e-5, o0.data(), n);
    wide->euler_propose(x.data(), drift.data(), diff.data(), noise.data(), 1e-5, o1.data(), n);
    CHECK(rel_gap(o0, o1) <= 1e-15);

    CHECK(wide->max_abs_diff(x.data(), noise.data(), n) == ref.max_abs_diff(x.data(), noise.data(), n));
  }
  for (std::size_t n : {8u, 13u, 256u}) {
    const auto table = make_sine_table(n);
    auto c = uniform(n, -1.0, 1.0, 7 * n);
    std::vector<double> o0(n + 1), o1(n + 1);
    ref.sine_synthesis(table.data(), c.data(), n, o0.data());
    wide->sine_synthesis(table.data(), c.data(), n, o1.data());
    CHECK(rel_gap(o0, o1) <= 1e-13);
  }
}

TEST_CASE("active kernels are one of the known sets") {
  const KernelSet& k = active_kernels();
  const bool known = &k == &scalar_kernels() || &k == avx2_kernels();
  CHECK(known);
}

TEST_CASE("AVX2 results do not depend on batch position") {
  const KernelSet* wide = avx2_kernels();
  if (wide == nullptr) return;
  const TrigPoly g{{2.0}, 2 * kPi, {0.0}, {1.0}};
  const auto z = uniform(11, 0.0, 1.0, 3);
  std::vector<double> all(11), alld(11);
  wide->trig_poly_eval(TrigPolyView::of(g, true), z.data(), all.data(), alld.data(), z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    double v, d;
    wide->trig_poly_eval(TrigPolyView::of(g, true), &z[i], &v, &d, 1);
    CHECK(v == all[i]);
    CHECK(d == alld[i]);
  }
}
