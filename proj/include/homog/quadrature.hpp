#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace homog {

/// Default Gauss-Legendre nodes per cell. The integrands met here are
/// analytic on each cell, so 16 nodes reach machine precision.
inline constexpr int kDefaultGaussOrder = 16;

/// Gauss-Legendre rule on the reference interval [-1, 1].
struct GaussRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Newton iteration on the Legendre polynomial P_order (tolerance 1e-15).
  static GaussRule legendre(int order);

  /// Process-wide cached rule; safe to call concurrently.
  static const GaussRule& cached(int order);

  /// Integral of g over [lo, hi] with a single application of the rule.
  template <class F>
  double apply(const F& g, double lo, double hi) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * g(mid + half * nodes[i]);
    return half * acc;
  }
};

/// Composite rule on `cells` equal sub-intervals of [lo, hi].
template <class F>
double integrate(const F& g, double lo, double hi, int cells, const GaussRule& rule) {
  const double h = (hi - lo) / cells;
  double acc = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double a = lo + h * c;
    const double b = c + 1 == cells ? hi : lo + h * (c + 1);
    acc += rule.apply(g, a, b);
  }
  return acc;
}

/// Sorted breakpoints of [lo, hi]: the endpoints, every (k + f) * eps inside
/// (lo, hi) for integer k and f in {0} U cell_fractions, and any extra points
/// inside (lo, hi). Points closer than 1e-12 * eps are merged.
std::vector<double> eps_partition(double lo, double hi, double eps,
                                  std::span<const double> cell_fractions = {},
                                  std::span<const double> extra_points = {});

/// Sum of the rule over consecutive pieces of a partition.
template <class F>
double integrate_partition(const F& g, std::span<const double> partition, const GaussRule& rule) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < partition.size(); ++j)
    acc += rule.apply(g, partition[j], partition[j + 1]);
  return acc;
}

/// Composite Gauss rule with breakpoints at every multiple of eps, so that
/// integrands built from a(x/eps) are smooth on each piece.
template <class F>
double integrate_eps_aligned(const F& g, double eps, double lo, double hi,
                             int order = kDefaultGaussOrder,
                             std::span<const double> cell_fractions = {},
                             std::span<const double> extra_points = {}) {
  const auto part = eps_partition(lo, hi, eps, cell_fractions, extra_points);
  return integrate_partition(g, part, GaussRule::cached(order));
}

/// x -> integral of g from nodes.front() to x, for x in [nodes.front(), nodes.back()].
/// Cumulative integrals are tabulated at the nodes; a query adds a Gauss tail
/// over the partial piece. The node set must contain every point where g is
/// not smooth.
class PrefixIntegral {
public:
  PrefixIntegral() = default;
  PrefixIntegral(std::function<double(double)> g, std::vector<double> nodes,
                 int order = kDefaultGaussOrder);

  double operator()(double x) const;
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }

private:
  std::function<double(double)> g_;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;
  const GaussRule* rule_ = nullptr;
};

}  // namespace homog
