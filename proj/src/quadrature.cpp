#include "homog/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "homog/error.hpp"

namespace homog {

GaussRule GaussRule::legendre(int order) {
  if (order < 1) throw PreconditionError("Gauss rule order must be positive");
  GaussRule rule;
  rule.order = order;
  rule.nodes.assign(static_cast<std::size_t>(order), 0.0);
  rule.weights.assign(static_cast<std::size_t>(order), 0.0);
  const int half = (order + 1) / 2;
  const double n = order;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= order; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    rule.nodes[lo] = -z;
    rule.nodes[hi] = z;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (order % 2 == 1) rule.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
  return rule;
}

const GaussRule& GaussRule::cached(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(legendre(order));
  return *slot;
}

std::vector<double> eps_partition(double lo, double hi, double eps,
                                  std::span<const double> cell_fractions,
                                  std::span<const double> extra_points) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (!(lo <= hi)) throw PreconditionError("integration bounds must satisfy lo <= hi");
  const double tol = 1e-12 * eps;
  std::vector<double> pts{lo, hi};
  std::vector<double> fracs{0.0};
  fracs.insert(fracs.end(), cell_fractions.begin(), cell_fractions.end());
  const auto k0 = static_cast<long long>(std::floor(lo / eps)) - 1;
  const auto k1 = static_cast<long long>(std::ceil(hi / eps)) + 1;
  for (long long k = k0; k <= k1; ++k)
    for (double f : fracs) {
      const double p = (static_cast<double>(k) + f) * eps;
      if (p > lo + tol && p < hi - tol) pts.push_back(p);
    }
  for (double p : extra_points)
    if (p > lo + tol && p < hi - tol) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts)
    if (out.empty() || p - out.back() > tol) out.push_back(p);
  // Keep the exact upper endpoint even if a nearby point was merged into it.
  if (out.size() >= 2) out.back() = hi;
  else out.push_back(hi);
  return out;
}

PrefixIntegral::PrefixIntegral(std::function<double(double)> g, std::vector<double> nodes,
                               int order)
    : g_(std::move(g)), nodes_(std::move(nodes)), rule_(&GaussRule::cached(order)) {
  if (nodes_.size() < 2) throw PreconditionError("prefix integral needs at least two nodes");
  cumulative_.resize(nodes_.size());
  cumulative_[0] = 0.0;
  for (std::size_t j = 1; j < nodes_.size(); ++j)
    cumulative_[j] = cumulative_[j - 1] + rule_->apply(g_, nodes_[j - 1], nodes_[j]);
}

double PrefixIntegral::operator()(double x) const {
  if (x <= nodes_.front()) return 0.0;
  if (x >= nodes_.back()) return cumulative_.back();
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const auto j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (x == nodes_[j]) return cumulative_[j];
  return cumulative_[j] + rule_->apply(g_, nodes_[j], x);
}

}  // namespace homog
