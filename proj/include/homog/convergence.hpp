#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homog/averaging.hpp"

namespace homog {

/// Errors at or below this are treated as exact zeros and excluded from fits.
inline constexpr double kExactErrorThreshold = 1e-13;

/// Acceptance windows for the fitted rates over a dyadic ladder.
inline constexpr double kRawRateMin = 0.85;
inline constexpr double kRawRateMax = 1.15;
inline constexpr double kCorrectedRateMin = 1.85;

struct RatePoint {
  double eps = 0.0;
  double error = 0.0;
};

/// log(error) ~ rate * log(eps) + intercept.
struct RateFit {
  double rate = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // max |log-residual|
  std::size_t points = 0;
};

/// Least-squares slope of log(error) against log(eps) over the points with
/// error > kExactErrorThreshold. Throws NumericalError if fewer than three remain.
RateFit fit_rate(std::span<const RatePoint> points);

enum class FitStatus { Fitted, Exact, Degenerate };
const char* to_string(FitStatus s);

struct VariantSeries {
  ErrorVariant variant;
  std::vector<RatePoint> points;  // ordered by decreasing eps
  FitStatus status = FitStatus::Fitted;
  RateFit fit;
};

struct ConvergenceReport {
  std::string instance;
  std::string tags;
  std::vector<VariantSeries> series;
  /// Sign chosen for the corrected variant, 0 if it was not requested.
  int corrector_sign = 0;
  /// Fitted rates for both signs during calibration (NaN when exact/degenerate).
  double calibration_rate_plus = 0.0;
  double calibration_rate_minus = 0.0;
  bool calibration_meets_threshold = false;

  const VariantSeries* find(ErrorKind kind) const;
};

/// {1/8, 1/16, ..., 1/256}.
std::vector<double> default_eps_ladder();

struct SweepOptions {
  /// Sampling grid per eps; 0 selects default_grid_size(eps).
  std::size_t intervals = 0;
  bool relaxed = false;
};

/// Sup errors for every (eps, variant) and the fitted rates. A Corrected
/// variant with sign 0 requests calibration: both signs are measured and the
/// one with the larger fitted rate is kept and recorded in corrector_sign.
ConvergenceReport sweep(const PeriodicCoefficient& a, const FunctionSpec& f,
                        std::span<const double> eps_list, std::span<const ErrorVariant> variants,
                        const SweepOptions& options = {});

}  // namespace homog
