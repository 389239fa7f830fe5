#include "homog/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "homog/error.hpp"

namespace homog {

namespace {

template <class E>
[[noreturn]] void rethrow_with_eps(const E& e, double eps) {
  std::ostringstream os;
  os << "eps = " << eps << ": " << e.what();
  throw E(os.str());
}

VariantSeries fit_series(ErrorVariant v, std::vector<RatePoint> points) {
  VariantSeries s{v, std::move(points), FitStatus::Fitted, {}};
  const auto positive = std::count_if(s.points.begin(), s.points.end(), [](const RatePoint& p) {
    return p.error > kExactErrorThreshold;
  });
  if (positive == 0) {
    s.status = FitStatus::Exact;
    s.fit.rate = std::numeric_limits<double>::quiet_NaN();
    s.fit.intercept = std::numeric_limits<double>::quiet_NaN();
  } else if (positive < 3) {
    s.status = FitStatus::Degenerate;
    s.fit.rate = std::numeric_limits<double>::quiet_NaN();
    s.fit.intercept = std::numeric_limits<double>::quiet_NaN();
  } else {
    s.fit = fit_rate(s.points);
  }
  return s;
}

double rate_or_nan(const VariantSeries& s) {
  return s.status == FitStatus::Fitted ? s.fit.rate : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

RateFit fit_rate(std::span<const RatePoint> points) {
  std::vector<double> lx, ly;
  for (const auto& p : points) {
    if (!(p.eps > 0.0)) throw PreconditionError("rate fit needs positive eps values");
    if (p.error > kExactErrorThreshold) {
      lx.push_back(std::log(p.eps));
      ly.push_back(std::log(p.error));
    }
  }
  if (lx.size() < 3) {
    std::ostringstream os;
    os << "degenerate rate fit: " << lx.size() << " point(s) with error above "
       << kExactErrorThreshold << ", need 3";
    throw NumericalError(os.str());
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw NumericalError("degenerate rate fit: all eps values coincide");
  RateFit fit;
  fit.rate = sxy / sxx;
  fit.intercept = my - fit.rate * mx;
  fit.points = lx.size();
  for (std::size_t i = 0; i < lx.size(); ++i)
    fit.max_residual =
        std::max(fit.max_residual, std::abs(ly[i] - (fit.rate * lx[i] + fit.intercept)));
  return fit;
}

const char* to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Fitted: return "fitted";
    case FitStatus::Exact: return "exact";
    case FitStatus::Degenerate: return "degenerate";
  }
  return "unknown";
}

const VariantSeries* ConvergenceReport::find(ErrorKind kind) const {
  for (const auto& s : series)
    if (s.variant.kind == kind) return &s;
  return nullptr;
}

std::vector<double> default_eps_ladder() {
  return {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
}

ConvergenceReport sweep(const PeriodicCoefficient& a, const FunctionSpec& f,
                        std::span<const double> eps_list, std::span<const ErrorVariant> variants,
                        const SweepOptions& options) {
  if (eps_list.empty()) throw PreconditionError("eps list must not be empty");
  if (variants.empty()) throw PreconditionError("variant list must not be empty");

  std::vector<double> eps(eps_list.begin(), eps_list.end());
  std::sort(eps.begin(), eps.end(), std::greater<>());
  if (std::adjacent_find(eps.begin(), eps.end()) != eps.end())
    throw PreconditionError("eps list contains duplicates");

  // Every requested quantity, with calibration expanded into both signs.
  std::vector<ErrorVariant> measured;
  bool calibrate = false;
  for (const auto& v : variants) {
    if (v.kind == ErrorKind::Corrected && v.sign == 0) {
      calibrate = true;
      measured.push_back(ErrorVariant::corrected(1));
      measured.push_back(ErrorVariant::corrected(-1));
    } else {
      measured.push_back(v);
    }
  }

  ConvergenceReport report;
  report.instance = a.describe() + "; f = " + f.describe();
  std::vector<std::vector<RatePoint>> points(measured.size());

  for (double e : eps) {
    try {
      const auto p = ProblemInstance::make(a, f, e, options.relaxed);
      if (report.tags.empty()) report.tags = p.hypothesis_tags();
      const std::size_t n = options.intervals ? options.intervals : default_grid_size(e);
      const auto prof = error_profile(p, n);
      for (std::size_t k = 0; k < measured.size(); ++k)
        points[k].push_back({e, prof.sup_error(measured[k])});
    } catch (const PreconditionError& err) {
      rethrow_with_eps(err, e);
    } catch (const NumericalError& err) {
      rethrow_with_eps(err, e);
    }
  }

  std::optional<VariantSeries> plus, minus;
  for (std::size_t k = 0; k < measured.size(); ++k) {
    auto s = fit_series(measured[k], std::move(points[k]));
    const bool requested_directly =
        std::find(variants.begin(), variants.end(), measured[k]) != variants.end();
    if (calibrate && measured[k].kind == ErrorKind::Corrected && !requested_directly) {
      (measured[k].sign > 0 ? plus : minus) = std::move(s);
      continue;
    }
    report.series.push_back(std::move(s));
  }

  if (calibrate) {
    report.calibration_rate_plus = rate_or_nan(*plus);
    report.calibration_rate_minus = rate_or_nan(*minus);
    // Identical series (vanishing corrector) or no usable fit: keep the sign
    // implied by the expansion A u_eps = u + l_eps + O(eps^2).
    int sign = -1;
    if (std::isfinite(report.calibration_rate_plus) &&
        (!std::isfinite(report.calibration_rate_minus) ||
         report.calibration_rate_plus > report.calibration_rate_minus))
      sign = 1;
    report.corrector_sign = sign;
    auto& chosen = sign > 0 ? *plus : *minus;
    report.calibration_meets_threshold =
        chosen.status == FitStatus::Exact ||
        (chosen.status == FitStatus::Fitted && chosen.fit.rate >= kCorrectedRateMin);
    report.series.push_back(std::move(chosen));
  }
  return report;
}

}  // namespace homog
