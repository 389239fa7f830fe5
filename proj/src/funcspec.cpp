#include "homog/funcspec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "homog/error.hpp"

namespace homog {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> poly_antiderivative(const std::vector<double>& c) {
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) out[k + 1] = c[k] / static_cast<double>(k + 1);
  return out;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> out(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) out[k - 1] = c[k] * static_cast<double>(k);
  return out;
}

double trig_sum(const std::vector<double>& cs, const std::vector<double>& ss, double omega,
                double x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const double arg = static_cast<double>(k + 1) * omega * x;
    acc += cs[k] * std::cos(arg) + ss[k] * std::sin(arg);
  }
  return acc;
}

// Antiderivative of the zero-mean trig part; returns (cos', sin', value at 0).
struct TrigIntegral {
  std::vector<double> cosines;
  std::vector<double> sines;
  double at_zero;
};

TrigIntegral trig_antiderivative(const std::vector<double>& cs, const std::vector<double>& ss,
                                 double omega) {
  TrigIntegral out{std::vector<double>(cs.size()), std::vector<double>(ss.size()), 0.0};
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const double w = static_cast<double>(k + 1) * omega;
    out.sines[k] = cs[k] / w;     // cos -> sin / w
    out.cosines[k] = -ss[k] / w;  // sin -> -cos / w
    out.at_zero += out.cosines[k];
  }
  return out;
}

std::size_t piece_index(const std::vector<double>& bps, double x) {
  const auto it = std::upper_bound(bps.begin(), bps.end(), x);
  const auto idx = static_cast<std::ptrdiff_t>(it - bps.begin()) - 1;
  const auto last = static_cast<std::ptrdiff_t>(bps.size()) - 2;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, last));
}

void validate_breakpoints(const std::vector<double>& bps, std::size_t pieces) {
  if (bps.size() < 2) throw PreconditionError("piecewise function needs at least two breakpoints");
  if (pieces + 1 != bps.size())
    throw PreconditionError("piecewise function needs exactly one value per piece");
  if (bps.front() != 0.0 || bps.back() != 1.0)
    throw PreconditionError("piecewise breakpoints must start at 0 and end at 1");
  for (std::size_t j = 1; j < bps.size(); ++j)
    if (!(bps[j] > bps[j - 1]))
      throw PreconditionError("piecewise breakpoints must strictly increase");
}

void validate_trig(const std::vector<double>& cs, const std::vector<double>& ss, double period) {
  if (cs.size() != ss.size())
    throw PreconditionError("trigonometric series needs equal-length cosine and sine lists");
  if (!(period > 0.0) || !std::isfinite(period))
    throw PreconditionError("trigonometric series period must be positive and finite");
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; });
}

// Bound on |p''| over [lo, hi].
double poly_second_derivative_bound(const std::vector<double>& c, double lo, double hi) {
  const auto d2 = poly_derivative(poly_derivative(c));
  const double r = std::max(std::abs(lo), std::abs(hi));
  double acc = 0.0, rk = 1.0;
  for (double q : d2) {
    acc += std::abs(q) * rk;
    rk *= r;
  }
  return acc;
}

double trig_second_derivative_bound(const std::vector<double>& cs, const std::vector<double>& ss,
                                    double omega) {
  double acc = 0.0;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const double w = static_cast<double>(k + 1) * omega;
    acc += w * w * (std::abs(cs[k]) + std::abs(ss[k]));
  }
  return acc;
}

// Minimum of a C^2 function on [lo, hi] with |g''| <= m2: on each sampling
// interval g >= linear interpolant - m2 h^2 / 8.
template <class G>
double sampled_minimum(const G& g, double lo, double hi, double m2) {
  constexpr double kSlack = 1e-11;
  constexpr double kMaxSamples = 4e6;
  const double span = hi - lo;
  if (span <= 0.0) return g(lo);
  double n = std::ceil(span * std::sqrt(m2 / (8.0 * kSlack)));
  n = std::clamp(n, 16.0, kMaxSamples);
  const auto count = static_cast<std::size_t>(n);
  const double h = span / n;
  double best = g(hi);
  for (std::size_t i = 0; i < count; ++i) best = std::min(best, g(lo + h * static_cast<double>(i)));
  return best - m2 * h * h / 8.0;
}

double signed_minimum(const FunctionSpec& g, double sign) {
  return std::visit(
      Overloaded{
          [&](const Constant& c) { return sign * c.value; },
          [&](const Polynomial& p) {
            return sampled_minimum([&](double x) { return sign * horner(p.coefficients, x); }, 0.0,
                                   1.0, poly_second_derivative_bound(p.coefficients, 0.0, 1.0));
          },
          [&](const TrigSeries& t) {
            const double omega = kTwoPi / t.period;
            return sampled_minimum([&](double x) { return sign * g(x); }, 0.0, 1.0,
                                   trig_second_derivative_bound(t.cosines, t.sines, omega));
          },
          [&](const PolyTrig& t) {
            const double omega = kTwoPi / t.period;
            const double m2 = poly_second_derivative_bound(t.polynomial, 0.0, 1.0) +
                              trig_second_derivative_bound(t.cosines, t.sines, omega);
            return sampled_minimum([&](double x) { return sign * g(x); }, 0.0, 1.0, m2);
          },
          [&](const PiecewiseConstant& p) {
            double best = sign * p.values.front();
            for (double v : p.values) best = std::min(best, sign * v);
            return best;
          },
          [&](const PiecewisePolynomial& p) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < p.pieces.size(); ++j) {
              const double lo = p.breakpoints[j], hi = p.breakpoints[j + 1];
              const auto& c = p.pieces[j];
              best = std::min(best,
                              sampled_minimum([&](double x) { return sign * horner(c, x); }, lo,
                                              hi, poly_second_derivative_bound(c, lo, hi)));
            }
            return best;
          },
      },
      g.variant());
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

FunctionSpec FunctionSpec::constant(double value) {
  if (!std::isfinite(value)) throw PreconditionError("constant must be finite");
  return FunctionSpec(Constant{value});
}

FunctionSpec FunctionSpec::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw PreconditionError("polynomial needs at least one coefficient");
  return FunctionSpec(Polynomial{std::move(coefficients)});
}

FunctionSpec FunctionSpec::trig(double mean, std::vector<double> cosines,
                                std::vector<double> sines, double period) {
  // Pad the shorter list so that both describe the same harmonics.
  const auto k = std::max(cosines.size(), sines.size());
  cosines.resize(k, 0.0);
  sines.resize(k, 0.0);
  validate_trig(cosines, sines, period);
  return FunctionSpec(TrigSeries{mean, std::move(cosines), std::move(sines), period});
}

FunctionSpec FunctionSpec::piecewise_constant(std::vector<double> breakpoints,
                                              std::vector<double> values) {
  validate_breakpoints(breakpoints, values.size());
  return FunctionSpec(PiecewiseConstant{std::move(breakpoints), std::move(values)});
}

FunctionSpec FunctionSpec::poly_trig(std::vector<double> polynomial, std::vector<double> cosines,
                                     std::vector<double> sines, double period) {
  if (polynomial.empty()) polynomial.push_back(0.0);
  validate_trig(cosines, sines, period);
  return FunctionSpec(PolyTrig{std::move(polynomial), std::move(cosines), std::move(sines), period});
}

FunctionSpec FunctionSpec::piecewise_polynomial(std::vector<double> breakpoints,
                                                std::vector<std::vector<double>> pieces) {
  validate_breakpoints(breakpoints, pieces.size());
  for (const auto& p : pieces)
    if (p.empty()) throw PreconditionError("polynomial piece needs at least one coefficient");
  return FunctionSpec(PiecewisePolynomial{std::move(breakpoints), std::move(pieces)});
}

double FunctionSpec::operator()(double x) const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [x](const Polynomial& p) { return horner(p.coefficients, x); },
          [x](const TrigSeries& t) {
            return t.mean + trig_sum(t.cosines, t.sines, kTwoPi / t.period, x);
          },
          [x](const PolyTrig& t) {
            return horner(t.polynomial, x) + trig_sum(t.cosines, t.sines, kTwoPi / t.period, x);
          },
          [x](const PiecewiseConstant& p) { return p.values[piece_index(p.breakpoints, x)]; },
          [x](const PiecewisePolynomial& p) {
            return horner(p.pieces[piece_index(p.breakpoints, x)], x);
          },
      },
      rep_);
}

FunctionSpec FunctionSpec::antiderivative() const {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return FunctionSpec::polynomial({0.0, c.value}); },
          [](const Polynomial& p) {
            return FunctionSpec::polynomial(poly_antiderivative(p.coefficients));
          },
          [](const TrigSeries& t) {
            auto ti = trig_antiderivative(t.cosines, t.sines, kTwoPi / t.period);
            return FunctionSpec::poly_trig({-ti.at_zero, t.mean}, std::move(ti.cosines),
                                           std::move(ti.sines), t.period);
          },
          [](const PolyTrig& t) {
            auto ti = trig_antiderivative(t.cosines, t.sines, kTwoPi / t.period);
            auto poly = poly_antiderivative(t.polynomial);
            poly[0] = -ti.at_zero;
            return FunctionSpec::poly_trig(std::move(poly), std::move(ti.cosines),
                                           std::move(ti.sines), t.period);
          },
          [](const PiecewiseConstant& p) {
            std::vector<std::vector<double>> pieces;
            double acc = 0.0;
            for (std::size_t j = 0; j < p.values.size(); ++j) {
              const double lo = p.breakpoints[j];
              // acc + v (x - lo)
              pieces.push_back({acc - p.values[j] * lo, p.values[j]});
              acc += p.values[j] * (p.breakpoints[j + 1] - lo);
            }
            return FunctionSpec::piecewise_polynomial(p.breakpoints, std::move(pieces));
          },
          [](const PiecewisePolynomial& p) {
            std::vector<std::vector<double>> pieces;
            double acc = 0.0;
            for (std::size_t j = 0; j < p.pieces.size(); ++j) {
              auto q = poly_antiderivative(p.pieces[j]);
              const double lo = p.breakpoints[j], hi = p.breakpoints[j + 1];
              q[0] = acc - horner(q, lo);
              acc = horner(q, hi);
              pieces.push_back(std::move(q));
            }
            return FunctionSpec::piecewise_polynomial(p.breakpoints, std::move(pieces));
          },
      },
      rep_);
}

FunctionSpec FunctionSpec::derivative() const {
  return std::visit(
      Overloaded{
          [](const Constant&) { return FunctionSpec::constant(0.0); },
          [](const Polynomial& p) { return FunctionSpec::polynomial(poly_derivative(p.coefficients)); },
          [](const TrigSeries& t) {
            const double omega = kTwoPi / t.period;
            std::vector<double> cs(t.cosines.size()), ss(t.sines.size());
            for (std::size_t k = 0; k < cs.size(); ++k) {
              const double w = static_cast<double>(k + 1) * omega;
              cs[k] = t.sines[k] * w;
              ss[k] = -t.cosines[k] * w;
            }
            return FunctionSpec::trig(0.0, std::move(cs), std::move(ss), t.period);
          },
          [](const PolyTrig& t) {
            const double omega = kTwoPi / t.period;
            std::vector<double> cs(t.cosines.size()), ss(t.sines.size());
            for (std::size_t k = 0; k < cs.size(); ++k) {
              const double w = static_cast<double>(k + 1) * omega;
              cs[k] = t.sines[k] * w;
              ss[k] = -t.cosines[k] * w;
            }
            return FunctionSpec::poly_trig(poly_derivative(t.polynomial), std::move(cs),
                                           std::move(ss), t.period);
          },
          [](const PiecewiseConstant&) -> FunctionSpec {
            throw NumericalError("piecewise-constant function has no classical derivative");
          },
          [](const PiecewisePolynomial&) -> FunctionSpec {
            throw NumericalError("piecewise-polynomial function has no classical derivative");
          },
      },
      rep_);
}

double FunctionSpec::integral(double lo, double hi) const {
  const auto g = antiderivative();
  return g(hi) - g(lo);
}

FunctionSpec FunctionSpec::scaled(double c) const {
  auto mul = [c](std::vector<double> v) {
    for (double& x : v) x *= c;
    return v;
  };
  return std::visit(
      Overloaded{
          [&](const Constant& k) { return FunctionSpec::constant(c * k.value); },
          [&](const Polynomial& p) { return FunctionSpec::polynomial(mul(p.coefficients)); },
          [&](const TrigSeries& t) {
            return FunctionSpec::trig(c * t.mean, mul(t.cosines), mul(t.sines), t.period);
          },
          [&](const PolyTrig& t) {
            return FunctionSpec::poly_trig(mul(t.polynomial), mul(t.cosines), mul(t.sines),
                                           t.period);
          },
          [&](const PiecewiseConstant& p) {
            return FunctionSpec::piecewise_constant(p.breakpoints, mul(p.values));
          },
          [&](const PiecewisePolynomial& p) {
            std::vector<std::vector<double>> pieces;
            for (const auto& q : p.pieces) pieces.push_back(mul(q));
            return FunctionSpec::piecewise_polynomial(p.breakpoints, std::move(pieces));
          },
      },
      rep_);
}

bool FunctionSpec::is_smooth() const {
  return !std::holds_alternative<PiecewiseConstant>(rep_) &&
         !std::holds_alternative<PiecewisePolynomial>(rep_);
}

bool FunctionSpec::is_constant() const {
  return std::visit(
      Overloaded{
          [](const Constant&) { return true; },
          [](const Polynomial& p) {
            return std::all_of(p.coefficients.begin() + 1, p.coefficients.end(),
                               [](double c) { return c == 0.0; });
          },
          [](const TrigSeries& t) { return all_zero(t.cosines) && all_zero(t.sines); },
          [](const PolyTrig& t) {
            return all_zero(t.cosines) && all_zero(t.sines) &&
                   std::all_of(t.polynomial.begin() + 1, t.polynomial.end(),
                               [](double c) { return c == 0.0; });
          },
          [](const PiecewiseConstant& p) {
            return std::all_of(p.values.begin(), p.values.end(),
                               [&](double v) { return v == p.values.front(); });
          },
          [](const PiecewisePolynomial&) { return false; },
      },
      rep_);
}

std::vector<double> FunctionSpec::interior_breakpoints() const {
  const std::vector<double>* bps = nullptr;
  if (const auto* p = std::get_if<PiecewiseConstant>(&rep_)) bps = &p->breakpoints;
  if (const auto* p = std::get_if<PiecewisePolynomial>(&rep_)) bps = &p->breakpoints;
  if (!bps) return {};
  return {bps->begin() + 1, bps->end() - 1};
}

std::optional<simd::TrigPoly> FunctionSpec::to_trig_poly() const {
  return std::visit(
      Overloaded{
          [](const Constant& c) -> std::optional<simd::TrigPoly> {
            return simd::TrigPoly{{c.value}, 0.0, {}, {}};
          },
          [](const Polynomial& p) -> std::optional<simd::TrigPoly> {
            return simd::TrigPoly{p.coefficients, 0.0, {}, {}};
          },
          [](const TrigSeries& t) -> std::optional<simd::TrigPoly> {
            return simd::TrigPoly{{t.mean}, kTwoPi / t.period, t.cosines, t.sines};
          },
          [](const PolyTrig& t) -> std::optional<simd::TrigPoly> {
            return simd::TrigPoly{t.polynomial, kTwoPi / t.period, t.cosines, t.sines};
          },
          [](const PiecewiseConstant&) -> std::optional<simd::TrigPoly> { return std::nullopt; },
          [](const PiecewisePolynomial&) -> std::optional<simd::TrigPoly> {
            return std::nullopt;
          },
      },
      rep_);
}

std::string FunctionSpec::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Constant& c) { os << "constant(" << c.value << ")"; },
                 [&](const Polynomial& p) { os << "polynomial" << join(p.coefficients); },
                 [&](const TrigSeries& t) {
                   os << "trig(mean=" << t.mean << ",cos=" << join(t.cosines)
                      << ",sin=" << join(t.sines) << ",period=" << t.period << ")";
                 },
                 [&](const PolyTrig& t) {
                   os << "polytrig(poly=" << join(t.polynomial) << ",cos=" << join(t.cosines)
                      << ",sin=" << join(t.sines) << ",period=" << t.period << ")";
                 },
                 [&](const PiecewiseConstant& p) {
                   os << "piecewise(breakpoints=" << join(p.breakpoints)
                      << ",values=" << join(p.values) << ")";
                 },
                 [&](const PiecewisePolynomial& p) {
                   os << "piecewise_polynomial(breakpoints=" << join(p.breakpoints) << ")";
                 },
             },
             rep_);
  return os.str();
}

double certified_minimum(const FunctionSpec& g) { return signed_minimum(g, 1.0); }

double certified_maximum(const FunctionSpec& g) { return -signed_minimum(g, -1.0); }

double certified_sup_abs(const FunctionSpec& g) {
  return std::max(std::abs(certified_minimum(g)), std::abs(certified_maximum(g)));
}

// ---------------------------------------------------------------------------

double wrap_unit(double z) {
  double w = z - std::floor(z);
  return w >= 1.0 ? 0.0 : w;
}

PeriodicCoefficient::PeriodicCoefficient(FunctionSpec spec, CoefficientConvention convention,
                                         double lower_bound)
    : spec_(std::move(spec)), convention_(convention), lower_bound_(lower_bound) {
  if (spec_.is_smooth()) spec_derivative_ = spec_.derivative();
}

PeriodicCoefficient PeriodicCoefficient::from_profile(FunctionSpec a) {
  const double m = certified_minimum(a);
  if (!(m > 0.0)) {
    std::ostringstream os;
    os << "coefficient " << a.describe() << " is not strictly positive (certified minimum " << m
       << ")";
    throw PreconditionError(os.str());
  }
  return PeriodicCoefficient(std::move(a), CoefficientConvention::Profile, m);
}

PeriodicCoefficient PeriodicCoefficient::from_reciprocal(FunctionSpec inverse) {
  const double m = certified_minimum(inverse);
  if (!(m > 0.0)) {
    std::ostringstream os;
    os << "reciprocal coefficient " << inverse.describe()
       << " is not strictly positive (certified minimum " << m << ")";
    throw PreconditionError(os.str());
  }
  const double big = certified_maximum(inverse);
  return PeriodicCoefficient(std::move(inverse), CoefficientConvention::Reciprocal, 1.0 / big);
}

double PeriodicCoefficient::value(double z) const {
  const double v = spec_(wrap_unit(z));
  return convention_ == CoefficientConvention::Profile ? v : 1.0 / v;
}

double PeriodicCoefficient::reciprocal(double z) const {
  const double v = spec_(wrap_unit(z));
  return convention_ == CoefficientConvention::Profile ? 1.0 / v : v;
}

double PeriodicCoefficient::derivative(double z) const {
  if (!spec_derivative_)
    throw NumericalError("coefficient " + spec_.describe() + " is not differentiable");
  const double w = wrap_unit(z);
  const double d = (*spec_derivative_)(w);
  if (convention_ == CoefficientConvention::Profile) return d;
  const double b = spec_(w);
  return -d / (b * b);
}

std::string PeriodicCoefficient::describe() const {
  return (convention_ == CoefficientConvention::Profile ? "a = " : "1/a = ") + spec_.describe();
}

double eval_periodic_scaled(const PeriodicCoefficient& a, double x, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  return a.value(x / eps);
}

}  // namespace homog
