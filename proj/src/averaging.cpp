#include "homog/averaging.hpp"

#include <cmath>
#include <sstream>

#include "homog/error.hpp"
#include "homog/parallel.hpp"
#include "homog/simd/kernels.hpp"

namespace homog {

ErrorVariant ErrorVariant::corrected(int sign) {
  if (sign != 1 && sign != -1) throw PreconditionError("corrector sign must be +1 or -1");
  return {ErrorKind::Corrected, sign};
}

std::string ErrorVariant::name() const {
  switch (kind) {
    case ErrorKind::Raw: return "raw";
    case ErrorKind::Averaged: return "averaged";
    case ErrorKind::Corrected: return sign > 0 ? "corrected+" : "corrected-";
  }
  return "unknown";
}

ErrorVariant ErrorVariant::parse(const std::string& name) {
  if (name == "raw") return raw();
  if (name == "averaged") return averaged();
  if (name == "corrected+") return corrected(1);
  if (name == "corrected-") return corrected(-1);
  throw PreconditionError("unknown error variant '" + name + "'");
}

double moving_average(const std::function<double(double)>& u, double x, double eps,
                      std::span<const double> cell_fractions) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  const double half = 0.5 * eps;
  const double slack = 1e-12;
  if (x < half - slack || x > 1.0 - half + slack) {
    std::ostringstream os;
    os << "moving-average window [" << x - half << ", " << x + half
       << "] leaves the domain [0,1]";
    throw PreconditionError(os.str());
  }
  return integrate_eps_aligned(u, eps, x - half, x + half, kDefaultGaussOrder, cell_fractions) /
         eps;
}

// ---------------------------------------------------------------------------

Corrector::Corrector(const PeriodicCoefficient& a, const FunctionSpec& f)
    : m1_(moment_m1(a)),
      m2_(moment_m2(a)),
      int_f_(f.integral(0.0, 1.0)),
      int_int_f_(f.antiderivative().integral(0.0, 1.0)) {}

bool Corrector::vanishes() const {
  return std::abs(int_f_ * m1_) <= 1e-12 && std::abs(int_int_f_ * m2_) <= 1e-12;
}

double corrector(const PeriodicCoefficient& a, const FunctionSpec& f, double eps, double x) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  return Corrector(a, f)(eps, x);
}

bool corrector_vanishes(const PeriodicCoefficient& a, const FunctionSpec& f) {
  return Corrector(a, f).vanishes();
}

// ---------------------------------------------------------------------------

std::vector<double> ErrorProfile::variant_values(const ErrorVariant& v) const {
  switch (v.kind) {
    case ErrorKind::Raw: return exact;
    case ErrorKind::Averaged: return averaged;
    case ErrorKind::Corrected: {
      std::vector<double> out(averaged.size());
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = averaged[i] + static_cast<double>(v.sign) * corrector[i];
      return out;
    }
  }
  return {};
}

double ErrorProfile::sup_error(const ErrorVariant& v) const {
  const auto values = variant_values(v);
  return simd::active_kernels().max_abs_diff(values.data(), homogenized.data(), values.size());
}

ErrorProfile error_profile(const ProblemInstance& p, std::size_t intervals) {
  if (static_cast<double>(intervals) * p.eps < 8.0 - 1e-9) {
    std::ostringstream os;
    os << "grid with N = " << intervals << " does not resolve eps = " << p.eps
       << " (need N >= 8/eps)";
    throw PreconditionError(os.str());
  }
  const ExactSolution exact(p);
  const HomogenizedSolution hom(p.a, p.f);
  const Corrector ell(p.a, p.f);

  ErrorProfile prof;
  const double n = static_cast<double>(intervals);
  const double slack = 1e-12;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double x = static_cast<double>(i) / n;
    if (x >= p.eps - slack && x <= 1.0 - p.eps + slack) prof.x.push_back(x);
  }
  const std::size_t m = prof.x.size();
  prof.exact.resize(m);
  prof.homogenized.resize(m);
  prof.averaged.resize(m);
  prof.corrector.resize(m);

  const auto fractions = p.a.cell_breakpoints();
  const std::function<double(double)> u = [&exact](double y) { return exact(y); };
  parallel_for(
      m,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const double x = prof.x[i];
          prof.exact[i] = exact(x);
          prof.homogenized[i] = hom(x);
          prof.averaged[i] = moving_average(u, x, p.eps, fractions);
          prof.corrector[i] = ell(p.eps, x);
        }
      },
      64);
  return prof;
}

double sup_error(const ProblemInstance& p, const ErrorVariant& variant, std::size_t intervals) {
  return error_profile(p, intervals).sup_error(variant);
}

}  // namespace homog
