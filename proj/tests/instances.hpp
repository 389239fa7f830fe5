#pragma once

#include <numbers>

#include "homog/funcspec.hpp"

namespace homog::testing {

inline constexpr double kPi = std::numbers::pi;

/// 1/a = 2 + sin 2 pi y.
inline PeriodicCoefficient main_coefficient() {
  return PeriodicCoefficient::from_reciprocal(FunctionSpec::trig(2.0, {0.0}, {1.0}));
}

/// 1/a = 2 + cos 2 pi y, symmetric about 1/2.
inline PeriodicCoefficient symmetric_coefficient() {
  return PeriodicCoefficient::from_reciprocal(FunctionSpec::trig(2.0, {1.0}, {0.0}));
}

inline PeriodicCoefficient unit_coefficient() {
  return PeriodicCoefficient::from_profile(FunctionSpec::constant(1.0));
}

/// sin(pi x) as a series of period 2.
inline FunctionSpec sin_pi() { return FunctionSpec::trig(0.0, {0.0}, {1.0}, 2.0); }

/// x^2 - x + 1/6.
inline FunctionSpec codim2_rhs() { return FunctionSpec::polynomial({1.0 / 6.0, -1.0, 1.0}); }

}  // namespace homog::testing
