// Integer-order Bessel functions J0, J1, J2 of complex argument.
#pragma once

#include <array>

#include "slabrad/types.hpp"

namespace slabrad {

/// {J0(z), J1(z), J2(z)} by power series (small |z|) or Miller's backward recurrence.
std::array<cplx, 3> bessel_j012(cplx z);

/// {J0(x), J1(x), J2(x)} for real x.
std::array<double, 3> bessel_j012(double x);

/// Bessel's integral J_n(z) = (1/2pi) int_0^{2pi} exp(i(z sin t - n t)) dt by the
/// periodic trapezoid rule. Slow but uniformly accurate; used as a reference.
cplx bessel_j_integral(int order, cplx z);

}  // namespace slabrad
