#include "slabrad/bessel.hpp"

#include <cmath>

namespace slabrad {

namespace {

std::array<cplx, 3> series(cplx z) {
  const cplx half = 0.5 * z;
  const cplx q = -half * half;
  std::array<cplx, 3> out{};
  cplx lead = 1.0;
  for (int n = 0; n < 3; ++n) {
    cplx term = lead;
    cplx sum = term;
    for (int k = 1; k < 40; ++k) {
      term *= q / (double(k) * double(n + k));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    out[n] = sum;
    lead *= half / double(n + 1);
  }
  return out;
}

std::array<cplx, 3> miller(cplx z) {
  const double az = std::abs(z);
  int start = int(az) + int(std::sqrt(60.0 * az)) + 20;
  start += start % 2;
  const cplx two_over_z = 2.0 / z;
  cplx next = 0.0;  // J_{k+1}
  cplx cur = 1e-30; // J_k
  cplx norm = 0.0;
  std::array<cplx, 3> low{};
  for (int k = start; k > 0; --k) {
    const cplx prev = double(k) * two_over_z * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e200) {
      cur *= 1e-200;
      next *= 1e-200;
      norm *= 1e-200;
      for (auto& v : low) v *= 1e-200;
    }
    const int order = k - 1;
    if (order <= 2) low[order] = cur;
    if (order > 0 && order % 2 == 0) norm += 2.0 * cur;
  }
  norm += cur;
  for (auto& v : low) v /= norm;
  return low;
}

}  // namespace

std::array<cplx, 3> bessel_j012(cplx z) {
  const double az = std::abs(z);
  if (az == 0.0) return {1.0, 0.0, 0.0};
  if (az <= 2.0) return series(z);
  if (std::abs(z.imag()) > 8.0) {
    return {bessel_j_integral(0, z), bessel_j_integral(1, z), bessel_j_integral(2, z)};
  }
  return miller(z);
}

std::array<double, 3> bessel_j012(double x) {
  if (std::abs(x) < 2.0) {
    const auto c = series(cplx(x, 0.0));
    return {c[0].real(), c[1].real(), c[2].real()};
  }
  const double j0 = std::cyl_bessel_j(0.0, std::abs(x));
  const double j1 = std::cyl_bessel_j(1.0, std::abs(x));
  const double j2 = 2.0 / std::abs(x) * j1 - j0;
  return {j0, x < 0 ? -j1 : j1, j2};
}

cplx bessel_j_integral(int order, cplx z) {
  const int m = 2 * (int(1.5 * std::abs(z)) + 40 + 4 * int(std::abs(z.imag())));
  cplx sum = 0.0;
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * kPi * k / m;
    sum += std::exp(kI * (z * std::sin(t) - double(order) * t));
  }
  return sum / double(m);
}

}  // namespace slabrad
