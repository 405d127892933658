// Reference implementations used only by the tests. Each one is written from
// a different formulation than the library code it checks.
#pragma once

#include <cmath>
#include <random>

#include "slabrad/types.hpp"

namespace oracle {

using slabrad::cplx;
using slabrad::kPi;

/// Homogeneous dyadic from G = (I + grad grad / k^2) exp(ikR)/(4 pi R),
/// differentiated by hand into the near/intermediate/far form.
inline slabrad::Mat3c dyadic(const slabrad::Vec3& r, const slabrad::Vec3& rp, double k) {
  const slabrad::Vec3 d = r - rp;
  const double R = d.norm();
  const slabrad::Vec3 u = d / R;
  const cplx ikr(0.0, k * R);
  const cplx g = std::exp(ikr) / (4.0 * kPi * R);
  const cplx a = 1.0 + (ikr - 1.0) / (k * k * R * R);
  const cplx b = (3.0 - 3.0 * ikr - k * k * R * R) / (k * k * R * R);
  return g * (a * slabrad::Mat3c::Identity() + b * (u * u.transpose()).cast<cplx>());
}

/// Gamma_12 / Gamma_11 for parallel dipoles perpendicular to their separation.
inline double transverse_ratio(double x) {
  return 1.5 * (std::sin(x) / x + std::cos(x) / (x * x) - std::sin(x) / (x * x * x));
}

inline slabrad::Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  slabrad::Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double rel(const slabrad::Mat3c& a, const slabrad::Mat3c& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

/// Least-squares slope of y against x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= double(x.size());
  my /= double(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

/// Coefficient of determination of the straight-line fit y ~ a x + b.
inline double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double a = slope(x, y);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= double(x.size());
  my /= double(x.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = my + a * (x[i] - mx);
    ss_res += (y[i] - f) * (y[i] - f);
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  return 1.0 - ss_res / ss_tot;
}

}  // namespace oracle
