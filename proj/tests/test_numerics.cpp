#include <cmath>
#include <random>

#include "doctest.h"
#include "slabrad/bessel.hpp"
#include "slabrad/quadrature.hpp"

using namespace slabrad;

TEST_CASE("complex Bessel J0..J2 agree with the trapezoid integral") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(0.0, 60.0), im(-10.0, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    const cplx z(re(rng), trial % 3 == 0 ? 0.05 * im(rng) : im(rng));
    const auto j = bessel_j012(z);
    for (int n = 0; n < 3; ++n) {
      const cplx ref = bessel_j_integral(n, z);
      const double scale = std::abs(ref) + 1e-6 * std::exp(std::abs(z.imag()));
      CHECK(std::abs(j[n] - ref) <= 1e-11 * scale);
    }
  }
}

TEST_CASE("small-argument series and zero") {
  const auto j = bessel_j012(cplx(0.0, 0.0));
  CHECK(j[0] == cplx(1.0));
  CHECK(j[1] == cplx(0.0));
  CHECK(j[2] == cplx(0.0));
  const cplx z(0.3, -0.2);
  CHECK(std::abs(bessel_j012(z)[1] - bessel_j_integral(1, z)) < 1e-15);
}

TEST_CASE("real Bessel matches the standard library") {
  for (double x = 0.01; x < 80.0; x += 0.37) {
    const auto j = bessel_j012(x);
    CHECK(j[0] == doctest::Approx(std::cyl_bessel_j(0.0, x)).epsilon(1e-12).scale(1.0));
    CHECK(j[1] == doctest::Approx(std::cyl_bessel_j(1.0, x)).epsilon(1e-12).scale(1.0));
    CHECK(std::abs(j[2] - std::cyl_bessel_j(2.0, x)) < 1e-12);
  }
}

TEST_CASE("adaptive Gauss-Kronrod integrates vector-valued integrands") {
  auto f = [](double x) {
    Eigen::Vector3cd v;
    v << x * x, std::exp(x), std::exp(cplx(0.0, 40.0 * x));
    return v;
  };
  const auto r = quad::integrate<Eigen::Vector3cd>(f, 0.0, 1.0, 4, 1e-13, 0.0);
  CHECK(std::abs(r.value(0) - 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(r.value(1) - (std::exp(1.0) - 1.0)) < 1e-13);
  const cplx exact = (std::exp(cplx(0.0, 40.0)) - 1.0) / cplx(0.0, 40.0);
  CHECK(std::abs(r.value(2) - exact) < 1e-13);
}

TEST_CASE("integration failure reports the achieved tolerance") {
  auto f = [](double x) {
    Eigen::Matrix<cplx, 1, 1> v;
    v << 1.0 / x;
    return v;
  };
  try {
    quad::integrate<Eigen::Matrix<cplx, 1, 1>>(f, 0.0, 1.0, 1, 1e-12, 0.0, 50);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.achieved_tolerance() > 1e-12);
  }
}

TEST_CASE("Wynn epsilon accelerates an alternating series") {
  std::vector<cplx> partial;
  cplx s = 0.0;
  for (int k = 0; k < 21; ++k) {
    s += (k % 2 ? -1.0 : 1.0) / (k + 1.0);
    partial.push_back(s);
  }
  CHECK(std::abs(partial.back() - std::log(2.0)) > 1e-2);
  CHECK(std::abs(quad::wynn_epsilon(partial) - std::log(2.0)) < 1e-12);
}
