#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "slabrad/geometry.hpp"
#include "slabrad/lindblad.hpp"
#include "slabrad/slab_modes.hpp"
#include "slabrad/superradiance.hpp"

using namespace slabrad;

namespace {

constexpr double kLambda0 = 980e-9;
constexpr double kN = 3.5;
constexpr double kLambda = kLambda0 / kN;

Medium slab() { return SlabMedium{LayerStack::centered(kN, 200e-9, kLambda0), {}}; }
Medium bulk() { return HomogeneousMedium{kN, kLambda0}; }

EmitterArray lattice(const Medium& m, LatticeKind kind, int n, double d_over_lambda,
                     Vec3 dip = Vec3::UnitY()) {
  EmitterArray a;
  a.medium = m;
  a.orientation = dip;
  a.positions = generate_lattice({kind, n, d_over_lambda * kLambda, 0.0});
  return a;
}

std::vector<double> phi_grid(int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = 2.0 * kPi * i / n;
  return v;
}

// Independent loop form of the directional criterion.
double directional_loops(const CouplingMatrices& c, const Positions& p, double k, double phi) {
  double s = 0.0;
  for (int n = 0; n < c.size(); ++n) {
    s -= c.Gamma(n, n);
    for (int m = 0; m < c.size(); ++m) {
      if (m == n) continue;
      const double th = k * ((p(0, n) - p(0, m)) * std::cos(phi) + (p(1, n) - p(1, m)) * std::sin(phi));
      s += std::cos(th) * c.Gamma(m, n);
    }
  }
  return c.gamma0 * s;
}

}  // namespace

TEST_CASE("total criterion: single emitter and two-atom Dicke point") {
  const auto one = coupling_matrices(lattice(bulk(), LatticeKind::Chain, 1, 1.0));
  CHECK(gamma_dot_total(one) == doctest::Approx(-one.gamma_eps * one.gamma_eps).epsilon(1e-14));
  Eigen::Matrix2d g;
  g << 2.5, 2.5, 2.5, 2.5;
  CHECK(gamma_dot_total(make_couplings(Eigen::Matrix2d::Zero(), g)) == 0.0);
}

TEST_CASE("total criterion matches the master equation for a bulk chain") {
  const auto c = coupling_matrices(lattice(bulk(), LatticeKind::Chain, 3, 0.2));
  const double closed = gamma_dot_total(c);
  CHECK(std::abs(rate_derivative_fd(c) - closed) <= 1e-4 * std::abs(closed));
}

TEST_CASE("directional phases") {
  const auto a = lattice(bulk(), LatticeKind::Chain, 5, 0.8);
  const auto th = directional_phases(a, 0.3);
  CHECK(th.k_used == doctest::Approx(kN * 2.0 * kPi / kLambda0).epsilon(1e-15));
  CHECK((th.theta + th.theta.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(th.theta.diagonal().cwiseAbs().maxCoeff() == 0.0);
  for (int n = 0; n < 5; ++n)
    for (int m = 0; m < 5; ++m) {
      const double expect = th.k_used * ((a.positions(0, n) - a.positions(0, m)) * std::cos(0.3) +
                                         (a.positions(1, n) - a.positions(1, m)) * std::sin(0.3));
      CHECK(th.theta(n, m) == doctest::Approx(expect).epsilon(1e-14).scale(1.0));
    }
  const Positions same = Positions::Zero(3, 4);
  CHECK(directional_phases(same, 1.1, 1e7).theta.cwiseAbs().maxCoeff() == 0.0);
  const auto broadside = directional_phases(a, kPi / 2);
  CHECK(broadside.theta.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("guided-wavelength chain is phase matched along its axis") {
  const SlabSpec spec{kN, 1.0, 200e-9, kLambda0};
  const double kg = fundamental_mode(spec, Polarization::TE).k_g;
  EmitterArray a;
  a.medium = slab();
  a.positions = generate_lattice({LatticeKind::Chain, 6, 2.0 * kPi / kg, 0.0});
  const auto th = directional_phases(a, 0.0);
  CHECK(th.k_used == kg);
  // accumulate the phase hop by hop
  for (int n = 0; n < 6; ++n) {
    double acc = 0.0;
    for (int m = n; m > 0; --m) acc += kg * (a.positions(0, m) - a.positions(0, m - 1));
    const double cycles = th.theta(n, 0) / (2.0 * kPi);
    CHECK(std::abs(cycles - std::round(cycles)) < 1e-9);
    CHECK(std::abs(acc - th.theta(n, 0)) < 1e-9);
  }
  a.orientation = Vec3::UnitZ();
  CHECK(directional_wavenumber(a) == fundamental_mode(spec, Polarization::TM).k_g);
}

TEST_CASE("directional criterion: limits and equivalent forms") {
  const auto one = coupling_matrices(lattice(slab(), LatticeKind::Chain, 1, 1.0));
  CHECK(gamma_dot_directional(one, directional_phases(Positions::Zero(3, 1), 0.0, 1.0)) ==
        doctest::Approx(-one.gamma0 * one.gamma_eps));
  for (int n = 2; n <= 6; ++n) {
    const Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, 2.0);
    const auto c = make_couplings(Eigen::MatrixXd::Zero(n, n), g, 1.0);
    const auto th = directional_phases(Positions::Zero(3, n), 0.4, 1e7);
    const double v = gamma_dot_directional(c, th);
    CHECK(v == doctest::Approx(2.0 * n * (n - 1) - 2.0 * n));
    CHECK(v >= 0.0);
    CHECK((gamma_dot_total(c) >= 0.0) == (v >= 0.0));
  }
  std::mt19937_64 rng(5);
  const auto a = lattice(slab(), LatticeKind::Square, 9, 0.6);
  const auto c = coupling_matrices(a);
  const auto phis = phi_grid(37);
  const auto fast = gamma_dot_directional(c, a.positions, directional_wavenumber(a), phis);
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const double loops = directional_loops(c, a.positions, directional_wavenumber(a), phis[i]);
    CHECK(fast[i] == doctest::Approx(loops).epsilon(1e-12));
    CHECK(gamma_dot_directional(c, directional_phases(a, phis[i])) == doctest::Approx(loops).epsilon(1e-12));
  }
}

TEST_CASE("symmetries of the directional criterion") {
  const auto a = lattice(slab(), LatticeKind::Chain, 5, 1.3);
  const auto c = coupling_matrices(a);
  const double k = directional_wavenumber(a);
  for (double phi : {0.1, 0.77, 1.9, 2.8}) {
    const auto v = gamma_dot_directional(c, a.positions, k, {phi, phi + 2 * kPi, -phi, kPi - phi});
    CHECK(v[1] == doctest::Approx(v[0]).epsilon(1e-10));
    CHECK(v[2] == doctest::Approx(v[0]).epsilon(1e-12));
    CHECK(v[3] == doctest::Approx(v[0]).epsilon(1e-10));
  }
  // translation and relabeling
  auto moved = a;
  moved.positions.row(0).array() += 2.2 * kLambda;
  moved.positions.col(0).swap(moved.positions.col(3));
  const auto cm = coupling_matrices(moved);
  CHECK(gamma_dot_total(cm) == doctest::Approx(gamma_dot_total(c)).epsilon(1e-6));
  CHECK(gamma_dot_directional(cm, moved.positions, k, {0.6})[0] ==
        doctest::Approx(gamma_dot_directional(c, a.positions, k, {0.6})[0]).epsilon(1e-6));
  // rate rescaling
  auto scaled = c;
  scaled.Gamma *= 3.0;
  scaled.gamma0 *= 3.0;
  CHECK(gamma_dot_total(scaled) == doctest::Approx(9.0 * gamma_dot_total(c)).epsilon(1e-13));
  const auto v1 = gamma_dot_directional(c, a.positions, k, phi_grid(90));
  const auto v3 = gamma_dot_directional(scaled, a.positions, k, phi_grid(90));
  for (std::size_t i = 0; i < v1.size(); ++i) {
    CHECK(v3[i] == doctest::Approx(9.0 * v1[i]).epsilon(1e-12).scale(1e-9));
    CHECK((v3[i] >= 0) == (v1[i] >= 0));
  }
}

TEST_CASE("slab chain stays directionally superradiant far beyond the bulk range") {
  const auto phis = phi_grid(360);
  auto last_superradiant = [&](const Medium& m) {
    const GreensKernel kernel(m);
    double last = 0.0;
    for (double d = 0.05; d <= 6.0; d += 0.025) {
      const auto a = lattice(m, LatticeKind::Chain, 5, d);
      const auto v = gamma_dot_directional(coupling_matrices(a, kernel), a.positions, directional_wavenumber(a), phis);
      if (*std::max_element(v.begin(), v.end()) >= 0.0) last = d;
    }
    return last;
  };
  CHECK(last_superradiant(slab()) > 2.0);
  CHECK(last_superradiant(bulk()) <= 1.0);
}

TEST_CASE("sweep maps") {
  const GreensKernel kernel(slab());
  auto geom = [](double d, double) { return lattice(slab(), LatticeKind::Chain, 4, d); };
  const auto single = sweep_map(geom, {"d_over_lambda", {0.8}}, {"phi", {0.3}}, kernel);
  const auto a = geom(0.8, 0);
  CHECK(single.values(0, 0) ==
        doctest::Approx(gamma_dot_directional(coupling_matrices(a, kernel), directional_phases(a, 0.3))).epsilon(1e-12));
  const auto total = sweep_map(geom, {"d_over_lambda", {0.8}}, {"phi", {0.3, 1.0}}, kernel, Criterion::Total);
  CHECK(total.values(0, 1) == gamma_dot_total(coupling_matrices(a, kernel)));

  CHECK_THROWS_WITH(sweep_map(geom, {"d_over_lambda", {}}, {"phi", {0.0}}, kernel), "empty sweep axis 'd_over_lambda'");
  CHECK_THROWS_AS(sweep_map(geom, {"d_over_lambda", {1.0, 0.5}}, {"phi", {0.0}}, kernel), DomainError);

  auto flaky = [](double d, double) {
    if (d > 1.0) throw ConvergenceError("synthetic failure", 1e-3);
    return lattice(slab(), LatticeKind::Chain, 3, d);
  };
  const auto partial = sweep_map(flaky, {"d_over_lambda", {0.5, 1.5, 2.0}}, {"phi", {0.0, 1.0}}, kernel);
  CHECK(partial.failed_points() == 4);
  CHECK(partial.failures.size() == 2);
  CHECK(std::isfinite(partial.values(0, 0)));
  CHECK(std::isnan(partial.values(1, 1)));
}

TEST_CASE("bulk size sweep: superradiance needs many emitters at small spacing") {
  const GreensKernel kernel(bulk());
  const SweepAxis ns{"N", {2, 5, 10, 20, 30}};
  const SweepAxis ds{"d_over_lambda", {0.05, 0.1, 0.3, 0.5, 1.0, 1.5, 2.0}};
  const auto map = sweep_grid([](double n, double d) { return lattice(bulk(), LatticeKind::Chain, int(n), d); }, ns,
                              ds, 0.22 * kPi, kernel);
  CHECK(!map.superradiant(0, 0));  // N = 2
  CHECK(map.superradiant(4, 0));
  CHECK(map.superradiant(4, 1));
  for (int i = 0; i < 5; ++i)
    for (int j = 2; j < 7; ++j) CHECK(!map.superradiant(i, j));
}

TEST_CASE("synthetic d_min scaling") {
  for (int dims : {1, 2}) {
    for (double alpha : {0.5, 1.0}) {
      const std::vector<int> ns = dims == 1 ? std::vector<int>{2, 8, 64, 300} : std::vector<int>{4, 16, 100};
      const auto pts = dmin_scaling_check(alpha, dims, ns, 0.7);
      for (const auto& p : pts) {
        // closed form: d = (lattice_sum / N)^(1 / 2 alpha)
        double sum = 0.0;
        if (dims == 1) {
          for (int i = 0; i < p.n; ++i)
            for (int j = 0; j < p.n; ++j)
              if (i != j) sum += std::pow(std::abs(i - j), -2 * alpha);
        } else {
          const int side = int(std::sqrt(p.n));
          for (int i = 0; i < p.n; ++i)
            for (int j = 0; j < p.n; ++j) {
              if (i == j) continue;
              const double dx = i % side - j % side, dy = i / side - j / side;
              sum += std::pow(dx * dx + dy * dy, -alpha);
            }
        }
        CHECK(p.d_min == doctest::Approx(std::pow(sum / p.n, 1.0 / (2 * alpha))).epsilon(1e-12));
      }
    }
  }
  CHECK(dmin_scaling_check(1.0, 1, {1})[0].d_min == 0.0);
  CHECK_THROWS_AS(dmin_scaling_check(1.0, 2, {10}), DomainError);
  CHECK_THROWS_AS(dmin_scaling_check(1.0, 3, {4}), DomainError);
}
