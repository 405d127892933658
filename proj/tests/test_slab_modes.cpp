#include <cmath>

#include "doctest.h"
#include "slabrad/slab_modes.hpp"

using namespace slabrad;

namespace {

SlabSpec slab(double width) { return SlabSpec{3.5, 1.0, width, 980e-9}; }

// Sign changes of the residual on a uniform grid strictly inside the bracket.
int brute_force_count(const SlabSpec& s, Polarization pol, int points) {
  int changes = 0;
  const double lo = s.cladding_index, hi = s.core_index;
  double prev = dispersion_residual(s, pol, lo + (hi - lo) * 0.5 / points);
  for (int i = 1; i < points; ++i) {
    const double v = dispersion_residual(s, pol, lo + (hi - lo) * (i + 0.5) / points);
    if ((v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  return changes;
}

}  // namespace

TEST_CASE("residual is defined only inside the open bracket") {
  const auto s = slab(200e-9);
  CHECK_THROWS_AS(dispersion_residual(s, Polarization::TE, 1.0), DomainError);
  CHECK_THROWS_AS(dispersion_residual(s, Polarization::TE, 3.5), DomainError);
  CHECK_THROWS_AS(dispersion_residual(s, Polarization::TM, 0.5), DomainError);
  CHECK_THROWS_AS(SlabSpec({1.0, 1.0, 1e-7, 1e-6}).validate(), DomainError);
  CHECK_THROWS_AS(SlabSpec({3.5, 1.0, -1e-7, 1e-6}).validate(), DomainError);
}

TEST_CASE("residual signs at the bracket ends") {
  for (double w : {10e-9, 200e-9, 1e-6, 5e-6}) {
    const auto s = slab(w);
    for (auto pol : {Polarization::TE, Polarization::TM}) {
      CHECK(dispersion_residual(s, pol, 3.5 - 1e-9) < 0.0);
      const double v = s.k0() * w * std::sqrt(3.5 * 3.5 - 1.0);
      const double near_clad = dispersion_residual(s, pol, 1.0 + 1e-12);
      CHECK(near_clad == doctest::Approx(std::sin(v)).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("roots match an independent even/odd bisection oracle") {
  // Frozen from the textbook even/odd characteristic equations solved with a
  // separate root finder.
  const auto te = find_modes(slab(200e-9), Polarization::TE);
  const auto tm = find_modes(slab(200e-9), Polarization::TM);
  REQUIRE(te.size() == 2);
  REQUIRE(tm.size() == 2);
  CHECK(std::abs(te[0].n_eff - 3.0874241282014334) < 1e-12);
  CHECK(std::abs(te[1].n_eff - 1.6581972284504947) < 1e-12);
  CHECK(std::abs(tm[0].n_eff - 2.6139138197645067) < 1e-12);
  CHECK(std::abs(tm[1].n_eff - 1.0156874054410148) < 1e-12);
  const auto thin = find_modes(slab(10e-9), Polarization::TE);
  REQUIRE(thin.size() == 1);
  CHECK(std::abs(thin[0].n_eff - 1.0621170548895733) < 1e-12);
  CHECK(find_modes(slab(5e-6), Polarization::TE).size() == 35);
  CHECK(find_modes(slab(5e-6), Polarization::TM).size() == 35);
}

TEST_CASE("roots satisfy the residual and the bracket") {
  for (double w : {10e-9, 200e-9, 750e-9, 2e-6, 5e-6}) {
    for (auto pol : {Polarization::TE, Polarization::TM}) {
      const auto s = slab(w);
      const auto modes = find_modes(s, pol);
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& m = modes[i];
        CHECK(m.order == int(i));
        CHECK(m.polarization == pol);
        CHECK(m.n_eff > 1.0);
        CHECK(m.n_eff < 3.5);
        CHECK(m.k_g == m.n_eff * s.k0());
        CHECK(std::abs(dispersion_residual(s, pol, m.n_eff)) <= 1e-10);
        if (i) CHECK(modes[i - 1].n_eff > m.n_eff);
      }
    }
  }
  const auto s = slab(200e-9);
  CHECK(std::abs(dispersion_residual(s, Polarization::TE, fundamental_mode(s, Polarization::TE).n_eff)) < 1e-12);
}

TEST_CASE("mode count equals the sign changes of a 10^6-point scan") {
  for (double w : {200e-9, 1.3e-6}) {
    for (auto pol : {Polarization::TE, Polarization::TM}) {
      const auto s = slab(w);
      CHECK(brute_force_count(s, pol, 1000000) == int(find_modes(s, pol).size()));
    }
  }
}

TEST_CASE("limits of the fundamental TE mode") {
  CHECK(std::abs(fundamental_mode(slab(5e-6), Polarization::TE).n_eff - 3.5) < 0.01 * 3.5);
  const auto s = slab(200e-9);
  CHECK(fundamental_mode(s, Polarization::TE).n_eff > fundamental_mode(s, Polarization::TM).n_eff);
}

TEST_CASE("effective indices and mode counts grow with width") {
  std::vector<double> prev_te, prev_tm;
  for (int i = 0; i < 40; ++i) {
    const double w = 20e-9 + i * 60e-9;
    const auto te = find_modes(slab(w), Polarization::TE);
    const auto tm = find_modes(slab(w), Polarization::TM);
    CHECK(te.size() >= prev_te.size());
    CHECK(tm.size() >= prev_tm.size());
    for (std::size_t k = 0; k < prev_te.size(); ++k) CHECK(te[k].n_eff >= prev_te[k]);
    for (std::size_t k = 0; k < prev_tm.size(); ++k) CHECK(tm[k].n_eff >= prev_tm[k]);
    prev_te.clear();
    prev_tm.clear();
    for (const auto& m : te) prev_te.push_back(m.n_eff);
    for (const auto& m : tm) prev_tm.push_back(m.n_eff);
  }
}

TEST_CASE("find_modes is a pure function") {
  const auto s = slab(3.3e-6);
  const auto a = find_modes(s, Polarization::TM);
  const auto b = find_modes(s, Polarization::TM);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::memcmp(&a[i].n_eff, &b[i].n_eff, sizeof(double)) == 0);
}
