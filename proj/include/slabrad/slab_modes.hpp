// Guided modes of a symmetric free-standing dielectric slab.
#pragma once

#include <vector>

#include "slabrad/types.hpp"

namespace slabrad {

struct SlabSpec {
  double core_index = 3.5;
  double cladding_index = 1.0;
  double width = 200e-9;             // m
  double vacuum_wavelength = 980e-9; // m

  double k0() const { return 2.0 * kPi / vacuum_wavelength; }
  /// Throws DomainError unless core > cladding >= 1 and lengths are positive.
  void validate() const;
};

struct GuidedMode {
  Polarization polarization;
  int order;     // number of transverse field nodes
  double n_eff;
  double k_g;    // in-plane propagation constant, rad/m
};

/// sin(psi), where psi = kappa W - 2 atan(eta gamma / kappa) is the round-trip
/// transverse phase. Zero exactly at guided modes (psi = m pi), negative as
/// n_eff approaches the core index, sin(V) as it approaches the cladding.
double dispersion_residual(const SlabSpec& spec, Polarization pol, double n_eff);

/// All guided modes of the given polarization, sorted by descending n_eff.
std::vector<GuidedMode> find_modes(const SlabSpec& spec, Polarization pol);

/// Fundamental (order 0) mode; throws DomainError if the slab guides none.
GuidedMode fundamental_mode(const SlabSpec& spec, Polarization pol);

}  // namespace slabrad
