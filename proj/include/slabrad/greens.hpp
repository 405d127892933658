// Dyadic Green's functions for a point dipole in a homogeneous dielectric and
// inside a dielectric slab.
//
// Convention: G solves curl curl G - k^2 G = delta I, so that
// Im[d.G(r,r).d] = k/(6 pi) with k = n k0 in a bulk medium of index n.
// Geometry: the slab occupies z1 < z < z2 and is clad on both sides by a
// medium of index cladding_index. In-plane separation rho, azimuth phi.
#pragma once

#include <variant>

#include "slabrad/types.hpp"

namespace slabrad {

struct LayerStack {
  double core_index = 3.5;
  double cladding_index = 1.0;
  double z1 = -100e-9;  // m
  double z2 = 100e-9;   // m
  double vacuum_wavelength = 980e-9;

  /// Slab of the given width centred on z = 0.
  static LayerStack centered(double core_index, double width, double vacuum_wavelength,
                             double cladding_index = 1.0);

  double thickness() const { return z2 - z1; }
  double mid_plane() const { return 0.5 * (z1 + z2); }
  double k0() const { return 2.0 * kPi / vacuum_wavelength; }
  double core_wavenumber() const { return core_index * k0(); }
  bool contains(double z) const { return z > z1 && z < z2; }
  void validate() const;
};

/// Sommerfeld-integral evaluation parameters (wavenumbers in units of k0).
struct QuadratureConfig {
  double detour_height = 0.05;  // depth of the elliptical detour below the real axis
  double k_max = 20.0;          // real-axis extent before tail extrapolation is allowed
  double rel_tol = 1e-8;
  int tail_terms = 8;           // half-period panels examined by the tail test

  void validate(double max_index) const;
};

struct GreensTensor {
  Mat3c homogeneous = Mat3c::Zero();
  Mat3c reflected_s = Mat3c::Zero();
  Mat3c reflected_p = Mat3c::Zero();
  /// At r == r' the homogeneous part carries only its (finite) imaginary part.
  bool coincident = false;

  /// Full tensor; throws DivergentAtCoincidence when coincident.
  Mat3c total() const;
  /// Imaginary part of the full tensor, finite everywhere.
  Mat3 imag() const;
  Mat3c reflected() const { return reflected_s + reflected_p; }
};

struct FresnelCoefficients {
  cplx rs1, rs2;  // s (TE) at the lower and upper interface
  cplx rp1, rp2;  // p (TM)
};

/// kz = sqrt(k^2 - k_rho^2) on the branch Im(kz) >= 0.
cplx longitudinal_wavenumber(double k, cplx k_rho);

/// Reflection amplitudes seen from inside the core at both interfaces.
FresnelCoefficients fresnel_coefficients(const LayerStack& stack, cplx k_rho);

/// 1 - r1 r2 exp(2 i kz l): vanishes at guided-mode poles.
cplx resummation_denominator(const LayerStack& stack, cplx k_rho, Polarization pol);

/// Round-trip resummation 1 / (1 - r1 r2 exp(2 i kz l)).
/// Throws PoleProximityError if the denominator magnitude is below 1e-12.
cplx resummation_factor(const LayerStack& stack, cplx k_rho, Polarization pol);

/// Closed-form homogeneous dyadic. Throws DivergentAtCoincidence if r == r'.
Mat3c green_homogeneous(const Vec3& r, const Vec3& rp, double index, double vacuum_wavelength);

/// Imaginary part of the homogeneous dyadic; finite at r == r'.
Mat3 green_homogeneous_imag(const Vec3& r, const Vec3& rp, double index,
                            double vacuum_wavelength);

/// Homogeneous dyadic through the plane-wave (Sommerfeld) representation,
/// i.e. the slab machinery with every reflection removed. Requires z != z'.
Mat3c green_homogeneous_spectral(const Vec3& r, const Vec3& rp, double index,
                                 double vacuum_wavelength, const QuadratureConfig& quad);

/// Radial Sommerfeld integrals of the reflected field between source height zp
/// and observation height z at in-plane distance rho. The azimuthal dependence
/// is restored by assemble_reflected().
struct ReflectedRadial {
  cplx a_s{}, b_s{};          // s: xx/yy isotropic and cos(2phi) parts
  cplx a_p{}, b_p{};          // p: same for the in-plane block
  cplx c_xz{}, c_zx{}, d_zz{};// p: in-plane/out-of-plane coupling and zz
};

ReflectedRadial reflected_radial(double rho, double z, double zp, const LayerStack& stack,
                                 const QuadratureConfig& quad);

/// {s-part, p-part} tensors for the in-plane direction phi.
std::pair<Mat3c, Mat3c> assemble_reflected(const ReflectedRadial& radial, double phi);

/// Full slab Green's tensor for positions strictly inside the core.
GreensTensor green_slab(const Vec3& r, const Vec3& rp, const LayerStack& stack,
                        const QuadratureConfig& quad);

struct HomogeneousMedium {
  double index = 3.5;
  double vacuum_wavelength = 980e-9;
};

struct SlabMedium {
  LayerStack stack;
  QuadratureConfig quad;
};

using Medium = std::variant<HomogeneousMedium, SlabMedium>;

double vacuum_wavelength(const Medium& medium);
/// Index of the medium hosting the emitters.
double host_index(const Medium& medium);
/// Emitter height used when none is given: slab mid-plane, or z = 0.
double default_emitter_height(const Medium& medium);

/// Green's tensor in either medium. Coincident points give imaginary-only
/// homogeneous parts (see GreensTensor::coincident).
GreensTensor green_tensor(const Medium& medium, const Vec3& r, const Vec3& rp);

/// Power radiated by two identical in-phase dipoles a distance d apart along x,
/// normalized to twice the single-dipole power.
double pair_radiated_power(double d, const Vec3& orientation, const Medium& medium);

}  // namespace slabrad
