// Green's tensor provider shared by the coupling, sweep and ensemble code.
//
// Slab evaluations are cached by quantized (rho, z, z'); lattices only have a
// handful of distinct pair distances. For continuous (disordered) geometries a
// plane of emitters can be tabulated once and interpolated.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "slabrad/greens.hpp"

namespace slabrad {

/// Reflected radial integrals on a uniform rho grid for one emitter plane,
/// interpolated with 4-point cubics (parity-mirrored at rho = 0).
class RadialTable {
 public:
  RadialTable(const LayerStack& stack, const QuadratureConfig& quad, double z, double rho_max,
              double step);

  double height() const { return z_; }
  double rho_max() const { return rho_max_; }
  bool covers(double rho) const { return rho >= 0.0 && rho <= rho_max_; }
  ReflectedRadial operator()(double rho) const;

 private:
  double z_;
  double rho_max_;
  double step_;
  std::vector<ReflectedRadial> nodes_;
};

class GreensKernel {
 public:
  explicit GreensKernel(Medium medium);

  const Medium& medium() const { return medium_; }
  double vacuum_wavelength() const { return slabrad::vacuum_wavelength(medium_); }
  double k0() const { return 2.0 * kPi / vacuum_wavelength(); }
  bool is_slab() const { return std::holds_alternative<SlabMedium>(medium_); }

  /// Green's tensor G(r, r'); coincident points carry imaginary-only
  /// homogeneous parts.
  GreensTensor tensor(const Vec3& r, const Vec3& rp) const;

  /// d_obs . G(r, r') . d_src
  cplx projected(const Vec3& r, const Vec3& rp, const Vec3& d_obs, const Vec3& d_src) const;

  /// Interpolate slab reflections for emitters in the plane z with in-plane
  /// separations up to rho_max. No effect for homogeneous media.
  void tabulate(double z, double rho_max, double step);

  std::size_t cache_size() const;

 private:
  using Key = std::tuple<long long, long long, long long>;
  ReflectedRadial radial(double rho, double z, double zp) const;

  Medium medium_;
  double quantum_;
  mutable std::mutex mutex_;
  mutable std::map<Key, ReflectedRadial> cache_;
  std::shared_ptr<const RadialTable> table_;
};

}  // namespace slabrad
