#include "slabrad/kernel.hpp"

#include <cmath>

#include "slabrad/parallel.hpp"

namespace slabrad {

namespace {

constexpr int kComponents = 7;

cplx& component(ReflectedRadial& r, int i) {
  cplx* fields[kComponents] = {&r.a_s, &r.b_s, &r.a_p, &r.b_p, &r.c_xz, &r.c_zx, &r.d_zz};
  return *fields[i];
}

cplx component(const ReflectedRadial& r, int i) {
  return component(const_cast<ReflectedRadial&>(r), i);
}

// c_xz and c_zx carry J1 and are odd in rho; the rest are even.
double parity(int i) { return (i == 4 || i == 5) ? -1.0 : 1.0; }

}  // namespace

RadialTable::RadialTable(const LayerStack& stack, const QuadratureConfig& quad, double z,
                         double rho_max, double step)
    : z_(z), rho_max_(rho_max), step_(step) {
  if (!(step > 0.0) || !(rho_max >= 0.0)) throw DomainError("invalid table extent");
  const std::size_t count = std::size_t(std::ceil(rho_max / step)) + 3;
  nodes_.resize(count);
  parallel_for(count, [&](std::size_t i) {
    nodes_[i] = reflected_radial(double(i) * step, z, z, stack, quad);
  });
}

ReflectedRadial RadialTable::operator()(double rho) const {
  if (!covers(rho)) throw DomainError("rho outside tabulated range");
  const double x = rho / step_;
  const int i = std::min(int(x), int(nodes_.size()) - 3);
  const double t = x - i;
  // Lagrange weights for nodes i-1, i, i+1, i+2 at offset t from node i.
  const double w[4] = {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                       -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
  ReflectedRadial out;
  for (int c = 0; c < kComponents; ++c) {
    cplx v = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int j = i - 1 + k;
      const cplx node = j >= 0 ? component(nodes_[j], c) : parity(c) * component(nodes_[-j], c);
      v += w[k] * node;
    }
    component(out, c) = v;
  }
  return out;
}

GreensKernel::GreensKernel(Medium medium)
    : medium_(std::move(medium)), quantum_(1e-9 * slabrad::vacuum_wavelength(medium_)) {
  if (const auto* slab = std::get_if<SlabMedium>(&medium_)) {
    slab->stack.validate();
    slab->quad.validate(slab->stack.core_index);
  } else {
    const auto& bulk = std::get<HomogeneousMedium>(medium_);
    if (!(bulk.index >= 1.0) || !(bulk.vacuum_wavelength > 0.0)) {
      throw DomainError("homogeneous medium needs index >= 1 and a positive wavelength");
    }
  }
}

void GreensKernel::tabulate(double z, double rho_max, double step) {
  if (const auto* slab = std::get_if<SlabMedium>(&medium_)) {
    table_ = std::make_shared<RadialTable>(slab->stack, slab->quad, z, rho_max, step);
  }
}

std::size_t GreensKernel::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

ReflectedRadial GreensKernel::radial(double rho, double z, double zp) const {
  const auto& slab = std::get<SlabMedium>(medium_);
  if (table_ && z == table_->height() && zp == table_->height() && table_->covers(rho)) {
    return (*table_)(rho);
  }
  const Key key{std::llround(rho / quantum_), std::llround(z / quantum_),
                std::llround(zp / quantum_)};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  // Evaluated at the quantized coordinates so the value depends on the key only.
  const auto value = reflected_radial(double(std::get<0>(key)) * quantum_,
                                      double(std::get<1>(key)) * quantum_,
                                      double(std::get<2>(key)) * quantum_, slab.stack, slab.quad);
  std::lock_guard lock(mutex_);
  cache_.emplace(key, value);
  return value;
}

GreensTensor GreensKernel::tensor(const Vec3& r, const Vec3& rp) const {
  const auto* slab = std::get_if<SlabMedium>(&medium_);
  if (!slab) return green_tensor(medium_, r, rp);
  if (!slab->stack.contains(r.z()) || !slab->stack.contains(rp.z())) {
    throw DomainError("position lies outside the slab core");
  }
  const Vec3 sep = r - rp;
  const double rho = std::hypot(sep.x(), sep.y());
  const double phi = rho > 0.0 ? std::atan2(sep.y(), sep.x()) : 0.0;
  GreensTensor g;
  std::tie(g.reflected_s, g.reflected_p) = assemble_reflected(radial(rho, r.z(), rp.z()), phi);
  const auto& st = slab->stack;
  if (sep.norm() == 0.0) {
    g.coincident = true;
    g.homogeneous =
        kI * green_homogeneous_imag(r, rp, st.core_index, st.vacuum_wavelength).cast<cplx>();
  } else {
    g.homogeneous = green_homogeneous(r, rp, st.core_index, st.vacuum_wavelength);
  }
  return g;
}

cplx GreensKernel::projected(const Vec3& r, const Vec3& rp, const Vec3& d_obs,
                             const Vec3& d_src) const {
  const GreensTensor g = tensor(r, rp);
  const Eigen::Vector3cd src = d_src.cast<cplx>();
  const Eigen::Vector3cd obs = d_obs.cast<cplx>();
  if (g.coincident) {
    return cplx(0.0, d_obs.dot(g.imag() * d_src));
  }
  return obs.dot(g.total() * src);
}

}  // namespace slabrad
