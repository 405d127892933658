#include "slabrad/greens.hpp"

#include <cmath>
#include <vector>

#include "slabrad/bessel.hpp"
#include "slabrad/quadrature.hpp"

namespace slabrad {

namespace {

using Vec7c = Eigen::Matrix<cplx, 7, 1>;

constexpr double kPoleFloor = 1e-12;
constexpr int kMaxTailPanels = 20000;

struct Fresnel {
  cplx rs, rp;
};

// Reflection from the core (index n_in) into the cladding (index n_out).
Fresnel interface_reflection(cplx kz_in, cplx kz_out, double n_in, double n_out) {
  const double eps_in = n_in * n_in;
  const double eps_out = n_out * n_out;
  return {(kz_in - kz_out) / (kz_in + kz_out),
          (eps_out * kz_in - eps_in * kz_out) / (eps_out * kz_in + eps_in * kz_out)};
}

// Spectral integrand of the radial integrals, per unit u = k_rho / k0.
struct SpectralIntegrand {
  double k0;
  double n_core;
  double n_clad;
  double z1, z2;
  double z, zp;
  double rho;
  bool reflected;

  Vec7c operator()(cplx u) const {
    const cplx k_rho = u * k0;
    const double kc = n_core * k0;
    const cplx kz = longitudinal_wavenumber(kc, k_rho);
    const cplx pref = k0 * k_rho * kI / (8.0 * kPi * kPi * kz);

    cplx ws, spp, so, ss, sf;
    if (reflected) {
      const cplx kz_out = longitudinal_wavenumber(n_clad * k0, k_rho);
      const Fresnel r = interface_reflection(kz, kz_out, n_core, n_clad);
      const cplx e_a = std::exp(kI * kz * (z - z1));
      const cplx e_ap = std::exp(kI * kz * (zp - z1));
      const cplx e_b = std::exp(kI * kz * (z2 - z));
      const cplx e_bp = std::exp(kI * kz * (z2 - zp));
      const cplx e_l = std::exp(kI * kz * (z2 - z1));
      const cplx gs = 1.0 / (1.0 - r.rs * r.rs * e_l * e_l);
      const cplx gp = 1.0 / (1.0 - r.rp * r.rp * e_l * e_l);
      ws = gs * (r.rs * e_ap * e_a + r.rs * r.rs * e_l * e_bp * e_a + r.rs * e_bp * e_b +
                 r.rs * r.rs * e_l * e_ap * e_b);
      // Four ray families, labelled by the vertical direction of travel at the
      // observer and at the source (+ up, - down).
      const cplx f1 = gp * r.rp * e_ap * e_a;                 // obs +, src -
      const cplx f2 = gp * r.rp * r.rp * e_l * e_bp * e_a;    // obs +, src +
      const cplx f3 = gp * r.rp * e_bp * e_b;                 // obs -, src +
      const cplx f4 = gp * r.rp * r.rp * e_l * e_ap * e_b;    // obs -, src -
      spp = -f1 + f2 - f3 + f4;
      so = f1 + f2 - f3 - f4;
      ss = -f1 + f2 + f3 - f4;
      sf = f1 + f2 + f3 + f4;
    } else {
      const double sigma = z >= zp ? 1.0 : -1.0;
      const cplx f = std::exp(kI * kz * std::abs(z - zp));
      ws = f;
      spp = f;
      so = sigma * f;
      ss = sigma * f;
      sf = f;
    }
    const double kc2 = kc * kc;
    const cplx wpp = kz * kz / kc2 * spp;
    const cplx wpz = -kz * k_rho / kc2 * so;
    const cplx wzp = -kz * k_rho / kc2 * ss;
    const cplx wzz = k_rho * k_rho / kc2 * sf;

    std::array<cplx, 3> j;
    if (u.imag() == 0.0) {
      const auto jr = bessel_j012(u.real() * k0 * rho);
      j = {jr[0], jr[1], jr[2]};
    } else {
      j = bessel_j012(k_rho * rho);
    }
    Vec7c v;
    v << kPi * ws * j[0], kPi * ws * j[2], kPi * wpp * j[0], -kPi * wpp * j[2],
        2.0 * kPi * kI * wpz * j[1], 2.0 * kPi * kI * wzp * j[1], 2.0 * kPi * wzz * j[0];
    return pref * v;
  }
};

// Shortest vertical path that any term of the integrand travels; sets the
// exponential decay rate of the real-axis tail.
double decay_length(const SpectralIntegrand& f) {
  if (!f.reflected) return std::abs(f.z - f.zp);
  return std::min((f.z - f.z1) + (f.zp - f.z1), (f.z2 - f.z) + (f.z2 - f.zp));
}

Vec7c sommerfeld(const SpectralIntegrand& f, const QuadratureConfig& quad) {
  const double n_max = std::max(f.n_core, f.n_clad);
  const double span = n_max + 0.5;
  const double depth = quad.detour_height;
  const double floor = 1e-6 * f.n_core * f.k0 / (6.0 * kPi);

  // Elliptical detour below the real axis; guided poles and branch points sit
  // on the real axis and are approached from below by the lossless limit.
  auto on_detour = [&](double t) -> Vec7c {
    const cplx u(0.5 * span * (1.0 - std::cos(t)), -depth * std::sin(t));
    const cplx du(0.5 * span * std::sin(t), -depth * std::cos(t));
    return f(u) * du;
  };
  const double rho_k0 = f.rho * f.k0;
  const int detour_panels = 8 + 2 * int(std::ceil(span * rho_k0 / kPi));
  const auto detour = quad::integrate<Vec7c>(on_detour, 0.0, kPi, detour_panels, quad.rel_tol,
                                             quad.rel_tol * floor, 20000);
  Vec7c sum = detour.value;

  // Real axis, half-period panels of the Bessel kernel.
  const double decay = decay_length(f) * f.k0;
  const double decay_width = decay > 0.0 ? std::max(1.0, 2.0 / decay) : 1.0;
  const double width = rho_k0 > 0.0 ? std::min(kPi / rho_k0, decay_width) : decay_width;
  auto on_axis = [&](double u) -> Vec7c { return f(cplx(u, 0.0)); };

  std::vector<Vec7c> partial;
  std::vector<double> contrib;
  Vec7c last_estimate;
  bool have_estimate = false;
  double achieved = 1.0;
  const int window = 2 * quad.tail_terms + 1;
  double lo = span;
  for (int panel = 0; panel < kMaxTailPanels; ++panel) {
    const double hi = lo + width;
    const double scale = std::max(quad::max_norm(sum), floor);
    const auto piece =
        quad::integrate<Vec7c>(on_axis, lo, hi, 1, 0.0, 0.01 * quad.rel_tol * scale, 2000);
    sum += piece.value;
    partial.push_back(sum);
    contrib.push_back(quad::max_norm(piece.value));
    lo = hi;
    if (lo < quad.k_max) continue;

    const double tol = quad.rel_tol * std::max(quad::max_norm(sum), floor);
    const int n = int(contrib.size());
    if (n >= quad.tail_terms) {
      bool small = true;
      for (int i = n - quad.tail_terms; i < n; ++i) small = small && contrib[i] <= 0.1 * tol;
      if (small) return sum;
    }
    if (int(partial.size()) >= window) {
      Vec7c estimate;
      std::vector<cplx> seq(window);
      for (int c = 0; c < 7; ++c) {
        for (int i = 0; i < window; ++i) seq[i] = partial[partial.size() - window + i](c);
        estimate(c) = quad::wynn_epsilon(seq);
      }
      if (have_estimate) {
        const double change = quad::max_norm<Vec7c>(estimate - last_estimate);
        achieved = change / std::max(quad::max_norm(estimate), floor);
        if (change <= 0.1 * tol) return estimate;
      }
      last_estimate = estimate;
      have_estimate = true;
    }
  }
  throw ConvergenceError("Sommerfeld tail extrapolation did not converge", achieved);
}

ReflectedRadial to_radial(const Vec7c& v) {
  return {v(0), v(1), v(2), v(3), v(4), v(5), v(6)};
}

void check_inside(const LayerStack& stack, double z) {
  if (!stack.contains(z)) throw DomainError("position lies outside the slab core");
}

}  // namespace

LayerStack LayerStack::centered(double core_index, double width, double vacuum_wavelength,
                                double cladding_index) {
  return {core_index, cladding_index, -0.5 * width, 0.5 * width, vacuum_wavelength};
}

void LayerStack::validate() const {
  if (!(cladding_index >= 1.0) || !(core_index >= cladding_index)) {
    throw DomainError("layer stack requires core_index >= cladding_index >= 1");
  }
  if (!(z2 > z1) || !(vacuum_wavelength > 0.0)) {
    throw DomainError("layer stack requires z2 > z1 and a positive wavelength");
  }
}

void QuadratureConfig::validate(double max_index) const {
  if (!(detour_height > 0.0)) throw DomainError("detour_height must be positive");
  if (!(k_max > max_index)) throw DomainError("k_max must exceed the largest index");
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (tail_terms < 4) throw DomainError("tail_terms must be at least 4");
}

Mat3c GreensTensor::total() const {
  if (coincident) throw DivergentAtCoincidence();
  return homogeneous + reflected_s + reflected_p;
}

Mat3 GreensTensor::imag() const { return (homogeneous + reflected_s + reflected_p).imag(); }

cplx longitudinal_wavenumber(double k, cplx k_rho) {
  cplx kz = std::sqrt(cplx(k * k, 0.0) - k_rho * k_rho);
  if (kz.imag() < 0.0 || (kz.imag() == 0.0 && kz.real() < 0.0)) kz = -kz;
  return kz;
}

FresnelCoefficients fresnel_coefficients(const LayerStack& stack, cplx k_rho) {
  const double k0 = stack.k0();
  const cplx kz_in = longitudinal_wavenumber(stack.core_index * k0, k_rho);
  const cplx kz_out = longitudinal_wavenumber(stack.cladding_index * k0, k_rho);
  const Fresnel r = interface_reflection(kz_in, kz_out, stack.core_index, stack.cladding_index);
  return {r.rs, r.rs, r.rp, r.rp};
}

cplx resummation_denominator(const LayerStack& stack, cplx k_rho, Polarization pol) {
  const auto r = fresnel_coefficients(stack, k_rho);
  const cplx kz = longitudinal_wavenumber(stack.core_wavenumber(), k_rho);
  const cplx round_trip = std::exp(2.0 * kI * kz * stack.thickness());
  return pol == Polarization::TE ? 1.0 - round_trip * r.rs1 * r.rs2
                                 : 1.0 - round_trip * r.rp1 * r.rp2;
}

cplx resummation_factor(const LayerStack& stack, cplx k_rho, Polarization pol) {
  const cplx den = resummation_denominator(stack, k_rho, pol);
  if (std::abs(den) < kPoleFloor) throw PoleProximityError(std::abs(den));
  return 1.0 / den;
}

namespace {

// Spherical h0 and h2 of the first kind. Closed forms away from the origin;
// the library recurrences give up at large arguments.
std::pair<cplx, cplx> spherical_h02(double x) {
  if (x < 1.0) {
    return {cplx(std::sph_bessel(0, x), std::sph_neumann(0, x)),
            cplx(std::sph_bessel(2, x), std::sph_neumann(2, x))};
  }
  const double s = std::sin(x), c = std::cos(x);
  const double j0 = s / x, y0 = -c / x;
  const double j2 = (3.0 / (x * x * x) - 1.0 / x) * s - 3.0 * c / (x * x);
  const double y2 = (-3.0 / (x * x * x) + 1.0 / x) * c - 3.0 * s / (x * x);
  return {cplx(j0, y0), cplx(j2, y2)};
}

}  // namespace

Mat3c green_homogeneous(const Vec3& r, const Vec3& rp, double index, double vacuum_wavelength) {
  const Vec3 sep = r - rp;
  const double dist = sep.norm();
  if (dist == 0.0) throw DivergentAtCoincidence();
  const double k = index * 2.0 * kPi / vacuum_wavelength;
  const double x = k * dist;
  const Vec3 u = sep / dist;
  const auto [h0, h2] = spherical_h02(x);
  const cplx pref = kI * k / (6.0 * kPi);
  return pref * ((h0 - 0.5 * h2) * Mat3c::Identity() + 1.5 * h2 * (u * u.transpose()).cast<cplx>());
}

Mat3 green_homogeneous_imag(const Vec3& r, const Vec3& rp, double index,
                            double vacuum_wavelength) {
  const double k = index * 2.0 * kPi / vacuum_wavelength;
  const Vec3 sep = r - rp;
  const double dist = sep.norm();
  if (dist == 0.0) return k / (6.0 * kPi) * Mat3::Identity();
  const double x = k * dist;
  const Vec3 u = sep / dist;
  const auto [h0, h2] = spherical_h02(x);
  const double j0 = h0.real();
  const double j2 = h2.real();
  return k / (6.0 * kPi) * ((j0 - 0.5 * j2) * Mat3::Identity() + 1.5 * j2 * u * u.transpose());
}

Mat3c green_homogeneous_spectral(const Vec3& r, const Vec3& rp, double index,
                                 double vacuum_wavelength, const QuadratureConfig& quad) {
  if (r.z() == rp.z()) {
    throw DomainError("plane-wave route needs z != z' for absolute convergence");
  }
  quad.validate(index);
  const Vec3 sep = r - rp;
  const double rho = std::hypot(sep.x(), sep.y());
  const double phi = rho > 0.0 ? std::atan2(sep.y(), sep.x()) : 0.0;
  const SpectralIntegrand f{2.0 * kPi / vacuum_wavelength, index, index, 0.0, 0.0,
                            r.z(), rp.z(), rho, false};
  const auto [s, p] = assemble_reflected(to_radial(sommerfeld(f, quad)), phi);
  return s + p;
}

ReflectedRadial reflected_radial(double rho, double z, double zp, const LayerStack& stack,
                                 const QuadratureConfig& quad) {
  stack.validate();
  quad.validate(stack.core_index);
  check_inside(stack, z);
  check_inside(stack, zp);
  if (stack.core_index == stack.cladding_index) return {};
  const SpectralIntegrand f{stack.k0(), stack.core_index, stack.cladding_index, stack.z1,
                            stack.z2, z, zp, rho, true};
  return to_radial(sommerfeld(f, quad));
}

std::pair<Mat3c, Mat3c> assemble_reflected(const ReflectedRadial& g, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  const double c2 = std::cos(2.0 * phi), s2 = std::sin(2.0 * phi);
  Mat3c gs = Mat3c::Zero();
  gs(0, 0) = g.a_s + g.b_s * c2;
  gs(1, 1) = g.a_s - g.b_s * c2;
  gs(0, 1) = gs(1, 0) = g.b_s * s2;
  Mat3c gp;
  gp(0, 0) = g.a_p + g.b_p * c2;
  gp(1, 1) = g.a_p - g.b_p * c2;
  gp(0, 1) = gp(1, 0) = g.b_p * s2;
  gp(0, 2) = g.c_xz * c;
  gp(1, 2) = g.c_xz * s;
  gp(2, 0) = g.c_zx * c;
  gp(2, 1) = g.c_zx * s;
  gp(2, 2) = g.d_zz;
  return {gs, gp};
}

GreensTensor green_slab(const Vec3& r, const Vec3& rp, const LayerStack& stack,
                        const QuadratureConfig& quad) {
  const Vec3 sep = r - rp;
  const double rho = std::hypot(sep.x(), sep.y());
  const double phi = rho > 0.0 ? std::atan2(sep.y(), sep.x()) : 0.0;
  const auto radial = reflected_radial(rho, r.z(), rp.z(), stack, quad);
  GreensTensor g;
  std::tie(g.reflected_s, g.reflected_p) = assemble_reflected(radial, phi);
  if (sep.norm() == 0.0) {
    g.coincident = true;
    g.homogeneous = kI * green_homogeneous_imag(r, rp, stack.core_index, stack.vacuum_wavelength)
                             .cast<cplx>();
  } else {
    g.homogeneous = green_homogeneous(r, rp, stack.core_index, stack.vacuum_wavelength);
  }
  return g;
}

double vacuum_wavelength(const Medium& medium) {
  return std::visit(
      [](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, HomogeneousMedium>) {
          return m.vacuum_wavelength;
        } else {
          return m.stack.vacuum_wavelength;
        }
      },
      medium);
}

double host_index(const Medium& medium) {
  return std::visit(
      [](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, HomogeneousMedium>) {
          return m.index;
        } else {
          return m.stack.core_index;
        }
      },
      medium);
}

double default_emitter_height(const Medium& medium) {
  if (const auto* slab = std::get_if<SlabMedium>(&medium)) return slab->stack.mid_plane();
  return 0.0;
}

GreensTensor green_tensor(const Medium& medium, const Vec3& r, const Vec3& rp) {
  if (const auto* slab = std::get_if<SlabMedium>(&medium)) {
    return green_slab(r, rp, slab->stack, slab->quad);
  }
  const auto& bulk = std::get<HomogeneousMedium>(medium);
  GreensTensor g;
  if ((r - rp).norm() == 0.0) {
    g.coincident = true;
    g.homogeneous =
        kI * green_homogeneous_imag(r, rp, bulk.index, bulk.vacuum_wavelength).cast<cplx>();
  } else {
    g.homogeneous = green_homogeneous(r, rp, bulk.index, bulk.vacuum_wavelength);
  }
  return g;
}

double pair_radiated_power(double d, const Vec3& orientation, const Medium& medium) {
  if (!(d >= 0.0)) throw DomainError("separation must be non-negative");
  const Vec3 dip = orientation.normalized();
  const double z = default_emitter_height(medium);
  const Vec3 r1(0.0, 0.0, z);
  const Vec3 r2(d, 0.0, z);
  const double self = dip.dot(green_tensor(medium, r1, r1).imag() * dip);
  if (d == 0.0) return 2.0;
  const double cross = dip.dot(green_tensor(medium, r1, r2).imag() * dip);
  return 1.0 + cross / self;
}

}  // namespace slabrad
