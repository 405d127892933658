#include "slabrad/slab_modes.hpp"

#include <cmath>

namespace slabrad {

namespace {

constexpr double kBracketInset = 1e-9;
constexpr int kScanPoints = 4096;

double transverse_phase(const SlabSpec& s, Polarization pol, double n_eff) {
  const double k0 = s.k0();
  const double kappa = k0 * std::sqrt(s.core_index * s.core_index - n_eff * n_eff);
  const double gamma = k0 * std::sqrt(n_eff * n_eff - s.cladding_index * s.cladding_index);
  const double eta = pol == Polarization::TE
                         ? 1.0
                         : (s.core_index * s.core_index) / (s.cladding_index * s.cladding_index);
  return kappa * s.width - 2.0 * std::atan2(eta * gamma, kappa);
}

}  // namespace

void SlabSpec::validate() const {
  if (!(cladding_index >= 1.0) || !(core_index > cladding_index)) {
    throw DomainError("slab requires core_index > cladding_index >= 1");
  }
  if (!(width > 0.0) || !(vacuum_wavelength > 0.0)) {
    throw DomainError("slab width and vacuum wavelength must be positive");
  }
}

double dispersion_residual(const SlabSpec& spec, Polarization pol, double n_eff) {
  if (!(n_eff > spec.cladding_index && n_eff < spec.core_index)) {
    throw DomainError("n_eff trial must lie strictly between cladding and core indices");
  }
  return std::sin(transverse_phase(spec, pol, n_eff));
}

std::vector<GuidedMode> find_modes(const SlabSpec& spec, Polarization pol) {
  spec.validate();
  const double lo = spec.cladding_index + kBracketInset;
  const double hi = spec.core_index - kBracketInset;
  const double step = (hi - lo) / (kScanPoints - 1);
  auto f = [&](double x) { return dispersion_residual(spec, pol, x); };

  std::vector<GuidedMode> modes;
  double x_prev = hi;
  double f_prev = f(hi);
  // Scan from the core side so roots come out in descending n_eff.
  for (int i = kScanPoints - 2; i >= 0; --i) {
    const double x = lo + i * step;
    const double fx = f(x);
    if ((fx < 0.0) != (f_prev < 0.0) || fx == 0.0) {
      double a = x, b = x_prev, fa = fx, fb = f_prev;
      if (fa == 0.0) {
        b = a;
      } else {
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = f(m);
          if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
            fb = fm;
          }
        }
        // Secant polish inside the final bracket.
        if (fb != fa) {
          const double s = b - fb * (b - a) / (fb - fa);
          if (s >= a && s <= b && std::abs(f(s)) <= std::min(std::abs(fa), std::abs(fb))) a = b = s;
        }
      }
      const double root = std::abs(fa) < std::abs(fb) ? a : b;
      if (root - spec.cladding_index > kBracketInset) {
        modes.push_back({pol, int(modes.size()), root, root * spec.k0()});
      }
    }
    x_prev = x;
    f_prev = fx;
  }
  if (modes.empty()) {
    throw DomainError(std::string("no guided ") + to_string(pol) +
                      " mode resolved within the scan bracket");
  }
  return modes;
}

GuidedMode fundamental_mode(const SlabSpec& spec, Polarization pol) {
  return find_modes(spec, pol).front();
}

}  // namespace slabrad
