#include "slabrad/superradiance.hpp"

#include <cmath>
#include <limits>

#include "slabrad/parallel.hpp"
#include "slabrad/slab_modes.hpp"

namespace slabrad {

double gamma_dot_total(const CouplingMatrices& c) {
  const auto& g = c.Gamma;
  return g.squaredNorm() - 2.0 * g.diagonal().squaredNorm();
}

double directional_wavenumber(const EmitterArray& array) {
  if (const auto* bulk = std::get_if<HomogeneousMedium>(&array.medium)) {
    return bulk->index * 2.0 * kPi / bulk->vacuum_wavelength;
  }
  const auto& st = std::get<SlabMedium>(array.medium).stack;
  SlabSpec spec{st.core_index, st.cladding_index, st.thickness(), st.vacuum_wavelength};
  const auto& d = array.orientation;
  const Polarization pol =
      std::abs(d.z()) > std::hypot(d.x(), d.y()) ? Polarization::TM : Polarization::TE;
  return fundamental_mode(spec, pol).k_g;
}

DirectionalPhaseMatrix directional_phases(const Positions& positions, double phi,
                                          double k_used) {
  const Eigen::RowVectorXd proj =
      k_used * (std::cos(phi) * positions.row(0) + std::sin(phi) * positions.row(1));
  const auto n = positions.cols();
  DirectionalPhaseMatrix out;
  out.phi = phi;
  out.k_used = k_used;
  out.theta = proj.transpose().replicate(1, n) - proj.replicate(n, 1);
  return out;
}

DirectionalPhaseMatrix directional_phases(const EmitterArray& array, double phi) {
  return directional_phases(array.positions, phi, directional_wavenumber(array));
}

double gamma_dot_directional(const CouplingMatrices& c, const DirectionalPhaseMatrix& theta) {
  if (theta.theta.rows() != c.size()) throw DomainError("phase matrix size mismatch");
  const Eigen::MatrixXd w = theta.theta.array().cos().matrix();
  const double off = (w.array() * c.Gamma.array()).sum() - c.Gamma.diagonal().sum();
  return c.gamma0 * (off - c.Gamma.diagonal().sum());
}

std::vector<double> gamma_dot_directional(const CouplingMatrices& c, const Positions& positions,
                                          double k_used, const std::vector<double>& phis) {
  const int n = c.size();
  // Off-diagonal pairs with their separations, upper triangle only.
  std::vector<double> dx, dy, g;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      dx.push_back(positions(0, i) - positions(0, j));
      dy.push_back(positions(1, i) - positions(1, j));
      g.push_back(c.Gamma(i, j));
    }
  }
  const double diag = c.Gamma.diagonal().sum();
  std::vector<double> out(phis.size());
  for (std::size_t p = 0; p < phis.size(); ++p) {
    const double cx = k_used * std::cos(phis[p]), cy = k_used * std::sin(phis[p]);
    double s = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) s += std::cos(cx * dx[q] + cy * dy[q]) * g[q];
    out[p] = c.gamma0 * (2.0 * s - diag);
  }
  return out;
}

namespace {

void check_axis(const SweepAxis& axis) {
  if (axis.values.empty()) throw DomainError("empty sweep axis '" + axis.name + "'");
  for (std::size_t i = 1; i < axis.values.size(); ++i) {
    if (!(axis.values[i] > axis.values[i - 1])) {
      throw DomainError("sweep axis '" + axis.name + "' is not strictly increasing");
    }
  }
}

std::string describe(const SweepAxis& axis, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.17g", axis.name.c_str(), v);
  return buf;
}

}  // namespace

SuperradianceMap sweep_map(const GeometryFactory& geometry, const SweepAxis& rows,
                           const SweepAxis& phis, const GreensKernel& kernel,
                           Criterion criterion) {
  check_axis(rows);
  check_axis(phis);
  SuperradianceMap map{rows, phis, Eigen::MatrixXd::Zero(rows.values.size(), phis.values.size()), {}};
  std::vector<std::string> errors(rows.values.size());
  parallel_for(rows.values.size(), [&](std::size_t i) {
    try {
      const EmitterArray array = geometry(rows.values[i], 0.0);
      const CouplingMatrices c = coupling_matrices(array, kernel);
      if (criterion == Criterion::Total) {
        map.values.row(i).setConstant(gamma_dot_total(c));
      } else {
        const auto v = gamma_dot_directional(c, array.positions, directional_wavenumber(array),
                                             phis.values);
        for (std::size_t j = 0; j < v.size(); ++j) map.values(i, j) = v[j];
      }
    } catch (const Error& e) {
      map.values.row(i).setConstant(std::numeric_limits<double>::quiet_NaN());
      errors[i] = describe(rows, rows.values[i]) + ": " + e.what();
    }
  });
  for (auto& e : errors)
    if (!e.empty()) map.failures.push_back(std::move(e));
  return map;
}

SuperradianceMap sweep_grid(const GeometryFactory& geometry, const SweepAxis& rows,
                            const SweepAxis& cols, double phi, const GreensKernel& kernel,
                            Criterion criterion) {
  check_axis(rows);
  check_axis(cols);
  const std::size_t nr = rows.values.size(), nc = cols.values.size();
  SuperradianceMap map{rows, cols, Eigen::MatrixXd::Zero(nr, nc), {}};
  std::vector<std::string> errors(nr * nc);
  parallel_for(nr * nc, [&](std::size_t k) {
    const std::size_t i = k / nc, j = k % nc;
    try {
      const EmitterArray array = geometry(rows.values[i], cols.values[j]);
      const CouplingMatrices c = coupling_matrices(array, kernel);
      map.values(i, j) =
          criterion == Criterion::Total
              ? gamma_dot_total(c)
              : gamma_dot_directional(c, array.positions, directional_wavenumber(array), {phi})[0];
    } catch (const Error& e) {
      map.values(i, j) = std::numeric_limits<double>::quiet_NaN();
      errors[k] = describe(rows, rows.values[i]) + " " + describe(cols, cols.values[j]) + ": " +
                  e.what();
    }
  });
  for (auto& e : errors)
    if (!e.empty()) map.failures.push_back(std::move(e));
  return map;
}

std::vector<ScalingPoint> dmin_scaling_check(double alpha, int dimensions,
                                             const std::vector<int>& n_list, double gamma1) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (dimensions != 1 && dimensions != 2) throw DomainError("dimensions must be 1 or 2");
  std::vector<ScalingPoint> out;
  for (int n : n_list) {
    if (n < 1) throw DomainError("N must be positive");
    // lattice_sum = sum_{m != n} |r_mn / d|^(-2 alpha)
    double lattice_sum = 0.0;
    if (dimensions == 1) {
      for (int k = 1; k < n; ++k) lattice_sum += 2.0 * (n - k) * std::pow(double(k), -2.0 * alpha);
    } else {
      const int side = int(std::lround(std::sqrt(double(n))));
      if (side * side != n) throw DomainError("2D scaling needs N = L^2, got " + std::to_string(n));
      for (int a = -(side - 1); a < side; ++a) {
        for (int b = -(side - 1); b < side; ++b) {
          if (a == 0 && b == 0) continue;
          const double mult = double(side - std::abs(a)) * double(side - std::abs(b));
          lattice_sum += mult * std::pow(double(a * a + b * b), -alpha);
        }
      }
    }
    const double g2 = gamma1 * gamma1;
    auto excess = [&](double d) { return g2 * lattice_sum * std::pow(d, -2.0 * alpha) - n * g2; };
    ScalingPoint p{n, 0.0};
    // S(d) decreases monotonically; bracket then bisect.
    double lo = 1e-12, hi = 1.0;
    if (lattice_sum > 0.0 && excess(lo) >= 0.0) {
      while (excess(hi) >= 0.0) {
        lo = hi;
        hi *= 2.0;
      }
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) >= 0.0 ? lo : hi) = mid;
      }
      p.d_min = lo;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace slabrad
