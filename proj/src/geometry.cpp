#include "slabrad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slabrad/parallel.hpp"
#include "slabrad/superradiance.hpp"

namespace slabrad {

LatticeKind parse_lattice_kind(const std::string& name) {
  if (name == "chain") return LatticeKind::Chain;
  if (name == "square") return LatticeKind::Square;
  if (name == "hexagonal") return LatticeKind::Hexagonal;
  throw DomainError("unknown lattice kind '" + name + "' (chain|square|hexagonal)");
}

const char* to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Chain: return "chain";
    case LatticeKind::Square: return "square";
    case LatticeKind::Hexagonal: return "hexagonal";
  }
  return "?";
}

Positions generate_lattice(const LatticeSpec& spec) {
  if (!(spec.spacing > 0.0)) throw DomainError("lattice spacing must be positive");
  if (spec.sites < 1) throw DomainError("lattice needs at least one site");
  const double d = spec.spacing;
  std::vector<Vec3> sites;
  switch (spec.kind) {
    case LatticeKind::Chain:
      for (int i = 0; i < spec.sites; ++i) sites.emplace_back((i - 0.5 * (spec.sites - 1)) * d, 0.0, spec.z);
      break;
    case LatticeKind::Square: {
      const int side = int(std::lround(std::sqrt(double(spec.sites))));
      if (side * side != spec.sites) {
        throw DomainError("square lattice needs a perfect-square site count, got " +
                          std::to_string(spec.sites));
      }
      for (int j = 0; j < side; ++j)
        for (int i = 0; i < side; ++i)
          sites.emplace_back((i - 0.5 * (side - 1)) * d, (j - 0.5 * (side - 1)) * d, spec.z);
      break;
    }
    case LatticeKind::Hexagonal: {
      if (spec.sites != 24) {
        throw DomainError("hexagonal lattice supports 24 sites only, got " +
                          std::to_string(spec.sites));
      }
      const int rows[] = {4, 5, 6, 5, 4};
      for (int r = 0; r < 5; ++r) {
        const double y = (r - 2) * std::sqrt(3.0) / 2.0 * d;
        for (int i = 0; i < rows[r]; ++i) sites.emplace_back((i - 0.5 * (rows[r] - 1)) * d, y, spec.z);
      }
      break;
    }
  }
  Positions p(3, Eigen::Index(sites.size()));
  for (std::size_t i = 0; i < sites.size(); ++i) p.col(Eigen::Index(i)) = sites[i];
  return p;
}

void DisorderSpec::validate() const {
  if (!(sigma >= 0.0)) throw DomainError("disorder sigma must be >= 0");
  if (realizations < 1) throw DomainError("disorder needs at least one realization");
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// (0, 1]
double unit(std::uint64_t bits) { return (double(bits >> 11) + 1.0) * 0x1.0p-53; }

}  // namespace

namespace {

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t realization, std::uint64_t attempt,
                           std::uint64_t site, std::uint64_t coordinate) {
  std::uint64_t h = splitmix(seed);
  for (std::uint64_t word : {realization, attempt, site, coordinate}) h = splitmix(h ^ word);
  return h;
}

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t realization, std::uint64_t attempt,
                 std::uint64_t site, std::uint64_t coordinate) {
  return unit(splitmix(counter_hash(seed, realization, attempt, site, coordinate) ^ 0x3ULL));
}

double gaussian(std::uint64_t seed, std::uint64_t realization, std::uint64_t attempt,
                std::uint64_t site, std::uint64_t coordinate) {
  const std::uint64_t h = counter_hash(seed, realization, attempt, site, coordinate);
  const double u1 = unit(splitmix(h ^ 0x1ULL));
  const double u2 = unit(splitmix(h ^ 0x2ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

DisorderDraw apply_disorder(const Positions& positions, double spacing, const DisorderSpec& spec,
                            int realization) {
  spec.validate();
  if (realization < 0 || realization >= spec.realizations) {
    throw DomainError("realization index out of range");
  }
  DisorderDraw out{positions, 0};
  if (spec.sigma == 0.0) return out;
  const double scale = spec.sigma * spacing;
  const auto n = positions.cols();
  for (std::uint64_t attempt = 0;; ++attempt) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int c = 0; c < 2; ++c) {
        out.positions(c, i) =
            positions(c, i) + scale * gaussian(spec.seed, std::uint64_t(realization), attempt,
                                               std::uint64_t(i), std::uint64_t(c));
      }
    }
    bool clash = false;
    for (Eigen::Index i = 0; i < n && !clash; ++i)
      for (Eigen::Index j = i + 1; j < n && !clash; ++j)
        clash = (out.positions.col(i) - out.positions.col(j)).norm() < 1e-6 * spacing;
    if (!clash) return out;
    if (++out.rejected > 1000) throw Error("disorder draw keeps producing coincident sites");
  }
}

double stable_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  while (values.size() > 1) {
    std::vector<double> next((values.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = values[2 * i] + (2 * i + 1 < values.size() ? values[2 * i + 1] : 0.0);
    }
    values.swap(next);
  }
  return values.empty() ? 0.0 : values[0];
}

DisorderCurve disorder_average(const EmitterArray& lattice, double spacing,
                               const DisorderSpec& disorder, const std::vector<double>& phis) {
  disorder.validate();
  lattice.validate();
  DisorderCurve curve;
  curve.phi = phis;
  const double k_used = directional_wavenumber(lattice);
  if (disorder.sigma == 0.0) {
    const auto c = coupling_matrices(lattice);
    curve.mean = gamma_dot_directional(c, lattice.positions, k_used, phis);
    curve.stderr_.assign(phis.size(), 0.0);
    curve.used = 1;
    return curve;
  }
  GreensKernel kernel(lattice.medium);
  if (kernel.is_slab()) {
    // Separations beyond the table fall back to direct evaluation.
    const auto& p = lattice.positions;
    double extent = 0.0;
    for (Eigen::Index i = 0; i < p.cols(); ++i)
      for (Eigen::Index j = i + 1; j < p.cols(); ++j)
        extent = std::max(extent, (p.col(i) - p.col(j)).norm());
    const double lambda = kernel.vacuum_wavelength() / host_index(lattice.medium);
    kernel.tabulate(p(2, 0), extent + 12.0 * disorder.sigma * spacing, lambda / 64.0);
  }
  const std::size_t r = std::size_t(disorder.realizations);
  std::vector<std::vector<double>> rows(r);
  std::vector<std::string> errors(r);
  std::vector<int> rejected(r, 0);
  parallel_for(r, [&](std::size_t k) {
    try {
      const auto draw = apply_disorder(lattice.positions, spacing, disorder, int(k));
      rejected[k] = draw.rejected;
      EmitterArray a = lattice;
      a.positions = draw.positions;
      rows[k] = gamma_dot_directional(coupling_matrices(a, kernel), a.positions, k_used, phis);
    } catch (const Error& e) {
      errors[k] = "realization " + std::to_string(k) + ": " + e.what();
    }
  });
  std::vector<std::size_t> good;
  for (std::size_t k = 0; k < r; ++k) {
    curve.rejected += rejected[k];
    if (errors[k].empty()) {
      good.push_back(k);
    } else {
      ++curve.failed;
      curve.failures.push_back(errors[k]);
    }
  }
  curve.used = int(good.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  curve.mean.assign(phis.size(), nan);
  curve.stderr_.assign(phis.size(), nan);
  if (good.empty()) return curve;
  std::vector<double> column(good.size());
  for (std::size_t p = 0; p < phis.size(); ++p) {
    for (std::size_t g = 0; g < good.size(); ++g) column[g] = rows[good[g]][p];
    const double mean = stable_sum(column) / double(good.size());
    curve.mean[p] = mean;
    if (good.size() > 1) {
      std::vector<double> dev(good.size());
      for (std::size_t g = 0; g < good.size(); ++g) dev[g] = (column[g] - mean) * (column[g] - mean);
      curve.stderr_[p] = std::sqrt(stable_sum(dev) / double(good.size() - 1) / double(good.size()));
    } else {
      curve.stderr_[p] = 0.0;
    }
  }
  return curve;
}

}  // namespace slabrad
