// Lattices, positional disorder and disorder-averaged directional criteria.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slabrad/spin_model.hpp"

namespace slabrad {

enum class LatticeKind { Chain, Square, Hexagonal };

LatticeKind parse_lattice_kind(const std::string& name);
const char* to_string(LatticeKind kind);

struct LatticeSpec {
  LatticeKind kind = LatticeKind::Chain;
  int sites = 5;         // square: must be a perfect square; hexagonal: 24
  double spacing = 1.0;  // nearest-neighbour distance, meters
  double z = 0.0;        // plane height
};

/// Sites in the XY plane at height z, centroid at the origin.
Positions generate_lattice(const LatticeSpec& spec);

struct DisorderSpec {
  double sigma = 0.0;  // in units of the spacing
  int realizations = 500;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Standard normal draw addressed by a counter tuple; pure function.
double gaussian(std::uint64_t seed, std::uint64_t realization, std::uint64_t attempt,
                std::uint64_t site, std::uint64_t coordinate);

/// Uniform draw in (0, 1] addressed the same way.
double uniform01(std::uint64_t seed, std::uint64_t realization, std::uint64_t attempt,
                 std::uint64_t site, std::uint64_t coordinate);

struct DisorderDraw {
  Positions positions;
  int rejected = 0;  // redraws caused by near-coincident sites
};

/// XY Gaussian displacements of std sigma*spacing, reproducible per realization.
DisorderDraw apply_disorder(const Positions& positions, double spacing, const DisorderSpec& spec,
                            int realization);

struct DisorderCurve {
  std::vector<double> phi;
  std::vector<double> mean;
  std::vector<double> stderr_;
  int used = 0;
  int failed = 0;
  int rejected = 0;
  std::vector<std::string> failures;
};

/// Order-independent sum: sorts then sums pairwise.
double stable_sum(std::vector<double> values);

/// Mean and standard error of gamma_dot_directional over realizations. The
/// template array supplies orientation, medium and the ordered positions.
/// sigma = 0 returns the ordered result with stderr 0.
DisorderCurve disorder_average(const EmitterArray& lattice, double spacing,
                               const DisorderSpec& disorder, const std::vector<double>& phis);

}  // namespace slabrad
