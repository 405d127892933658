// Early-time superradiance criteria at full inversion, sweep maps, and the
// synthetic power-law d_min scaling check.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "slabrad/spin_model.hpp"

namespace slabrad {

/// d(gamma)/dt at t = 0 for the fully inverted state:
/// sum_{m != n} Gamma_mn^2 - sum_n Gamma_nn^2.
double gamma_dot_total(const CouplingMatrices& c);

struct DirectionalPhaseMatrix {
  Eigen::MatrixXd theta;  // theta_nm, antisymmetric
  double phi = 0.0;
  double k_used = 0.0;
};

/// Propagation constant of the exchanged photon: n k0 in bulk, k_g of TE0
/// (in-plane dipoles) or TM0 (dipoles along z) in the slab.
double directional_wavenumber(const EmitterArray& array);

DirectionalPhaseMatrix directional_phases(const Positions& positions, double phi, double k_used);
DirectionalPhaseMatrix directional_phases(const EmitterArray& array, double phi);

/// gamma0 [sum_{m != n} cos(theta_nm) Gamma_mn - sum_n Gamma_nn].
double gamma_dot_directional(const CouplingMatrices& c, const DirectionalPhaseMatrix& theta);

/// Same value for many directions without materializing theta matrices.
std::vector<double> gamma_dot_directional(const CouplingMatrices& c, const Positions& positions,
                                          double k_used, const std::vector<double>& phis);

enum class Criterion { Total, Directional };

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SuperradianceMap {
  SweepAxis rows;
  SweepAxis cols;
  Eigen::MatrixXd values;  // rows x cols, units gamma0^2; NaN where evaluation failed
  std::vector<std::string> failures;

  bool superradiant(int i, int j) const { return values(i, j) >= 0.0; }
  int failed_points() const { return int(values.array().isNaN().count()); }
};

/// Geometry for one row value (and column value, for size sweeps).
using GeometryFactory = std::function<EmitterArray(double row, double col)>;

/// Rows are a geometry axis (e.g. d/lambda), columns are directions phi.
/// The geometry factory receives (row, 0). Criterion::Total fills every
/// column of a row with the same value.
SuperradianceMap sweep_map(const GeometryFactory& geometry, const SweepAxis& rows,
                           const SweepAxis& phis, const GreensKernel& kernel,
                           Criterion criterion = Criterion::Directional);

/// Rows and columns are both geometry axes (e.g. N and d/lambda) evaluated at
/// a fixed direction phi.
SuperradianceMap sweep_grid(const GeometryFactory& geometry, const SweepAxis& rows,
                            const SweepAxis& cols, double phi, const GreensKernel& kernel,
                            Criterion criterion = Criterion::Directional);

struct ScalingPoint {
  int n = 0;
  double d_min = 0.0;  // in units of 1/k0
};

/// Largest spacing (units 1/k0) with sum_{m != n} Gamma_mn^2 >= N gamma1^2 for
/// the synthetic kernel Gamma_mn = gamma1 (k0 R_mn)^-alpha on a chain
/// (dimensions = 1) or an L x L square (dimensions = 2, N must be a square).
std::vector<ScalingPoint> dmin_scaling_check(double alpha, int dimensions,
                                             const std::vector<int>& n_list, double gamma1 = 1.0);

}  // namespace slabrad
