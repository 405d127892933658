// Coherent (J) and dissipative (Gamma) emitter couplings and the collective
// decay spectrum.
#pragma once

#include <Eigen/Dense>

#include "slabrad/kernel.hpp"

namespace slabrad {

struct EmitterArray {
  Positions positions;                  // 3 x N, meters
  Vec3 orientation = Vec3::UnitY();     // shared unit dipole
  double gamma0 = 1.0;                  // free-space rate, sets the rate unit
  Medium medium = HomogeneousMedium{};

  int size() const { return int(positions.cols()); }
  void validate() const;
};

struct CouplingMatrices {
  Eigen::MatrixXd J;      // zero diagonal
  Eigen::MatrixXd Gamma;
  double gamma_eps = 0.0; // single-emitter rate in the host environment
  double gamma0 = 1.0;

  int size() const { return int(Gamma.rows()); }
};

struct CollectiveSpectrum {
  Eigen::VectorXd rates;    // descending
  Eigen::MatrixXd vectors;  // columns; first nonzero entry positive
};

/// Gamma_mn = 6 pi gamma0 Im(d.G.d)/k0 and J_mn = -3 pi gamma0 Re(d.G.d)/k0.
CouplingMatrices coupling_matrices(const EmitterArray& array, const GreensKernel& kernel);
CouplingMatrices coupling_matrices(const EmitterArray& array);

/// Builds matrices directly from given entries (diagonal of gamma must be uniform).
template <typename Derived1, typename Derived2>
CouplingMatrices make_couplings(const Eigen::MatrixBase<Derived1>& J,
                                const Eigen::MatrixBase<Derived2>& Gamma, double gamma0 = 1.0) {
  CouplingMatrices c;
  c.J = 0.5 * (J + J.transpose());
  c.J.diagonal().setZero();
  c.Gamma = 0.5 * (Gamma + Gamma.transpose());
  c.gamma_eps = c.Gamma.rows() ? c.Gamma.diagonal().mean() : 0.0;
  c.gamma0 = gamma0;
  return c;
}

CollectiveSpectrum collective_spectrum(const CouplingMatrices& c);

}  // namespace slabrad
