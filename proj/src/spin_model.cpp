#include "slabrad/spin_model.hpp"

#include <cmath>
#include <string>

#include "slabrad/parallel.hpp"

namespace slabrad {

void EmitterArray::validate() const {
  if (size() < 1) throw DomainError("emitter array is empty");
  if (std::abs(orientation.norm() - 1.0) > 1e-12) throw DomainError("dipole orientation must be a unit vector");
  if (!(gamma0 > 0.0)) throw DomainError("gamma0 must be positive");
  if (!positions.allFinite()) throw DomainError("emitter positions must be finite");
  const double lambda = vacuum_wavelength(medium);
  for (int m = 0; m < size(); ++m) {
    for (int n = m + 1; n < size(); ++n) {
      if ((positions.col(m) - positions.col(n)).norm() <= 1e-12 * lambda) {
        throw DomainError("emitters " + std::to_string(m) + " and " + std::to_string(n) +
                          " coincide");
      }
    }
  }
  if (const auto* slab = std::get_if<SlabMedium>(&medium)) {
    for (int n = 0; n < size(); ++n) {
      if (!slab->stack.contains(positions(2, n))) {
        throw DomainError("emitter " + std::to_string(n) + " lies outside the slab core");
      }
    }
  }
}

CouplingMatrices coupling_matrices(const EmitterArray& array, const GreensKernel& kernel) {
  array.validate();
  const int n = array.size();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<cplx> values(pairs.size());
  const Vec3& d = array.orientation;
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const std::string where = "pair (" + std::to_string(i) + ", " + std::to_string(j) + "): ";
    try {
      values[p] = kernel.projected(array.positions.col(i), array.positions.col(j), d, d);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(where + e.what(), e.achieved_tolerance());
    } catch (const PoleProximityError& e) {
      throw Error(where + e.what());
    } catch (const DomainError& e) {
      throw DomainError(where + e.what());
    }
  });
  const double k0 = kernel.k0();
  CouplingMatrices c;
  c.gamma0 = array.gamma0;
  c.J = Eigen::MatrixXd::Zero(n, n);
  c.Gamma = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    const double gamma = 6.0 * kPi * array.gamma0 * values[p].imag() / k0;
    c.Gamma(i, j) = c.Gamma(j, i) = gamma;
    if (i != j) c.J(i, j) = c.J(j, i) = -3.0 * kPi * array.gamma0 * values[p].real() / k0;
  }
  c.gamma_eps = c.Gamma.diagonal().mean();
  return c;
}

CouplingMatrices coupling_matrices(const EmitterArray& array) {
  return coupling_matrices(array, GreensKernel(array.medium));
}

CollectiveSpectrum collective_spectrum(const CouplingMatrices& c) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c.Gamma);
  if (solver.info() != Eigen::Success) throw Error("eigen-decomposition of Gamma failed");
  const int n = c.size();
  CollectiveSpectrum s;
  s.rates = solver.eigenvalues().reverse();
  s.vectors = solver.eigenvectors().rowwise().reverse();
  for (int k = 0; k < n; ++k) {
    auto v = s.vectors.col(k);
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
  }
  return s;
}

}  // namespace slabrad
