// Exact dense master-equation propagation for small arrays. Qubit n is emitter
// n; basis bit n set means emitter n is excited.
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "slabrad/spin_model.hpp"
#include "slabrad/superradiance.hpp"

namespace slabrad {

inline constexpr int kMaxOracleEmitters = 6;

struct DensityState {
  Eigen::MatrixXcd rho;
  int emitters = 0;

  static DensityState fully_inverted(int n);
  static DensityState ground(int n);
  /// Checks trace, hermiticity and positivity.
  void validate(double trace_tol = 1e-10, double herm_tol = 1e-12, double pos_tol = 1e-9) const;
};

/// rho' = -i (K rho - rho K^dag) + sum_mn Gamma_mn s-_m rho s+_n with
/// K = sum_{m != n} J_mn s+_m s-_n - (i/2) sum_mn Gamma_mn s+_m s-_n.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const CouplingMatrices& c);

  int emitters() const { return n_; }
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;

 private:
  int n_;
  Eigen::MatrixXd gamma_;
  Eigen::MatrixXcd k_;
};

LindbladGenerator build_generator(const CouplingMatrices& c);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> states;
  long steps = 0;
  long rejected = 0;
};

struct PropagationOptions {
  double step_tolerance = 1e-10;  // max-abs local error per step
  double initial_step = 1e-3;
  double max_step = 0.1;
};

/// Adaptive Dormand-Prince 5(4) integration, sampled at increasing times >= 0.
Trajectory propagate(const DensityState& state, const LindbladGenerator& generator,
                     const std::vector<double>& sample_times, const PropagationOptions& opt = {});

/// <s+_m s-_n> for every pair.
Eigen::MatrixXcd coherences(const Eigen::MatrixXcd& rho, int emitters);

/// Total rate sum_mn Gamma_mn <s+_m s-_n>, or with theta the directional rate
/// gamma0 Re sum_mn w_nm <s+_m s-_n>, w_nn = 1, w_nm = exp(i theta_nm).
double emission_rate(const Eigen::MatrixXcd& rho, const CouplingMatrices& c,
                     const DirectionalPhaseMatrix* theta = nullptr);

std::vector<double> emission_rate_trace(const Trajectory& trajectory, const CouplingMatrices& c,
                                        const DirectionalPhaseMatrix* theta = nullptr);

double excitation_number(const Eigen::MatrixXcd& rho, int emitters);

/// d gamma / dt at t = 0 from the fully inverted state: one-sided 4-point
/// differences at steps h and h/2 combined by Richardson extrapolation.
/// The default step is 1e-3 / gamma_eps.
double rate_derivative_fd(const CouplingMatrices& c, const DirectionalPhaseMatrix* theta = nullptr,
                          std::optional<double> step = std::nullopt);

}  // namespace slabrad
