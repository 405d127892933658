#include "slabrad/lindblad.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace slabrad {

namespace {

void check_size(int n) {
  if (n < 1 || n > kMaxOracleEmitters) {
    throw DomainError("master-equation oracle supports 1.." + std::to_string(kMaxOracleEmitters) +
                      " emitters, got " + std::to_string(n));
  }
}

bool bit(unsigned x, int k) { return (x >> k) & 1u; }

}  // namespace

DensityState DensityState::fully_inverted(int n) {
  check_size(n);
  const int dim = 1 << n;
  DensityState s{Eigen::MatrixXcd::Zero(dim, dim), n};
  s.rho(dim - 1, dim - 1) = 1.0;
  return s;
}

DensityState DensityState::ground(int n) {
  check_size(n);
  const int dim = 1 << n;
  DensityState s{Eigen::MatrixXcd::Zero(dim, dim), n};
  s.rho(0, 0) = 1.0;
  return s;
}

void DensityState::validate(double trace_tol, double herm_tol, double pos_tol) const {
  check_size(emitters);
  if (rho.rows() != (1 << emitters) || rho.cols() != rho.rows()) throw DomainError("rho has the wrong shape");
  if (std::abs(rho.trace() - 1.0) > trace_tol) throw DomainError("rho is not unit trace");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol) throw DomainError("rho is not Hermitian");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -pos_tol) throw DomainError("rho is not positive");
}

LindbladGenerator::LindbladGenerator(const CouplingMatrices& c) : n_(c.size()), gamma_(c.Gamma) {
  check_size(n_);
  const unsigned dim = 1u << n_;
  k_ = Eigen::MatrixXcd::Zero(dim, dim);
  // (s+_m s-_n)|c> = |c - e_n + e_m> when c has n set and (c - e_n) has m clear.
  for (unsigned col = 0; col < dim; ++col) {
    for (int n = 0; n < n_; ++n) {
      if (!bit(col, n)) continue;
      const unsigned lowered = col & ~(1u << n);
      for (int m = 0; m < n_; ++m) {
        if (bit(lowered, m)) continue;
        const unsigned row = lowered | (1u << m);
        const cplx a = (m != n ? cplx(c.J(m, n), 0.0) : cplx(0.0)) - 0.5 * kI * c.Gamma(m, n);
        k_(row, col) += a;
      }
    }
  }
}

void LindbladGenerator::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
  out.noalias() = -kI * (k_ * rho);
  out.noalias() += kI * (rho * k_.adjoint());
  const unsigned dim = 1u << n_;
  // (s-_m rho s+_n)_{ab} = rho_{a|m, b|n} for a without m and b without n.
  for (int m = 0; m < n_; ++m) {
    const unsigned em = 1u << m;
    for (int n = 0; n < n_; ++n) {
      const double g = gamma_(m, n);
      if (g == 0.0) continue;
      const unsigned en = 1u << n;
      for (unsigned b = 0; b < dim; ++b) {
        if (b & en) continue;
        for (unsigned a = 0; a < dim; ++a) {
          if (a & em) continue;
          out(a, b) += g * rho(a | em, b | en);
        }
      }
    }
  }
}

Eigen::MatrixXcd LindbladGenerator::apply(const Eigen::MatrixXcd& rho) const {
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  apply(rho, out);
  return out;
}

LindbladGenerator build_generator(const CouplingMatrices& c) { return LindbladGenerator(c); }

Trajectory propagate(const DensityState& state, const LindbladGenerator& generator,
                     const std::vector<double>& sample_times, const PropagationOptions& opt) {
  if (state.emitters != generator.emitters()) throw DomainError("state and generator sizes differ");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (!(sample_times[i] >= 0.0) || (i && !(sample_times[i] >= sample_times[i - 1]))) {
      throw DomainError("sample times must be non-negative and non-decreasing");
    }
  }
  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous system

  Trajectory out;
  Eigen::MatrixXcd y = state.rho;
  const auto dim = y.rows();
  Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), k5(dim, dim),
      k6(dim, dim), k7(dim, dim), tmp(dim, dim), y5(dim, dim);
  generator.apply(y, k1);
  double t = 0.0, h = opt.initial_step;
  for (double target : sample_times) {
    while (t < target) {
      const bool last = t + h >= target;
      const double step = last ? target - t : h;
      tmp = y + step * a21 * k1;
      generator.apply(tmp, k2);
      tmp = y + step * (a31 * k1 + a32 * k2);
      generator.apply(tmp, k3);
      tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
      generator.apply(tmp, k4);
      tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      generator.apply(tmp, k5);
      tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      generator.apply(tmp, k6);
      y5 = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      generator.apply(y5, k7);
      const double err =
          (step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).cwiseAbs().maxCoeff();
      const double factor =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(opt.step_tolerance / err, 0.2), 0.2, 5.0);
      if (err <= opt.step_tolerance) {
        t = last ? target : t + step;
        y = 0.5 * (y5 + y5.adjoint());
        generator.apply(y, k1);
        ++out.steps;
        if (!last) h = std::min(opt.max_step, step * factor);
      } else {
        ++out.rejected;
        h = step * factor;
      }
      if (h < 1e-14 * (1.0 + t)) {
        throw Error("master-equation step size underflow at t = " + std::to_string(t));
      }
    }
    out.times.push_back(target);
    out.states.push_back(y);
  }
  return out;
}

Eigen::MatrixXcd coherences(const Eigen::MatrixXcd& rho, int emitters) {
  check_size(emitters);
  const unsigned dim = 1u << emitters;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(emitters, emitters);
  // <s+_m s-_n> = sum_c rho(c, c - e_n + e_m) over c with n set and m clear after lowering.
  for (int m = 0; m < emitters; ++m) {
    for (int n = 0; n < emitters; ++n) {
      cplx acc = 0.0;
      for (unsigned c = 0; c < dim; ++c) {
        if (!bit(c, n)) continue;
        const unsigned lowered = c & ~(1u << n);
        if (bit(lowered, m)) continue;
        acc += rho(c, lowered | (1u << m));
      }
      s(m, n) = acc;
    }
  }
  return s;
}

double emission_rate(const Eigen::MatrixXcd& rho, const CouplingMatrices& c,
                     const DirectionalPhaseMatrix* theta) {
  const int n = c.size();
  const Eigen::MatrixXcd s = coherences(rho, n);
  if (!theta) return (c.Gamma.cast<cplx>().cwiseProduct(s)).sum().real();
  cplx acc = 0.0;
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      acc += (m == k ? cplx(1.0) : std::exp(kI * theta->theta(k, m))) * s(m, k);
  return c.gamma0 * acc.real();
}

std::vector<double> emission_rate_trace(const Trajectory& trajectory, const CouplingMatrices& c,
                                        const DirectionalPhaseMatrix* theta) {
  std::vector<double> out;
  out.reserve(trajectory.states.size());
  for (const auto& rho : trajectory.states) out.push_back(emission_rate(rho, c, theta));
  return out;
}

double excitation_number(const Eigen::MatrixXcd& rho, int emitters) {
  check_size(emitters);
  double total = 0.0;
  for (Eigen::Index c = 0; c < rho.rows(); ++c) total += std::popcount(unsigned(c)) * rho(c, c).real();
  return total;
}

double rate_derivative_fd(const CouplingMatrices& c, const DirectionalPhaseMatrix* theta,
                          std::optional<double> step) {
  const double h = step.value_or(1e-3 / c.gamma_eps);
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  const LindbladGenerator gen(c);
  PropagationOptions opt;
  opt.initial_step = h / 4.0;
  const auto traj = propagate(DensityState::fully_inverted(c.size()), gen,
                              {0.0, h / 2, h, 1.5 * h, 2 * h, 3 * h}, opt);
  const auto g = emission_rate_trace(traj, c, theta);
  auto d = [](double f0, double f1, double f2, double f3, double s) {
    return (-11.0 * f0 + 18.0 * f1 - 9.0 * f2 + 2.0 * f3) / (6.0 * s);
  };
  const double coarse = d(g[0], g[2], g[4], g[5], h);
  const double fine = d(g[0], g[1], g[2], g[3], h / 2);
  return (8.0 * fine - coarse) / 7.0;
}

}  // namespace slabrad
