// Common scalar/vector aliases and error types shared by every slabrad module.
#pragma once

#include <complex>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace slabrad {

using cplx = std::complex<double>;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;
using Mat3c = Matrix3<cplx>;
using Positions = Eigen::Matrix3Xd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// s-polarized light is TE, p-polarized light is TM.
enum class Polarization { TE, TM };

inline const char* to_string(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The real part of a Green's tensor was requested at r == r'.
class DivergentAtCoincidence : public Error {
 public:
  DivergentAtCoincidence() : Error("Green's tensor real part is divergent at coincidence") {}
};

/// A multiple-reflection resummation denominator vanished.
class PoleProximityError : public Error {
 public:
  explicit PoleProximityError(double denominator)
      : Error("resummation denominator |1 - r1 r2 exp(2i kz l)| = " + format(denominator) +
              " is at a guided-mode pole"),
        denominator_(denominator) {}
  double denominator() const { return denominator_; }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
  double denominator_;
};

/// Numerical quadrature failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what + " (achieved relative tolerance " + format(achieved) + ")"),
        achieved_(achieved) {}
  double achieved_tolerance() const { return achieved_; }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
  double achieved_;
};

}  // namespace slabrad
