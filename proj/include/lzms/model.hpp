#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lzms {

using Complex = std::complex<double>;
using ComplexMatrix3 = Eigen::Matrix<Complex, 3, 3>;
using ComplexMatrix4 = Eigen::Matrix<Complex, 4, 4>;
using StateVector3 = Eigen::Matrix<Complex, 3, 1>;
using DensityMatrix4 = ComplexMatrix4;

inline constexpr double pi = std::numbers::pi;

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters of the ideal three-state crossing (hbar = 1).
///
/// The bare energies of |1> and |3> are -kappa*t and +kappa*t; |1>-|2> and
/// |2>-|3> couple with Omega*exp(i*phi), |1>-|3> couples with
/// omega*exp(i*varphi). Time runs over [-t0, t0].
struct ModelParams {
  double kappa = 1.0;
  double Omega = 1.0;
  double omega = 0.0;
  double phi = 0.0;
  double varphi = 0.0;
  double t0 = 500.0;

  void validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
      throw ParameterError("kappa must be positive and finite");
    if (!(Omega >= 0.0) || !std::isfinite(Omega))
      throw ParameterError("Omega must be non-negative and finite");
    if (!(omega >= 0.0) || !std::isfinite(omega))
      throw ParameterError("omega must be non-negative and finite");
    if (!std::isfinite(phi) || !std::isfinite(varphi))
      throw ParameterError("phases must be finite");
    if (!(t0 > 0.0) || !std::isfinite(t0))
      throw ParameterError("t0 must be positive and finite");
  }
};

/// External decay towards a fourth, lower state |4>.
///
/// gamma_n are the amplitude decay rates entering the non-Hermitian
/// Hamiltonian as -i*gamma_n; the corresponding Lindblad rates are 2*gamma_n.
struct DecayParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double delta = 0.0;
  double omega_g = 1.0;

  bool dissipative() const { return gamma1 > 0.0 || gamma2 > 0.0 || gamma3 > 0.0; }

  double gamma(int level) const {
    switch (level) {
      case 1: return gamma1;
      case 2: return gamma2;
      case 3: return gamma3;
      default: throw ParameterError("decay level must be 1, 2 or 3");
    }
  }

  void validate() const {
    for (double g : {gamma1, gamma2, gamma3})
      if (!(g >= 0.0) || !std::isfinite(g))
        throw ParameterError("decay rates must be non-negative and finite");
    if (!std::isfinite(delta) || !std::isfinite(omega_g))
      throw ParameterError("delta and omega_g must be finite");
  }
};

/// Reduces an angle to (-pi, pi].
inline double reduce_angle(double a) {
  double r = std::remainder(a, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

/// Gauge-invariant phase 2*phi - varphi in (-pi, pi].
inline double chi(const ModelParams& p) { return reduce_angle(2.0 * p.phi - p.varphi); }

inline ComplexMatrix3 build_ideal_hamiltonian(const ModelParams& p, double t) {
  const Complex c = std::polar(p.Omega, p.phi);
  const Complex w = std::polar(p.omega, p.varphi);
  ComplexMatrix3 h;
  h << -p.kappa * t, c, w,
       std::conj(c), 0.0, c,
       std::conj(w), std::conj(c), p.kappa * t;
  return h;
}

/// Ideal Hamiltonian plus diag(-i*gamma1, delta - i*gamma2, -i*gamma3).
inline ComplexMatrix3 build_effective_hamiltonian(const ModelParams& p, const DecayParams& d,
                                                  double t) {
  ComplexMatrix3 h = build_ideal_hamiltonian(p, t);
  h(0, 0) += Complex(0.0, -d.gamma1);
  h(1, 1) += Complex(d.delta, -d.gamma2);
  h(2, 2) += Complex(0.0, -d.gamma3);
  return h;
}

/// Three-state block (with delta on |2>) plus the decoupled ground state |4>
/// at energy -omega_g.
inline ComplexMatrix4 build_four_level_hamiltonian(const ModelParams& p, const DecayParams& d,
                                                   double t) {
  ComplexMatrix4 h = ComplexMatrix4::Zero();
  h.topLeftCorner<3, 3>() = build_ideal_hamiltonian(p, t);
  h(1, 1) += d.delta;
  h(3, 3) = -d.omega_g;
  return h;
}

template <class Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = 0.0) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline StateVector3 basis_state(int level) {
  if (level < 1 || level > 3) throw ParameterError("state index must be 1, 2 or 3");
  StateVector3 v = StateVector3::Zero();
  v(level - 1) = 1.0;
  return v;
}

}  // namespace lzms
