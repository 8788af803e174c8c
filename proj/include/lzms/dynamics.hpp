#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "lzms/integrator.hpp"
#include "lzms/model.hpp"

namespace lzms {

template <class State, int Levels>
struct TrajectorySample {
  double t = 0.0;
  State state;
  std::array<double, Levels> populations{};
  /// Euclidean norm for state vectors, trace for density matrices.
  double norm = 0.0;
};

template <class State, int Levels>
struct Trajectory {
  std::vector<TrajectorySample<State, Levels>> samples;
  IntegrationStats stats;

  const TrajectorySample<State, Levels>& back() const { return samples.back(); }
};

using StateTrajectory = Trajectory<StateVector3, 3>;

namespace detail {

inline void check_initial_state(const StateVector3& psi) {
  if (!psi.allFinite() || std::abs(psi.norm() - 1.0) > 1e-12)
    throw ParameterError("initial state must be normalized");
}

inline void check_level(int level) {
  if (level < 1 || level > 3) throw ParameterError("state index must be 1, 2 or 3");
}

}  // namespace detail

/// Solves i dpsi/dt = H(t) psi over [-t0, t0], with H the ideal Hamiltonian
/// or, when decay parameters are given, the non-Hermitian one.
inline StateTrajectory evolve(const ModelParams& p, const std::optional<DecayParams>& d,
                              const StateVector3& initial, const IntegratorConfig& cfg) {
  p.validate();
  if (d) d->validate();
  detail::check_initial_state(initial);

  const ComplexMatrix3 h0 = d ? build_effective_hamiltonian(p, *d, 0.0) : build_ideal_hamiltonian(p, 0.0);
  ComplexMatrix3 slope = ComplexMatrix3::Zero();
  slope(0, 0) = -p.kappa;
  slope(2, 2) = p.kappa;
  const Complex minus_i(0.0, -1.0);
  auto gen = [&](double t) -> ComplexMatrix3 { return minus_i * (h0 + t * slope); };

  StateTrajectory traj;
  traj.samples.reserve(cfg.sample_count);
  auto observe = [&](double t, const StateVector3& y) {
    TrajectorySample<StateVector3, 3> s;
    s.t = t;
    s.state = y;
    for (int i = 0; i < 3; ++i) s.populations[i] = std::norm(y(i));
    s.norm = y.norm();
    traj.samples.push_back(s);
  };
  traj.stats = propagate<3>(gen, initial, -p.t0, p.t0, cfg, observe);
  return traj;
}

/// Final (P1, P2, P3) starting from the bare state |from>.
inline std::array<double, 3> final_populations(const ModelParams& p, const std::optional<DecayParams>& d,
                                               int from, const IntegratorConfig& cfg) {
  detail::check_level(from);
  IntegratorConfig c = cfg;
  c.sample_count = 2;
  return evolve(p, d, basis_state(from), c).back().populations;
}

inline double transfer_efficiency(const ModelParams& p, const std::optional<DecayParams>& d, int from,
                                  int to, const IntegratorConfig& cfg) {
  detail::check_level(to);
  return final_populations(p, d, from, cfg)[to - 1];
}

/// Final upper-state population of the two-level crossing
/// [[-kappa t, omega e^{i varphi}], [omega e^{-i varphi}, kappa t]] over
/// [-t0, t0], starting in the lower-index state.
inline double lz_two_state_reference(double omega, double varphi, double kappa, double t0,
                                     const IntegratorConfig& cfg) {
  if (!(kappa > 0.0) || !(t0 > 0.0) || !(omega >= 0.0))
    throw ParameterError("lz_two_state_reference: need kappa > 0, t0 > 0, omega >= 0");
  using Mat2 = Eigen::Matrix<Complex, 2, 2>;
  using Vec2 = Eigen::Matrix<Complex, 2, 1>;
  const Complex w = std::polar(omega, varphi);
  const Complex minus_i(0.0, -1.0);
  auto gen = [&](double t) -> Mat2 {
    Mat2 h;
    h << -kappa * t, w, std::conj(w), kappa * t;
    return minus_i * h;
  };
  IntegratorConfig c = cfg;
  c.sample_count = 2;
  Vec2 y(1.0, 0.0);
  double result = 0.0;
  propagate<2>(gen, y, -t0, t0, c, [&](double, const Vec2& v) { result = std::norm(v(1)); });
  return result;
}

struct ConvergenceEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Transfer efficiency at cfg and at tolerances tightened tenfold; the
/// tighter value is reported with the difference as its error estimate.
inline ConvergenceEstimate convergence_check(const ModelParams& p, const std::optional<DecayParams>& d,
                                             const IntegratorConfig& cfg, int from = 1, int to = 3) {
  const double loose = transfer_efficiency(p, d, from, to, cfg);
  const double tight = transfer_efficiency(p, d, from, to, cfg.tightened(10.0));
  return {tight, std::abs(tight - loose)};
}

}  // namespace lzms
