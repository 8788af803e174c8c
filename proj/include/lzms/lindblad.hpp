#pragma once

#include <cmath>

#include "lzms/dynamics.hpp"
#include "lzms/integrator.hpp"
#include "lzms/model.hpp"

namespace lzms {

using DensityTrajectory = Trajectory<DensityMatrix4, 4>;
using Liouvillian4 = Eigen::Matrix<Complex, 16, 16>;
using DensityVector4 = Eigen::Matrix<Complex, 16, 1>;

namespace detail {

// Column-major vectorization: vec(A X B) = (B^T kron A) vec(X).
inline Liouvillian4 kron(const ComplexMatrix4& a, const ComplexMatrix4& b) {
  Liouvillian4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

inline Liouvillian4 commutator_superop(const ComplexMatrix4& h) {
  const ComplexMatrix4 id = ComplexMatrix4::Identity();
  return Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
}

inline DensityVector4 vec(const DensityMatrix4& rho) {
  return Eigen::Map<const DensityVector4>(rho.data());
}

inline DensityMatrix4 unvec(const DensityVector4& v) {
  return Eigen::Map<const DensityMatrix4>(v.data());
}

inline void check_density_matrix(const DensityMatrix4& rho) {
  if (!rho.allFinite() || !is_hermitian(rho, 1e-12))
    throw ParameterError("initial density matrix must be Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-12)
    throw ParameterError("initial density matrix must have unit trace");
}

}  // namespace detail

/// Zero-temperature dissipator with jumps L_n = sqrt(2 gamma_n) |4><n|.
inline Liouvillian4 decay_superop(const DecayParams& d) {
  Liouvillian4 out = Liouvillian4::Zero();
  const ComplexMatrix4 id = ComplexMatrix4::Identity();
  ComplexMatrix4 loss = ComplexMatrix4::Zero();
  for (int n = 0; n < 3; ++n) {
    const double rate = 2.0 * d.gamma(n + 1);
    ComplexMatrix4 jump = ComplexMatrix4::Zero();
    jump(3, n) = std::sqrt(rate);
    out += detail::kron(jump.conjugate(), jump);
    loss(n, n) = rate;
  }
  out -= 0.5 * (detail::kron(id, loss) + detail::kron(loss.transpose(), id));
  return out;
}

/// Generator of d vec(rho)/dt at time t.
inline Liouvillian4 liouvillian(const ModelParams& p, const DecayParams& d, double t) {
  return detail::commutator_superop(build_four_level_hamiltonian(p, d, t)) + decay_superop(d);
}

/// rho' = -i[H4(t), rho] + sum_n (L_n rho L_n^+ - {L_n^+ L_n, rho}/2) over
/// [-t0, t0]. The state is re-symmetrized after every accepted step.
inline DensityTrajectory evolve_lindblad4(const ModelParams& p, const DecayParams& d,
                                          const DensityMatrix4& rho0, const IntegratorConfig& cfg) {
  p.validate();
  d.validate();
  detail::check_density_matrix(rho0);

  const Liouvillian4 l0 = liouvillian(p, d, 0.0);
  ComplexMatrix4 slope = ComplexMatrix4::Zero();
  slope(0, 0) = -p.kappa;
  slope(2, 2) = p.kappa;
  const Liouvillian4 l1 = detail::commutator_superop(slope);
  auto gen = [&](double t) -> Liouvillian4 { return l0 + t * l1; };

  DensityTrajectory traj;
  traj.samples.reserve(cfg.sample_count);
  auto observe = [&](double t, const DensityVector4& v) {
    TrajectorySample<DensityMatrix4, 4> s;
    s.t = t;
    s.state = detail::unvec(v);
    for (int i = 0; i < 4; ++i) s.populations[i] = s.state(i, i).real();
    s.norm = s.state.trace().real();
    traj.samples.push_back(s);
  };
  auto symmetrize = [](DensityVector4& v) {
    const DensityMatrix4 rho = detail::unvec(v);
    v = detail::vec(0.5 * (rho + rho.adjoint()));
  };
  traj.stats = propagate<16>(gen, detail::vec(rho0), -p.t0, p.t0, cfg, observe, symmetrize);
  return traj;
}

}  // namespace lzms
