#include <random>

#include <gtest/gtest.h>

#include "lzms/dynamics.hpp"
#include "lzms/lindblad.hpp"
#include "oracle.hpp"

using namespace lzms;

namespace {

DensityMatrix4 pure(int level) {
  DensityMatrix4 rho = DensityMatrix4::Zero();
  rho(level - 1, level - 1) = 1.0;
  return rho;
}

IntegratorConfig coarse_samples(std::size_t n) {
  IntegratorConfig c;
  c.sample_count = n;
  return c;
}

}  // namespace

TEST(Liouvillian, MatchesMatrixForm) {
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const ModelParams p{0.4, 1.1, 0.6, 0.3, -0.8, 10.0};
  const DecayParams d{0.2, 0.5, 0.1, 0.3, 2.0};
  DensityMatrix4 rho;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho(i, j) = Complex(u(rng), u(rng));
  const double t = 1.7;
  const DensityVector4 lhs = liouvillian(p, d, t) * detail::vec(rho);

  const ComplexMatrix4 h = build_four_level_hamiltonian(p, d, t);
  DensityMatrix4 rhs = Complex(0.0, -1.0) * (h * rho - rho * h);
  for (int n = 0; n < 3; ++n) {
    ComplexMatrix4 jump = ComplexMatrix4::Zero();
    jump(3, n) = std::sqrt(2.0 * d.gamma(n + 1));
    const ComplexMatrix4 jj = jump.adjoint() * jump;
    rhs += jump * rho * jump.adjoint() - 0.5 * (jj * rho + rho * jj);
  }
  EXPECT_LT((detail::unvec(lhs) - rhs).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Lindblad, UnitaryLimitKeepsPurity) {
  const auto traj = evolve_lindblad4({0.5, 1.0, 0.8, 0.2, 1.1, 20.0}, DecayParams{}, pure(1), coarse_samples(21));
  for (const auto& s : traj.samples) {
    EXPECT_NEAR((s.state * s.state).trace().real(), 1.0, 1e-9);
    EXPECT_NEAR(s.populations[3], 0.0, 1e-14);
  }
}

TEST(Lindblad, TracePreservedAndHermitian) {
  const DecayParams d{0.3, 1.0, 0.05, 0.2, 1.0};
  const auto traj = evolve_lindblad4({0.5, 1.0, 0.8, 0.2, 1.1, 20.0}, d, pure(1), coarse_samples(21));
  for (const auto& s : traj.samples) {
    EXPECT_NEAR(s.norm, 1.0, 1e-8);
    EXPECT_TRUE(is_hermitian(s.state, 0.0));
    for (double x : s.populations) EXPECT_GT(x, -1e-10);
  }
}

TEST(Lindblad, AgreesWithNonHermitianEvolution) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 3; ++k) {
    const ModelParams p{0.1 + u(rng), 0.5 + u(rng), u(rng), u(rng), 3.0 * u(rng), 10.0};
    const DecayParams d{0.2 * u(rng), std::pow(10.0, 2.0 * u(rng) - 1.0), 0.2 * u(rng), u(rng) - 0.5, 1.0};
    const auto rho = evolve_lindblad4(p, d, pure(1), coarse_samples(11));
    const auto psi = evolve(p, d, basis_state(1), coarse_samples(11));
    ASSERT_EQ(rho.samples.size(), psi.samples.size());
    for (std::size_t s = 0; s < psi.samples.size(); ++s) {
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(rho.samples[s].populations[i], psi.samples[s].populations[i], 1e-6);
      const double n2 = psi.samples[s].norm * psi.samples[s].norm;
      EXPECT_NEAR(rho.samples[s].populations[3], 1.0 - n2, 1e-6);
    }
  }
}

TEST(Lindblad, MatchesOracle) {
  const ModelParams p{0.3, 1.0, 0.7, 0.4, 2.0, 8.0};
  const DecayParams d{0.1, 0.4, 0.02, -0.3, 1.5};
  DensityMatrix4 rho0 = DensityMatrix4::Zero();
  rho0(0, 0) = 0.6;
  rho0(2, 2) = 0.4;
  rho0(0, 2) = Complex(0.2, 0.3);
  rho0(2, 0) = Complex(0.2, -0.3);
  const auto lib = evolve_lindblad4(p, d, rho0, coarse_samples(2)).back().state;
  const auto ref = oracle::lindblad(p.kappa, p.Omega, p.omega, p.phi, p.varphi, {d.gamma1, d.gamma2, d.gamma3},
                                    d.delta, d.omega_g, rho0, -p.t0, p.t0, 1e-13);
  EXPECT_LT((lib - ref).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Lindblad, RejectsInvalidDensityMatrix) {
  DensityMatrix4 rho = pure(1);
  rho(0, 0) = 0.5;
  EXPECT_THROW(evolve_lindblad4({}, DecayParams{}, rho, {}), ParameterError);
  rho = pure(1);
  rho(0, 1) = 0.1;
  EXPECT_THROW(evolve_lindblad4({}, DecayParams{}, rho, {}), ParameterError);
}
