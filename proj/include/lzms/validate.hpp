#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lzms/dynamics.hpp"
#include "lzms/lindblad.hpp"
#include "lzms/spectrum.hpp"

namespace lzms {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline ModelParams random_params(std::mt19937_64& rng, double t0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelParams p;
  p.kappa = 0.05 + 4.95 * u(rng);
  p.Omega = 0.2 + 1.8 * u(rng);
  p.omega = 2.0 * u(rng);
  p.phi = 2.0 * pi * u(rng) - pi;
  p.varphi = 2.0 * pi * u(rng) - pi;
  p.t0 = t0;
  return p;
}

inline std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace detail

/// Runs the numerical self-checks: cubic residuals, Vieta relations and
/// agreement with a general Hermitian eigensolver; Lindblad/non-Hermitian
/// equivalence; gauge invariance; tolerance convergence.
inline std::vector<CheckResult> run_validation(unsigned seed = 12345) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  {
    double worst_res = 0.0, worst_vieta = 0.0, worst_oracle = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const ModelParams p = detail::random_params(rng, 10.0);
      const double t = 20.0 * u(rng) - 10.0;
      const auto c = characteristic_coeffs(p, t);
      const auto l = eigenvalues_ideal(p, t);
      for (double x : l) worst_res = std::max(worst_res, std::abs(c(x)) / std::max(1.0, std::pow(std::abs(x), 3)));
      const double scale = std::max(1.0, std::abs(l[0]) + std::abs(l[2]));
      worst_vieta = std::max({worst_vieta, std::abs(l[0] + l[1] + l[2]) / scale,
                              std::abs(l[0] * l[1] + l[0] * l[2] + l[1] * l[2] - c.p) / (scale * scale),
                              std::abs(l[0] * l[1] * l[2] + c.q) / (scale * scale * scale)});
      Eigen::SelfAdjointEigenSolver<ComplexMatrix3> es(build_ideal_hamiltonian(p, t), Eigen::EigenvaluesOnly);
      const auto& ev = es.eigenvalues();  // ascending
      for (int i = 0; i < 3; ++i) worst_oracle = std::max(worst_oracle, std::abs(ev(2 - i) - l[i]) / scale);
    }
    out.push_back({"cubic root residual", worst_res < 1e-9, "max scaled residual " + detail::sci(worst_res)});
    out.push_back({"Vieta relations", worst_vieta < 1e-9, "max relative error " + detail::sci(worst_vieta)});
    out.push_back({"eigensolver agreement", worst_oracle < 1e-10, "max relative deviation " + detail::sci(worst_oracle)});
  }

  {
    ModelParams top{1.0, 1.0, 1.0, 0.0, 0.0, 10.0};
    ModelParams bottom{1.0, 1.0, 1.0, 0.0, pi, 10.0};
    const auto a = eigenvalues_ideal(top, 0.0);
    const auto b = eigenvalues_ideal(bottom, 0.0);
    const double err = std::max({std::abs(a[0] - 2), std::abs(a[1] + 1), std::abs(a[2] + 1),
                                 std::abs(b[0] - 1), std::abs(b[1] - 1), std::abs(b[2] + 2)});
    const double gap_top = min_gap(top).gap;
    const double gap_bottom = min_gap(bottom).gap;
    double min_nondegenerate = 1e300;
    for (double w : {0.0, 0.3, 0.7, 1.3, 2.0})
      for (double x : {0.0, pi / 2.0, pi}) {
        ModelParams p{1.0, 1.0, w, 0.0, -x, 10.0};
        min_nondegenerate = std::min(min_nondegenerate, min_gap(p).gap);
      }
    out.push_back({"degenerate spectrum", err < 1e-10, "max deviation " + detail::sci(err)});
    out.push_back({"crossing witness", gap_top < 1e-8 && gap_bottom < 1e-8 && min_nondegenerate > 0.0,
                   "degenerate gaps " + detail::sci(gap_top) + ", " + detail::sci(gap_bottom) +
                       "; smallest non-degenerate gap " + detail::sci(min_nondegenerate)});
  }

  IntegratorConfig cfg;
  cfg.sample_count = 11;
  {
    double worst = 0.0, worst_trace = 0.0;
    for (int k = 0; k < 3; ++k) {
      ModelParams p = detail::random_params(rng, 10.0);
      DecayParams d{0.5 * u(rng), 0.5 * u(rng), 0.5 * u(rng), u(rng) - 0.5, 5.0};
      DensityMatrix4 rho0 = DensityMatrix4::Zero();
      rho0(0, 0) = 1.0;
      const auto a = evolve(p, d, basis_state(1), cfg);
      const auto b = evolve_lindblad4(p, d, rho0, cfg);
      for (std::size_t s = 0; s < a.samples.size(); ++s) {
        const ComplexMatrix3 outer = a.samples[s].state * a.samples[s].state.adjoint();
        worst = std::max(worst, (b.samples[s].state.topLeftCorner<3, 3>() - outer).cwiseAbs().maxCoeff());
        worst_trace = std::max(worst_trace, std::abs(b.samples[s].norm - 1.0));
      }
    }
    out.push_back({"Lindblad equivalence", worst < 1e-6 && worst_trace < 1e-8,
                   "max block deviation " + detail::sci(worst) + ", trace drift " + detail::sci(worst_trace)});
  }

  {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      ModelParams p = detail::random_params(rng, 20.0);
      const double delta = 2.0 * pi * u(rng);
      ModelParams q = p;
      q.phi += delta;
      q.varphi += 2.0 * delta;
      const auto a = final_populations(p, std::nullopt, 1, cfg);
      const auto b = final_populations(q, std::nullopt, 1, cfg);
      for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    out.push_back({"gauge invariance", worst < 1e-8, "max population change " + detail::sci(worst)});
  }

  {
    const auto ideal = convergence_check({0.05, 1.0, 0.0, 0.0, 0.0, 500.0}, std::nullopt, cfg);
    DecayParams stiff;
    stiff.gamma2 = 1e5;
    const auto zeno = convergence_check({1.0, 1.0, 1.0, 0.0, 0.0, 50.0}, stiff, cfg);
    out.push_back({"convergence (ideal)", ideal.error < 1e-6, "estimated error " + detail::sci(ideal.error)});
    out.push_back({"convergence (Gamma2 = 1e5)", zeno.error < 1e-5, "estimated error " + detail::sci(zeno.error)});
  }
  return out;
}

}  // namespace lzms
