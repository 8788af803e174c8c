#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "lzms/model.hpp"

namespace lzms {

/// lambda^3 + p*lambda + q = 0. The trace of the ideal Hamiltonian vanishes,
/// so its characteristic polynomial has no quadratic term.
struct DepressedCubic {
  double p = 0.0;
  double q = 0.0;

  double operator()(double x) const { return (x * x + p) * x + q; }
};

enum class CrossingTag { NoCrossing, TopIsolated, BottomIsolated };

struct CrossingClass {
  CrossingTag tag = CrossingTag::NoCrossing;
  std::optional<double> crossing_time;
};

inline const char* to_string(CrossingTag tag) {
  switch (tag) {
    case CrossingTag::TopIsolated: return "TopIsolated";
    case CrossingTag::BottomIsolated: return "BottomIsolated";
    case CrossingTag::NoCrossing: break;
  }
  return "NoCrossing";
}

inline DepressedCubic characteristic_coeffs(const ModelParams& p, double t) {
  const double O2 = p.Omega * p.Omega;
  const double kt = p.kappa * t;
  return {-(2.0 * O2 + p.omega * p.omega + kt * kt), -2.0 * O2 * p.omega * std::cos(chi(p))};
}

/// Real roots of a depressed cubic with three real roots, sorted descending.
///
/// The trigonometric form gives all three roots; the root of largest modulus
/// is always simple, so it is Newton-polished and the remaining pair is
/// obtained by deflation, which keeps the near-degenerate pair accurate.
inline std::array<double, 3> solve_depressed_cubic(const DepressedCubic& c) {
  if (c.p >= 0.0) {
    // Only p = q = 0 admits three real roots here.
    return {0.0, 0.0, 0.0};
  }
  const double r = std::sqrt(-c.p / 3.0);
  const double arg = std::clamp(1.5 * c.q / (c.p * r), -1.0, 1.0);
  const double theta = std::acos(arg) / 3.0;
  std::array<double, 3> roots{};
  for (int k = 0; k < 3; ++k) roots[k] = 2.0 * r * std::cos(theta - 2.0 * pi * k / 3.0);

  double s = *std::max_element(roots.begin(), roots.end(),
                               [](double a, double b) { return std::abs(a) < std::abs(b); });
  for (int it = 0; it < 2; ++it) {
    const double d = 3.0 * s * s + c.p;
    if (d == 0.0) break;
    const double next = s - c(s) / d;
    if (!std::isfinite(next)) break;
    s = next;
  }

  // Remaining pair: x^2 + s*x + (-q/s) = 0.
  const double disc = std::max(0.0, -3.0 * s * s - 4.0 * c.p);
  const double big = -0.5 * (s + std::copysign(std::sqrt(disc), s));
  const double small = big != 0.0 ? (-c.q / s) / big : 0.0;
  roots = {s, big, small};
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

/// Eigenvalues of the ideal Hamiltonian, lambda1 >= lambda2 >= lambda3.
inline std::array<double, 3> eigenvalues_ideal(const ModelParams& p, double t) {
  return solve_depressed_cubic(characteristic_coeffs(p, t));
}

/// Value that kappa^2 t^2 must equal for a double root to exist:
/// -Omega^2 [x^3 - 3 (cos^2 chi)^(1/3) x + 2] with x = (omega^2/Omega^2)^(1/3).
/// Written in expanded form so Omega = 0 is well defined.
inline double crossing_rhs(const ModelParams& p) {
  const double c = std::cos(chi(p));
  const double O2 = p.Omega * p.Omega;
  const double cross = 3.0 * std::cbrt(c * c) * std::cbrt(O2 * O2) * std::cbrt(p.omega * p.omega);
  return -p.omega * p.omega + cross - 2.0 * O2;
}

/// Degenerate classes need omega = Omega and chi a multiple of pi; both tests
/// use the supplied tolerance (relative for omega/Omega, radians for chi).
inline CrossingClass classify_crossing(const ModelParams& p, double tol) {
  if (!(tol > 0.0)) throw ParameterError("classify_crossing: tol must be positive");
  if (p.Omega <= 0.0 || std::abs(p.omega / p.Omega - 1.0) > tol) return {};
  const double x = chi(p);
  if (std::abs(x) <= tol) return {CrossingTag::TopIsolated, 0.0};
  if (pi - std::abs(x) <= tol) return {CrossingTag::BottomIsolated, 0.0};
  return {};
}

struct GapResult {
  double gap = std::numeric_limits<double>::infinity();
  double t_at = 0.0;
};

inline double spectral_gap(const ModelParams& p, double t) {
  const auto l = eigenvalues_ideal(p, t);
  return std::min(l[0] - l[1], l[1] - l[2]);
}

/// Smallest adjacent eigenvalue spacing over [t_lo, t_hi]: grid scan followed
/// by a golden-section search in the cell pair around the best sample.
inline GapResult min_gap(const ModelParams& p, double t_lo, double t_hi, std::size_t n_samples) {
  if (n_samples < 3) throw ParameterError("min_gap: n_samples must be at least 3");
  if (!(t_hi > t_lo)) throw ParameterError("min_gap: empty time range");

  GapResult best;
  std::size_t best_i = 0;
  const double dt = (t_hi - t_lo) / static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = i + 1 == n_samples ? t_hi : t_lo + dt * static_cast<double>(i);
    const double g = spectral_gap(p, t);
    if (g < best.gap) best = {g, t}, best_i = i;
  }

  auto consider = [&](double t) {
    const double g = spectral_gap(p, t);
    if (g < best.gap) best = {g, t};
    return g;
  };

  double a = t_lo + dt * static_cast<double>(best_i == 0 ? 0 : best_i - 1);
  double b = std::min(t_hi, t_lo + dt * static_cast<double>(best_i + 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = consider(x1);
  double f2 = consider(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = consider(x1);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = consider(x2);
    }
  }
  return best;
}

inline GapResult min_gap(const ModelParams& p, std::size_t n_samples = 2001) {
  return min_gap(p, -p.t0, p.t0, n_samples);
}

}  // namespace lzms
