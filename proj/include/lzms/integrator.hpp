#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "lzms/model.hpp"

namespace lzms {

/// Exponential propagators for dy/dt = A(t) y.
///
/// ExponentialMidpoint: y <- exp(h A(t + h/2)) y, second order.
/// CommutatorFree4: two exponentials of Gauss-point combinations, fourth
/// order. Both are exactly unitary when A is anti-Hermitian.
enum class Scheme { ExponentialMidpoint, CommutatorFree4 };

inline int scheme_order(Scheme s) { return s == Scheme::ExponentialMidpoint ? 2 : 4; }

inline const char* to_string(Scheme s) {
  return s == Scheme::ExponentialMidpoint ? "midpoint" : "cf4";
}

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// 0 selects span/100; larger values are capped at span/100.
  double max_step = 0.0;
  /// 0 selects an automatic first step.
  double init_step = 0.0;
  std::size_t sample_count = 201;
  Scheme scheme = Scheme::CommutatorFree4;
  /// Fixed-step mode advances with max_step and no error control.
  bool adaptive = true;

  void validate() const {
    if (!(rel_tol > 0.0) || rel_tol > 1e-6)
      throw ParameterError("rel_tol must lie in (0, 1e-6]");
    if (!(abs_tol > 0.0)) throw ParameterError("abs_tol must be positive");
    if (max_step < 0.0 || init_step < 0.0) throw ParameterError("step bounds must be non-negative");
    if (sample_count < 2) throw ParameterError("sample_count must be at least 2");
    if (!adaptive && max_step <= 0.0) throw ParameterError("fixed-step mode requires max_step");
  }

  IntegratorConfig tightened(double factor) const {
    IntegratorConfig c = *this;
    c.rel_tol /= factor;
    c.abs_tol /= factor;
    return c;
  }
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, double step)
      : std::runtime_error(format(what, t, step)), t_(t), step_(step) {}

  double time() const { return t_; }
  double step() const { return step_; }

 private:
  static std::string format(const std::string& what, double t, double step) {
    std::ostringstream os;
    os.precision(12);
    os << what << " at t = " << t << " (step " << step << ")";
    return os.str();
  }

  double t_;
  double step_;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

template <int N>
using Generator = Eigen::Matrix<Complex, N, N>;
template <int N>
using Vector = Eigen::Matrix<Complex, N, 1>;

// Gauss nodes and the Blanes-Moan weights of the two-exponential scheme.
inline constexpr double kGauss1 = 0.5 - 0.28867513459481288225;
inline constexpr double kGauss2 = 0.5 + 0.28867513459481288225;
inline constexpr double kCfA = (3.0 - 2.0 * 1.7320508075688772935) / 12.0;
inline constexpr double kCfB = (3.0 + 2.0 * 1.7320508075688772935) / 12.0;

template <int N, class Gen>
Vector<N> exponential_step(const Gen& gen, Scheme scheme, double t, double h, const Vector<N>& y) {
  if (scheme == Scheme::ExponentialMidpoint) {
    const Generator<N> a = gen(t + 0.5 * h) * Complex(h);
    return a.exp() * y;
  }
  const Generator<N> a1 = gen(t + kGauss1 * h);
  const Generator<N> a2 = gen(t + kGauss2 * h);
  const Generator<N> first = (kCfB * a1 + kCfA * a2) * Complex(h);
  const Generator<N> second = (kCfA * a1 + kCfB * a2) * Complex(h);
  Vector<N> tmp = first.exp() * y;
  return second.exp() * tmp;
}

template <int N>
double error_norm(const Vector<N>& diff, const Vector<N>& y0, const Vector<N>& y1, double rel_tol,
                  double abs_tol) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < diff.size(); ++i) {
    const double scale = abs_tol + rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    e = std::max(e, std::abs(diff(i)) / scale);
  }
  return e;
}

}  // namespace detail

/// Integrates dy/dt = gen(t) y over [t_begin, t_end] and reports the state at
/// cfg.sample_count equally spaced times (both ends included) to `observe`.
///
/// Adaptive mode estimates the local error by step doubling; the two half
/// steps are kept. `post_step` may modify the state after every accepted step.
template <int N, class Gen, class Observer, class PostStep>
IntegrationStats propagate(const Gen& gen, detail::Vector<N> y, double t_begin, double t_end,
                           const IntegratorConfig& cfg, Observer&& observe, PostStep&& post_step) {
  cfg.validate();
  if (!(t_end > t_begin)) throw ParameterError("integration span must be positive");

  const double span = t_end - t_begin;
  const double h_max = cfg.max_step > 0.0 ? std::min(cfg.max_step, span / 100.0) : span / 100.0;
  const double h_min = 1e-14 * std::max(std::abs(t_begin), std::abs(t_end));
  const int order = scheme_order(cfg.scheme);
  const double err_scale = 1.0 / (std::pow(2.0, order) - 1.0);

  double h = cfg.init_step > 0.0 ? std::min(cfg.init_step, h_max) : std::min(h_max, 1e-2 * span);
  IntegrationStats stats;

  const std::size_t n = cfg.sample_count;
  double t = t_begin;
  observe(t, y);
  for (std::size_t k = 1; k < n; ++k) {
    const double target =
        k + 1 == n ? t_end : t_begin + span * static_cast<double>(k) / static_cast<double>(n - 1);
    while (t < target) {
      const double remaining = target - t;
      double step = std::min(h, h_max);
      const bool last = step >= remaining * (1.0 - 1e-12);
      if (last) step = remaining;

      if (!cfg.adaptive) {
        y = detail::exponential_step<N>(gen, cfg.scheme, t, step, y);
        if (!y.allFinite()) throw IntegrationError("non-finite state", t, step);
        t = last ? target : t + step;
        post_step(y);
        ++stats.accepted;
        continue;
      }

      const detail::Vector<N> full = detail::exponential_step<N>(gen, cfg.scheme, t, step, y);
      const detail::Vector<N> mid = detail::exponential_step<N>(gen, cfg.scheme, t, 0.5 * step, y);
      const detail::Vector<N> two =
          detail::exponential_step<N>(gen, cfg.scheme, t + 0.5 * step, 0.5 * step, mid);
      if (!two.allFinite() || !full.allFinite())
        throw IntegrationError("non-finite state", t, step);

      const double err =
          err_scale * detail::error_norm<N>(two - full, y, two, cfg.rel_tol, cfg.abs_tol);
      const double factor =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -1.0 / (order + 1)), 0.2, 5.0);
      if (err <= 1.0) {
        y = two;
        t = last ? target : t + step;
        post_step(y);
        ++stats.accepted;
        // A step shortened to land on a sample time says nothing about h.
        h = last && step < h ? std::max(h, step * factor) : step * factor;
      } else {
        ++stats.rejected;
        h = step * factor;
        if (h < h_min) throw IntegrationError("step size underflow", t, h);
      }
    }
    observe(t, y);
  }
  return stats;
}

template <int N, class Gen, class Observer>
IntegrationStats propagate(const Gen& gen, const detail::Vector<N>& y, double t_begin,
                           double t_end, const IntegratorConfig& cfg, Observer&& observe) {
  return propagate<N>(gen, y, t_begin, t_end, cfg, std::forward<Observer>(observe),
                      [](detail::Vector<N>&) {});
}

}  // namespace lzms
