#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "lzms/dynamics.hpp"
#include "lzms/model.hpp"

namespace lzms {

enum class AxisScale { Linear, Log10 };

/// A swept parameter. Coordinates are min + i (max - min) / (n - 1); for
/// log10 axes the parameter takes the value 10^coordinate.
///
/// Recognized names (all in units of Omega):
///   omega_over_Omega, kappa_over_Omega2, phi, varphi     linear
///   log10_Gamma1, log10_Gamma2, log10_Gamma3             log10
///   log10_Gamma       log10, applies to SweepSpec::gamma_channel
///   decay_channel     linear, integer 1..3, selects that channel
struct Axis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 1;
  AxisScale scale = AxisScale::Linear;

  double coordinate(std::size_t i) const {
    if (n == 1) return min;
    if (i + 1 == n) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
};

inline constexpr std::array<std::string_view, 9> kAxisNames = {
    "omega_over_Omega", "kappa_over_Omega2", "log10_Gamma1", "log10_Gamma2", "log10_Gamma3",
    "phi",              "varphi",            "log10_Gamma",  "decay_channel"};

inline bool is_gamma_axis(std::string_view name) { return name.starts_with("log10_Gamma"); }

inline const char* to_string(AxisScale s) { return s == AxisScale::Log10 ? "log10" : "linear"; }

struct SweepSpec {
  std::string label;
  Axis axis1;
  std::optional<Axis> axis2;
  ModelParams base;
  DecayParams decay;
  int gamma_channel = 2;
  int from = 1;
  int to = 3;
  IntegratorConfig cfg;

  std::size_t rows() const { return axis1.n; }
  std::size_t cols() const { return axis2 ? axis2->n : 1; }
};

struct SweepRecord {
  double axis1 = 0.0;
  double axis2 = std::numeric_limits<double>::quiet_NaN();
  double P1 = 0.0;
  double P2 = 0.0;
  double P3 = 0.0;
  double leak = 0.0;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  SweepSpec spec;
  /// Row-major: axis1 outer, axis2 inner.
  std::vector<SweepRecord> records;

  const SweepRecord& at(std::size_t i, std::size_t j) const { return records[i * spec.cols() + j]; }
  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const SweepRecord& r) { return r.failed; }));
  }
};

namespace detail {

inline void validate_axis(const Axis& a) {
  if (std::find(kAxisNames.begin(), kAxisNames.end(), a.name) == kAxisNames.end())
    throw ParameterError("unknown axis name '" + a.name + "'");
  if (a.n < 1) throw ParameterError("axis '" + a.name + "' needs at least one sample");
  if (!std::isfinite(a.min) || !std::isfinite(a.max))
    throw ParameterError("axis '" + a.name + "' bounds must be finite");
  if (a.n > 1 && !(a.min < a.max)) throw ParameterError("axis '" + a.name + "' requires min < max");
  const bool log_axis = a.scale == AxisScale::Log10;
  if (log_axis != is_gamma_axis(a.name))
    throw ParameterError(is_gamma_axis(a.name) ? "axis '" + a.name + "' must use log10 scale"
                                               : "log10 scale is only valid for Gamma axes");
  if (a.name == "decay_channel" && (a.min < 1.0 || a.max > 3.0))
    throw ParameterError("decay_channel axis must stay within [1, 3]");
}

struct PointParams {
  ModelParams model;
  DecayParams decay;
  int channel;
};

inline void apply_axis(const Axis& a, double c, PointParams& pt, std::optional<double>& channel_gamma) {
  const double O = pt.model.Omega;
  if (a.name == "omega_over_Omega") pt.model.omega = c * O;
  else if (a.name == "kappa_over_Omega2") pt.model.kappa = c * O * O;
  else if (a.name == "phi") pt.model.phi = c;
  else if (a.name == "varphi") pt.model.varphi = c;
  else if (a.name == "log10_Gamma1") pt.decay.gamma1 = std::pow(10.0, c) * O;
  else if (a.name == "log10_Gamma2") pt.decay.gamma2 = std::pow(10.0, c) * O;
  else if (a.name == "log10_Gamma3") pt.decay.gamma3 = std::pow(10.0, c) * O;
  else if (a.name == "log10_Gamma") channel_gamma = std::pow(10.0, c) * O;
  else if (a.name == "decay_channel") pt.channel = static_cast<int>(std::lround(c));
}

inline void set_channel(DecayParams& d, int channel, double value) {
  switch (channel) {
    case 1: d.gamma1 = value; break;
    case 2: d.gamma2 = value; break;
    case 3: d.gamma3 = value; break;
    default: throw ParameterError("gamma channel must be 1, 2 or 3");
  }
}

inline SweepRecord evaluate_point(const SweepSpec& spec, std::size_t i, std::size_t j) {
  SweepRecord rec;
  rec.axis1 = spec.axis1.coordinate(i);
  PointParams pt{spec.base, spec.decay, spec.gamma_channel};
  std::optional<double> channel_gamma;
  apply_axis(spec.axis1, rec.axis1, pt, channel_gamma);
  if (spec.axis2) {
    rec.axis2 = spec.axis2->coordinate(j);
    apply_axis(*spec.axis2, rec.axis2, pt, channel_gamma);
  }
  if (channel_gamma) set_channel(pt.decay, pt.channel, *channel_gamma);

  try {
    const auto pops = final_populations(pt.model, pt.decay, spec.from, spec.cfg);
    rec.P1 = pops[0];
    rec.P2 = pops[1];
    rec.P3 = pops[2];
    rec.leak = 1.0 - (rec.P1 + rec.P2 + rec.P3);
  } catch (const std::exception& e) {
    rec.P1 = rec.P2 = rec.P3 = rec.leak = std::numeric_limits<double>::quiet_NaN();
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace detail

inline void validate(const SweepSpec& spec) {
  detail::validate_axis(spec.axis1);
  if (spec.axis2) {
    detail::validate_axis(*spec.axis2);
    if (spec.axis2->name == spec.axis1.name) throw ParameterError("sweep axes must be distinct");
  }
  const bool has_gamma = spec.axis1.name == "log10_Gamma" || (spec.axis2 && spec.axis2->name == "log10_Gamma");
  const bool has_channel =
      spec.axis1.name == "decay_channel" || (spec.axis2 && spec.axis2->name == "decay_channel");
  if (has_channel && !has_gamma) throw ParameterError("decay_channel axis requires a log10_Gamma axis");
  if (spec.gamma_channel < 1 || spec.gamma_channel > 3) throw ParameterError("gamma_channel must be 1, 2 or 3");
  if (spec.from < 1 || spec.from > 3 || spec.to < 1 || spec.to > 3)
    throw ParameterError("from/to must be 1, 2 or 3");
  spec.base.validate();
  spec.decay.validate();
  spec.cfg.validate();
}

/// Evaluates every grid point. Rows of the grid are dealt to workers in a
/// fixed stride and each result lands in its own pre-allocated slot, so the
/// output does not depend on the worker count. Integration failures are
/// recorded per point.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 0) {
  validate(spec);
  SweepResult result{spec, std::vector<SweepRecord>(spec.rows() * spec.cols())};
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, spec.rows()));

  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < spec.rows(); i += workers)
      for (std::size_t j = 0; j < spec.cols(); ++j)
        result.records[i * spec.cols() + j] = detail::evaluate_point(spec, i, j);
  };
  if (workers == 1) {
    work(0);
    return result;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  pool.clear();
  return result;
}

inline constexpr std::array<std::string_view, 15> kFigureIds = {
    "fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b",
    "fig3c", "fig4a", "fig4b", "fig4c", "fig5a", "fig5b", "fig5c"};

/// Tolerances used by the figure presets; tight enough for ~1e-4 absolute
/// accuracy on the populations.
inline IntegratorConfig figure_integrator_config() {
  IntegratorConfig c;
  c.rel_tol = 1e-6;
  c.abs_tol = 1e-8;
  c.sample_count = 2;
  return c;
}

/// Preset sweep for one efficiency-map panel, fig1a..fig5c.
inline SweepSpec figure_spec(std::string_view id) {
  if (std::find(kFigureIds.begin(), kFigureIds.end(), id) == kFigureIds.end()) {
    std::string valid;
    for (auto v : kFigureIds) valid += (valid.empty() ? "" : ", ") + std::string(v);
    throw ParameterError("unknown figure id '" + std::string(id) + "'; valid ids: " + valid);
  }
  const int fig = id[3] - '0';
  const int panel = id[4] - 'a';
  constexpr std::array<double, 3> phases = {0.0, pi / 2.0, pi};

  SweepSpec s;
  s.label = std::string(id);
  s.cfg = figure_integrator_config();
  s.base.Omega = 1.0;
  s.base.phi = 0.0;
  s.base.varphi = 0.0;
  switch (fig) {
    case 1:
      s.base.varphi = phases[panel];
      s.base.t0 = 500.0;
      s.axis1 = {"omega_over_Omega", 0.0, 2.0, 101, AxisScale::Linear};
      s.axis2 = Axis{"kappa_over_Omega2", 0.05, 5.0, 101, AxisScale::Linear};
      break;
    case 2: {
      constexpr std::array<double, 3> omegas = {0.0, 1.0, 1.0};
      constexpr std::array<double, 3> kappas = {0.1, 0.1, 1.0};
      constexpr std::array<double, 3> t0s = {500.0, 500.0, 50.0};
      s.base.omega = omegas[panel];
      s.base.kappa = kappas[panel];
      s.base.t0 = t0s[panel];
      s.axis1 = {"log10_Gamma", -5.0, 5.0, 201, AxisScale::Log10};
      s.axis2 = Axis{"decay_channel", 1.0, 3.0, 3, AxisScale::Linear};
      break;
    }
    case 3: {
      constexpr std::array<double, 3> omegas = {0.0, 0.5, 1.0};
      s.base.omega = omegas[panel];
      s.base.t0 = 500.0;
      s.axis1 = {"log10_Gamma2", -5.0, 5.0, 101, AxisScale::Log10};
      s.axis2 = Axis{"kappa_over_Omega2", 0.05, 1.0, 101, AxisScale::Linear};
      break;
    }
    default:
      s.base.varphi = phases[panel];
      s.base.kappa = fig == 4 ? 0.1 : 1.0;
      s.base.t0 = fig == 4 ? 500.0 : 50.0;
      s.axis1 = {"log10_Gamma2", -5.0, 5.0, 101, AxisScale::Log10};
      s.axis2 = Axis{"omega_over_Omega", 0.0, 2.0, 101, AxisScale::Linear};
      break;
  }
  return s;
}

}  // namespace lzms
