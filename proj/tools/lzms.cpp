// lzms: command-line front end for the three-state crossing simulator.
//
// Every physical flag is dimensionless in units of Omega: --kappa is
// kappa/Omega^2, --omega is omega/Omega, --t0 and --t are Omega*t, the decay
// rates and delta are in units of Omega. Exit codes: 0 success, 2 bad
// arguments, 3 integration failure.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "lzms/lzms.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIntegration = 3;

struct Options {
  double kappa = 1.0;
  double Omega = 1.0;
  double omega = 0.0;
  double phi = 0.0;
  double varphi = 0.0;
  double t0 = 500.0;
  double t = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double delta = 0.0;
  double omega_g = 1.0;
  int from = 1;
  int to = 3;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;
  double init_step = 0.0;
  std::size_t samples = 201;
  std::string scheme = "cf4";
  bool fixed_step = false;
  bool lindblad = false;
  bool check = false;
  std::string axis1;
  std::string axis2;
  int gamma_channel = 2;
  std::size_t resolution = 0;
  std::string figure;
  std::string output;
  unsigned workers = 0;
};

lzms::ModelParams model_params(const Options& o) {
  lzms::ModelParams p;
  p.Omega = o.Omega;
  p.kappa = o.kappa * o.Omega * o.Omega;
  p.omega = o.omega * o.Omega;
  p.phi = o.phi;
  p.varphi = o.varphi;
  p.t0 = o.Omega > 0.0 ? o.t0 / o.Omega : o.t0;
  return p;
}

lzms::DecayParams decay_params(const Options& o) {
  return {o.gamma1 * o.Omega, o.gamma2 * o.Omega, o.gamma3 * o.Omega, o.delta * o.Omega,
          o.omega_g * o.Omega};
}

lzms::IntegratorConfig integrator_config(const Options& o) {
  lzms::IntegratorConfig c;
  c.rel_tol = o.rel_tol;
  c.abs_tol = o.abs_tol;
  c.max_step = o.max_step;
  c.init_step = o.init_step;
  c.sample_count = o.samples;
  c.adaptive = !o.fixed_step;
  if (o.scheme == "cf4") c.scheme = lzms::Scheme::CommutatorFree4;
  else if (o.scheme == "midpoint") c.scheme = lzms::Scheme::ExponentialMidpoint;
  else throw lzms::ParameterError("--scheme must be cf4 or midpoint");
  return c;
}

// Writes to the -o path when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
    path_ = path;
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    if (!file_) return;
    file_->flush();
    if (!*file_) throw std::runtime_error("write to '" + path_ + "' failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::string path_;
};

int run_spectrum(const Options& o) {
  const auto p = model_params(o);
  p.validate();
  const double t = o.Omega > 0.0 ? o.t / o.Omega : o.t;
  const auto c = lzms::characteristic_coeffs(p, t);
  const auto l = lzms::eigenvalues_ideal(p, t);
  const auto cls = lzms::classify_crossing(p, 1e-9);
  const auto gap = lzms::min_gap(p);
  Sink sink(o.output);
  auto& os = sink.stream();
  os << "lambda1 = " << lzms::format_number(l[0]) << '\n'
     << "lambda2 = " << lzms::format_number(l[1]) << '\n'
     << "lambda3 = " << lzms::format_number(l[2]) << '\n'
     << "p = " << lzms::format_number(c.p) << '\n'
     << "q = " << lzms::format_number(c.q) << '\n'
     << "chi = " << lzms::format_number(lzms::chi(p)) << '\n'
     << "crossing_rhs = " << lzms::format_number(lzms::crossing_rhs(p)) << '\n'
     << "crossing = " << lzms::to_string(cls.tag) << '\n'
     << "min_gap = " << lzms::format_number(gap.gap) << '\n'
     << "min_gap_t = " << lzms::format_number(gap.t_at) << '\n';
  sink.close();
  return kExitOk;
}

int run_evolve(const Options& o) {
  const auto p = model_params(o);
  const auto d = decay_params(o);
  const auto cfg = integrator_config(o);
  Sink sink(o.output);
  auto& os = sink.stream();
  if (o.lindblad) {
    lzms::DensityMatrix4 rho0 = lzms::DensityMatrix4::Zero();
    if (o.from < 1 || o.from > 3) throw lzms::ParameterError("--from must be 1, 2 or 3");
    rho0(o.from - 1, o.from - 1) = 1.0;
    const auto traj = lzms::evolve_lindblad4(p, d, rho0, cfg);
    os << "t,P1,P2,P3,P4,trace\n";
    for (const auto& s : traj.samples) {
      os << lzms::format_number(s.t);
      for (double v : s.populations) os << ',' << lzms::format_number(v);
      os << ',' << lzms::format_number(s.norm) << '\n';
    }
  } else {
    const auto traj = lzms::evolve(p, d, lzms::basis_state(o.from), cfg);
    os << "t,P1,P2,P3,norm\n";
    for (const auto& s : traj.samples) {
      os << lzms::format_number(s.t);
      for (double v : s.populations) os << ',' << lzms::format_number(v);
      os << ',' << lzms::format_number(s.norm) << '\n';
    }
  }
  sink.close();
  return kExitOk;
}

int run_efficiency(const Options& o) {
  const auto p = model_params(o);
  const auto d = decay_params(o);
  const auto cfg = integrator_config(o);
  Sink sink(o.output);
  auto& os = sink.stream();
  if (o.check) {
    const auto est = lzms::convergence_check(p, d, cfg, o.from, o.to);
    os << "efficiency = " << lzms::format_number(est.value) << '\n'
       << "estimated_error = " << lzms::format_number(est.error) << '\n';
  } else {
    os << "efficiency = " << lzms::format_number(lzms::transfer_efficiency(p, d, o.from, o.to, cfg)) << '\n';
  }
  if (o.gamma2 > 0.0 && o.gamma1 == 0.0 && o.gamma3 == 0.0) {
    std::cerr << "two-state reference (Gamma2 -> infinity): "
              << lzms::format_number(lzms::lz_two_state_reference(p.omega, p.varphi, p.kappa, p.t0, cfg))
              << '\n';
  }
  sink.close();
  return kExitOk;
}

int emit_sweep(const lzms::SweepResult& r, const Options& o) {
  Sink sink(o.output);
  lzms::emit_csv(r, sink.stream());
  sink.close();
  std::cerr << r.spec.label << ": " << r.records.size() << " points, " << r.failures() << " failed\n";
  for (const auto& rec : r.records)
    if (rec.failed) std::cerr << "  failed at (" << rec.axis1 << ", " << rec.axis2 << "): " << rec.error << '\n';
  return r.failures() == 0 ? kExitOk : kExitIntegration;
}

int run_sweep_command(const Options& o) {
  if (o.axis1.empty()) throw lzms::ParameterError("sweep requires --axis1");
  lzms::SweepSpec s;
  s.label = "sweep";
  s.axis1 = lzms::parse_axis(o.axis1);
  if (!o.axis2.empty()) s.axis2 = lzms::parse_axis(o.axis2);
  s.base = model_params(o);
  s.decay = decay_params(o);
  s.gamma_channel = o.gamma_channel;
  s.from = o.from;
  s.to = o.to;
  s.cfg = integrator_config(o);
  s.cfg.sample_count = 2;
  return emit_sweep(lzms::run_sweep(s, o.workers), o);
}

int run_figure(const Options& o, const CLI::App& app) {
  lzms::SweepSpec s = lzms::figure_spec(o.figure);
  if (app.count("--rel-tol")) s.cfg.rel_tol = o.rel_tol;
  if (app.count("--abs-tol")) s.cfg.abs_tol = o.abs_tol;
  if (app.count("--scheme")) s.cfg.scheme = integrator_config(o).scheme;
  if (o.resolution > 0) {
    // decay_channel stays categorical.
    if (s.axis1.name != "decay_channel") s.axis1.n = o.resolution;
    if (s.axis2 && s.axis2->name != "decay_channel") s.axis2->n = o.resolution;
  }
  return emit_sweep(lzms::run_sweep(s, o.workers), o);
}

int run_validate(const Options& o) {
  const auto checks = lzms::run_validation();
  Sink sink(o.output);
  bool ok = true;
  for (const auto& c : checks) {
    sink.stream() << (c.passed ? "PASS  " : "FAIL  ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.passed;
  }
  sink.close();
  return ok ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-state Landau-Zener crossing with external decay"};
  app.set_version_flag("--version", std::string(lzms::kVersion));
  app.set_config("--config", "", "key = value parameter file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  Options o;
  app.add_option("--kappa", o.kappa, "sweep rate kappa/Omega^2");
  app.add_option("--Omega", o.Omega, "coupling Omega (energy unit)");
  app.add_option("--omega", o.omega, "direct 1-3 coupling omega/Omega");
  app.add_option("--phi", o.phi, "phase phi (rad)");
  app.add_option("--varphi", o.varphi, "phase varphi (rad)");
  app.add_option("--t0", o.t0, "half window Omega*t0");
  app.add_option("--t", o.t, "time Omega*t for the spectrum command");
  app.add_option("--gamma1", o.gamma1, "decay rate Gamma1/Omega");
  app.add_option("--gamma2", o.gamma2, "decay rate Gamma2/Omega");
  app.add_option("--gamma3", o.gamma3, "decay rate Gamma3/Omega");
  app.add_option("--delta", o.delta, "detuning of |2>, Delta/Omega");
  app.add_option("--omega-g", o.omega_g, "ground-state offset omega_g/Omega");
  app.add_option("--from", o.from, "initial bare state (1-3)");
  app.add_option("--to", o.to, "target bare state (1-3)");
  app.add_option("--rel-tol", o.rel_tol, "relative local error tolerance");
  app.add_option("--abs-tol", o.abs_tol, "absolute local error tolerance");
  app.add_option("--max-step", o.max_step, "largest step (0: span/100)");
  app.add_option("--init-step", o.init_step, "first step (0: automatic)");
  app.add_option("--samples", o.samples, "trajectory samples for evolve");
  app.add_option("--scheme", o.scheme, "cf4 or midpoint");
  app.add_flag("--fixed-step", o.fixed_step, "advance with --max-step and no error control");
  app.add_flag("--lindblad", o.lindblad, "evolve: four-level master equation instead");
  app.add_flag("--check", o.check, "efficiency: also estimate the integration error");
  app.add_option("--axis1", o.axis1, "sweep axis name:min:max:n[:scale]");
  app.add_option("--axis2", o.axis2, "optional inner sweep axis");
  app.add_option("--gamma-channel", o.gamma_channel, "decay channel driven by a log10_Gamma axis");
  app.add_option("--resolution", o.resolution, "figure: override grid samples per axis");
  app.add_option("-o,--output", o.output, "output path (default: stdout)");
  app.add_option("--workers", o.workers, "sweep worker threads (0: all CPUs)");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and crossing analysis")->fallthrough();
  auto* evolve = app.add_subcommand("evolve", "population trajectory as CSV")->fallthrough();
  auto* efficiency = app.add_subcommand("efficiency", "final population of --to from --from")->fallthrough();
  auto* sweep = app.add_subcommand("sweep", "1D/2D parameter sweep as CSV")->fallthrough();
  auto* figure = app.add_subcommand("figure", "preset sweep for a figure panel")->fallthrough();
  figure->add_option("id", o.figure, "fig1a..fig5c")->required();
  auto* validate = app.add_subcommand("validate", "run the numerical self-checks")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*spectrum) return run_spectrum(o);
    if (*evolve) return run_evolve(o);
    if (*efficiency) return run_efficiency(o);
    if (*sweep) return run_sweep_command(o);
    if (*figure) return run_figure(o, app);
    if (*validate) return run_validate(o);
  } catch (const lzms::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const lzms::IntegrationError& e) {
    std::cerr << "integration failure: " << e.what() << '\n';
    return kExitIntegration;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
