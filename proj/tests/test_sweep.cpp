#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "lzms/csv.hpp"
#include "lzms/sweep.hpp"

using namespace lzms;

namespace {

SweepSpec small_spec() {
  SweepSpec s;
  s.label = "small";
  s.base = {0.1, 1.0, 0.0, 0.0, 0.0, 30.0};
  s.axis1 = {"omega_over_Omega", 0.0, 2.0, 4, AxisScale::Linear};
  s.axis2 = Axis{"log10_Gamma2", -2.0, 2.0, 3, AxisScale::Log10};
  s.cfg = figure_integrator_config();
  return s;
}

std::string csv_text(const SweepResult& r) {
  std::ostringstream os;
  emit_csv(r, os);
  return os.str();
}

}  // namespace

TEST(Axis, Coordinates) {
  const Axis a{"omega_over_Omega", 0.0, 2.0, 5, AxisScale::Linear};
  EXPECT_EQ(a.coordinate(0), 0.0);
  EXPECT_EQ(a.coordinate(2), 1.0);
  EXPECT_EQ(a.coordinate(4), 2.0);
  const Axis single{"phi", 0.7, 0.7, 1, AxisScale::Linear};
  EXPECT_EQ(single.coordinate(0), 0.7);
}

TEST(RunSweep, SinglePointEqualsDirectCall) {
  SweepSpec s;
  s.base = {0.2, 1.0, 0.5, 0.0, 0.0, 40.0};
  s.axis1 = {"kappa_over_Omega2", 0.3, 0.3, 1, AxisScale::Linear};
  s.cfg = figure_integrator_config();
  const auto r = run_sweep(s, 1);
  ASSERT_EQ(r.records.size(), 1u);
  ModelParams p = s.base;
  p.kappa = 0.3;
  const auto pops = final_populations(p, s.decay, 1, s.cfg);
  EXPECT_EQ(r.records[0].P1, pops[0]);
  EXPECT_EQ(r.records[0].P3, pops[2]);
  EXPECT_NEAR(r.records[0].leak, 1.0 - pops[0] - pops[1] - pops[2], 1e-15);
  EXPECT_FALSE(r.records[0].failed);
}

TEST(RunSweep, ScalesByCouplingUnit) {
  SweepSpec s;
  s.base = {0.2, 2.0, 0.0, 0.0, 0.0, 20.0};
  s.axis1 = {"omega_over_Omega", 0.5, 0.5, 1, AxisScale::Linear};
  s.axis2 = Axis{"log10_Gamma2", 0.0, 0.0, 1, AxisScale::Log10};
  s.cfg = figure_integrator_config();
  const auto r = run_sweep(s, 1);
  ModelParams p = s.base;
  p.omega = 1.0;
  DecayParams d;
  d.gamma2 = 2.0;
  EXPECT_EQ(r.records[0].P3, final_populations(p, d, 1, s.cfg)[2]);
}

TEST(RunSweep, DeterministicAcrossWorkerCounts) {
  const auto spec = small_spec();
  const std::string one = csv_text(run_sweep(spec, 1));
  EXPECT_EQ(one, csv_text(run_sweep(spec, 3)));
  EXPECT_EQ(one, csv_text(run_sweep(spec, 8)));
}

TEST(RunSweep, GridIsCompleteAndOrdered) {
  const auto spec = small_spec();
  const auto r = run_sweep(spec, 2);
  ASSERT_EQ(r.records.size(), 12u);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(r.at(i, j).axis1, spec.axis1.coordinate(i));
      EXPECT_EQ(r.at(i, j).axis2, spec.axis2->coordinate(j));
      EXPECT_FALSE(r.at(i, j).failed);
    }
  EXPECT_EQ(r.failures(), 0u);
}

TEST(RunSweep, FailedPointsAreFlaggedNotDropped) {
  auto spec = small_spec();
  spec.cfg.rel_tol = 1e-30;
  spec.cfg.abs_tol = 1e-300;
  spec.base.t0 = 2.0;
  spec.axis2.reset();
  const auto r = run_sweep(spec, 2);
  ASSERT_EQ(r.records.size(), 4u);
  EXPECT_EQ(r.failures(), 4u);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.failed);
    EXPECT_TRUE(std::isnan(rec.P3));
    EXPECT_FALSE(rec.error.empty());
  }
}

TEST(RunSweep, DecayChannelAxis) {
  SweepSpec s;
  s.base = {0.1, 1.0, 1.0, 0.0, 0.0, 30.0};
  s.axis1 = {"log10_Gamma", 0.0, 0.0, 1, AxisScale::Log10};
  s.axis2 = Axis{"decay_channel", 1.0, 3.0, 3, AxisScale::Linear};
  s.cfg = figure_integrator_config();
  const auto r = run_sweep(s, 1);
  for (int ch = 1; ch <= 3; ++ch) {
    DecayParams d;
    (ch == 1 ? d.gamma1 : ch == 2 ? d.gamma2 : d.gamma3) = 1.0;
    EXPECT_EQ(r.at(0, ch - 1).P3, final_populations(s.base, d, 1, s.cfg)[2]) << "channel " << ch;
  }
}

TEST(RunSweep, SlowIdealSweepTransfersEfficiently) {
  // Top corner of the coupling-ratio/sweep-rate map at the smallest rates.
  SweepSpec s = figure_spec("fig1a");
  s.axis1 = {"omega_over_Omega", 0.0, 0.4, 3, AxisScale::Linear};
  s.axis2 = Axis{"kappa_over_Omega2", 0.05, 0.1, 2, AxisScale::Linear};
  const auto r = run_sweep(s, 2);
  for (const auto& rec : r.records) EXPECT_GT(rec.P3, 0.9) << rec.axis1 << "," << rec.axis2;
}

TEST(Validate, AxisRules) {
  auto s = small_spec();
  s.axis1.name = "bogus";
  EXPECT_THROW(validate(s), ParameterError);
  s = small_spec();
  s.axis1.scale = AxisScale::Log10;
  EXPECT_THROW(validate(s), ParameterError);
  s = small_spec();
  s.axis2->scale = AxisScale::Linear;
  EXPECT_THROW(validate(s), ParameterError);
  s = small_spec();
  s.axis2 = s.axis1;
  EXPECT_THROW(validate(s), ParameterError);
  s = small_spec();
  s.axis1.min = 3.0;
  EXPECT_THROW(validate(s), ParameterError);
  s = small_spec();
  s.axis2 = Axis{"decay_channel", 1.0, 3.0, 3, AxisScale::Linear};
  EXPECT_THROW(validate(s), ParameterError);
  s = small_spec();
  s.from = 4;
  EXPECT_THROW(validate(s), ParameterError);
  EXPECT_NO_THROW(validate(small_spec()));
}

TEST(FigureSpec, AllPresetsValid) {
  for (auto id : kFigureIds) {
    const auto s = figure_spec(id);
    EXPECT_NO_THROW(validate(s)) << id;
    EXPECT_EQ(s.label, id);
    EXPECT_EQ(s.base.Omega, 1.0);
    EXPECT_EQ(s.from, 1);
    EXPECT_EQ(s.to, 3);
    ASSERT_TRUE(s.axis2.has_value());
  }
}

TEST(FigureSpec, PresetParameters) {
  auto s = figure_spec("fig1b");
  EXPECT_EQ(s.axis1.name, "omega_over_Omega");
  EXPECT_EQ(s.axis2->name, "kappa_over_Omega2");
  EXPECT_EQ(s.axis2->min, 0.05);
  EXPECT_EQ(s.axis2->max, 5.0);
  EXPECT_EQ(s.base.t0, 500.0);
  EXPECT_DOUBLE_EQ(s.base.varphi, pi / 2.0);

  s = figure_spec("fig2c");
  EXPECT_EQ(s.axis1.name, "log10_Gamma");
  EXPECT_EQ(s.axis1.min, -5.0);
  EXPECT_EQ(s.axis1.max, 5.0);
  EXPECT_EQ(s.axis2->name, "decay_channel");
  EXPECT_EQ(s.base.omega, 1.0);
  EXPECT_EQ(s.base.kappa, 1.0);
  EXPECT_EQ(s.base.t0, 50.0);

  s = figure_spec("fig3b");
  EXPECT_EQ(s.axis1.name, "log10_Gamma2");
  EXPECT_EQ(s.axis2->name, "kappa_over_Omega2");
  EXPECT_EQ(s.base.omega, 0.5);

  s = figure_spec("fig4c");
  EXPECT_EQ(s.axis2->name, "omega_over_Omega");
  EXPECT_EQ(s.base.kappa, 0.1);
  EXPECT_EQ(s.base.t0, 500.0);
  EXPECT_DOUBLE_EQ(s.base.varphi, pi);

  s = figure_spec("fig5a");
  EXPECT_EQ(s.base.kappa, 1.0);
  EXPECT_EQ(s.base.t0, 50.0);
  EXPECT_EQ(s.base.varphi, 0.0);
}

TEST(FigureSpec, UnknownIdListsValidIds) {
  try {
    figure_spec("fig9z");
    FAIL();
  } catch (const ParameterError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("fig9z"), std::string::npos);
    EXPECT_NE(msg.find("fig1a"), std::string::npos);
    EXPECT_NE(msg.find("fig5c"), std::string::npos);
  }
}
