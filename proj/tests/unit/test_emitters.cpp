#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "siv/emitters/io.hpp"
#include "siv/emitters/session.hpp"
#include "siv/emitters/stats.hpp"
#include "siv/errors.hpp"

using namespace siv::emitters;

namespace {
const double kArea = 3.14159265358979323846 * 0.5e-4 * 0.5e-4;
}

TEST(Constants, NominalAreaAndPlanningYield) {
  EXPECT_NEAR(kNominalSpotAreaCm2, kArea, 1e-22);
  EXPECT_NEAR(kDefaultPlanningYield, 0.0212, 1e-4);
}

TEST(CountRate, Examples) {
  const auto one = emitters_from_countrate(2700.0, 1.0);
  EXPECT_DOUBLE_EQ(one.value, 1.0);
  EXPECT_NEAR(one.sigma, 0.11, 0.002);
  EXPECT_DOUBLE_EQ(emitters_from_countrate(0.0, 3.0).value, 0.0);
  EXPECT_DOUBLE_EQ(emitters_from_countrate(5400.0, 2.0).value, 4.0);
  EXPECT_THROW(emitters_from_countrate(-1.0, 1.0), siv::DomainError);
  EXPECT_THROW(emitters_from_countrate(100.0, 0.5), siv::DomainError);
}

TEST(CountRate, LinearInRateAndArea) {
  for (double r : {100.0, 1234.5, 9000.0}) {
    for (double a : {1.0, 1.7, 4.0}) {
      EXPECT_NEAR(emitters_from_countrate(3 * r, a).value, 3 * emitters_from_countrate(r, a).value, 1e-12);
      EXPECT_NEAR(emitters_from_countrate(r, 2 * a).value, 2 * emitters_from_countrate(r, a).value, 1e-12);
    }
  }
}

TEST(Yield, Examples) {
  EXPECT_DOUBLE_EQ(activation_yield(1e10 * kArea, 1e10, kArea), 1.0);
  EXPECT_EQ(activation_yield(0.0, 1e12), 0.0);
  const double ions = 0.6e10 * kNominalSpotAreaCm2;
  EXPECT_NEAR(ions, 47.1, 0.1);
  EXPECT_NEAR(activation_yield(1.0, 0.6e10), 0.0212, 1e-4);
  EXPECT_THROW(activation_yield(1.0, 0.0), siv::DomainError);
  try {
    activation_yield(100.0, 1e8);
    FAIL() << "expected InconsistentInputsError";
  } catch (const siv::InconsistentInputsError& e) {
    EXPECT_GT(e.value(), 1.0);
  }
}

TEST(Poisson, PmfNormalizationAndMean) {
  for (double lambda : {0.0, 0.5, 1.0, 2.6, 30.0, 1000.0}) {
    const auto p = poisson_spot_distribution(lambda);
    const double norm = std::accumulate(p.begin(), p.end(), 0.0);
    double mean = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) mean += k * p[k];
    EXPECT_NEAR(norm, 1.0, 1e-10) << lambda;
    EXPECT_NEAR(mean, lambda, 1e-8 * std::max(1.0, lambda)) << lambda;
    EXPECT_GE(p.size(), 21u);
  }
  EXPECT_DOUBLE_EQ(poisson_spot_distribution(0.0)[0], 1.0);
  EXPECT_THROW(poisson_spot_distribution(-1.0), siv::DomainError);
}

TEST(Poisson, SingleEmitterFractions) {
  EXPECT_NEAR(single_emitter_fraction(0.5), 0.3033, 1e-4);
  EXPECT_NEAR(single_emitter_fraction(1.0), 0.3679, 1e-4);
  EXPECT_NEAR(single_emitter_fraction(2.0), 0.2707, 1e-4);
  EXPECT_EQ(single_emitter_fraction(0.0), 0.0);
  EXPECT_NEAR(poisson_spot_distribution(1.0)[1], std::exp(-1.0), 1e-15);
}

TEST(Planning, FluenceForMeanAnchor) {
  EXPECT_NEAR(fluence_for_mean(1.0, 0.021), 0.6e10, 0.05 * 0.6e10);
  EXPECT_EQ(fluence_for_mean(0.0, 0.021), 0.0);
  EXPECT_DOUBLE_EQ(fluence_for_mean(1.0, 0.042), 0.5 * fluence_for_mean(1.0, 0.021));
  EXPECT_THROW(fluence_for_mean(1.0, 0.0), siv::InfeasibleTargetError);
  EXPECT_THROW(fluence_for_mean(-1.0, 0.02), siv::DomainError);
}

TEST(Planning, RoundTripThroughActivationYield) {
  for (double f : {1e9, 0.6e10, 3.3e11, 1e13}) {
    const double y = 0.021;
    const double lambda = y * f * kNominalSpotAreaCm2;
    EXPECT_NEAR(fluence_for_mean(lambda, y), f, 1e-12 * f);
    EXPECT_NEAR(activation_yield(lambda, f), y, 1e-15);
  }
}

TEST(Planning, SessionDChain) {
  const double lambda = 1.6e10 * 0.021 * kNominalSpotAreaCm2;
  EXPECT_NEAR(lambda, 2.64, 0.01);
  EXPECT_NEAR(single_emitter_fraction(lambda), 0.19, 0.005);
}

TEST(Session, LaddersExact) {
  const auto c = halving_ladder(1.28e11, 8);
  const std::vector<double> expected{1.28e11, 6.4e10, 3.2e10, 1.6e10, 0.8e10, 0.4e10, 0.2e10, 0.1e10};
  ASSERT_EQ(c.size(), expected.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], expected[i]);
  const auto l = log_ladder(1e14, 1e8, 7);
  EXPECT_DOUBLE_EQ(l.front(), 1e14);
  EXPECT_NEAR(l.back(), 1e8, 1e-6);
  EXPECT_NEAR(l[1], 1e13, 1e-2);
}

TEST(Session, PresetA) {
  const auto plan = plan_session(session_preset("A"));
  ASSERT_EQ(plan.spots.size(), 50u);
  EXPECT_DOUBLE_EQ(plan.energy_mev, 2.9);
  for (const auto& s : plan.spots) {
    EXPECT_DOUBLE_EQ(s.position_um.x(), s.column * 5.0);
    EXPECT_DOUBLE_EQ(s.position_um.y(), s.row * 5.0);
    EXPECT_NEAR(s.expected_ions, s.fluence_cm2 * kNominalSpotAreaCm2, 1e-9 * s.expected_ions);
  }
  EXPECT_DOUBLE_EQ(plan.spots.front().fluence_cm2, 1e14);
  EXPECT_TRUE(plan.markers.empty());
}

TEST(Session, PresetCColumnsHalve) {
  const auto plan = plan_session(session_preset("C"));
  ASSERT_EQ(plan.spots.size(), 24u);
  for (int c = 0; c < 8; ++c) EXPECT_EQ(plan.spots[c].fluence_cm2, std::ldexp(1.28e11, -c));
  EXPECT_EQ(plan.spots[8].fluence_cm2, 1.28e11);
}

TEST(Session, PresetDHasFiveSpotsAndMarkers) {
  const auto plan = plan_session(session_preset("D"));
  ASSERT_EQ(plan.spots.size(), 5u);
  for (const auto& s : plan.spots) EXPECT_EQ(s.fluence_cm2, 1.6e10);
  ASSERT_EQ(plan.markers.size(), 2u);
  EXPECT_TRUE(plan.markers[0].marker);
  EXPECT_DOUBLE_EQ(plan.energy_mev, 0.4);
}

TEST(Session, UnknownPresetAndBadGrid) {
  EXPECT_THROW(session_preset("Z"), siv::ConfigError);
  auto s = session_preset("A");
  s.rows = 0;
  EXPECT_THROW(plan_session(s), siv::ConfigError);
  s = session_preset("A");
  s.fluence_ladder_cm2 = {1e12, 1e11};
  EXPECT_THROW(plan_session(s), siv::ConfigError);
}

TEST(Session, SingleSpotAtOrigin) {
  SessionSpec s;
  s.fluence_ladder_cm2 = {1e11};
  const auto plan = plan_session(s);
  ASSERT_EQ(plan.spots.size(), 1u);
  EXPECT_EQ(plan.spots[0].position_um, siv::Vec2(0, 0));
}

TEST(Session, OutOfRangeFluenceWarns) {
  SessionSpec s;
  s.fluence_ladder_cm2 = {1e15};
  EXPECT_FALSE(plan_session(s).warnings.empty());
  s.fluence_ladder_cm2 = {1e12};
  EXPECT_TRUE(plan_session(s).warnings.empty());
}

TEST(Session, ExpectedEmittersUseYieldModel) {
  SessionSpec s;
  s.fluence_ladder_cm2 = {1e12};
  const auto plan = plan_session(s, YieldModel::constant(0.05));
  EXPECT_NEAR(plan.spots[0].expected_emitters, 0.05 * plan.spots[0].expected_ions, 1e-12);
}

TEST(YieldModelTest, InterpolationAndClamp) {
  YieldModel m({{2.9, 1e12, 0.02}, {2.9, 1e14, 0.04}, {0.4, 1e12, 0.01}});
  EXPECT_NEAR(m.yield_at(2.9, 1e13), 0.03, 1e-12);
  EXPECT_NEAR(m.yield_at(2.9, 1e15), 0.04, 1e-12);
  EXPECT_NEAR(m.yield_at(2.8, 1e12), 0.02, 1e-12);
  EXPECT_NEAR(m.yield_at(0.5, 1e12), 0.01, 1e-12);
}

TEST(YieldModelTest, ConstantBelow1e12) {
  YieldModel m({{2.9, 1e11, 0.001}, {2.9, 1e12, 0.02}, {2.9, 1e14, 0.04}});
  EXPECT_NEAR(m.yield_at(2.9, 1e10), 0.02, 1e-12);
  EXPECT_NEAR(m.yield_at(2.9, 3e11), 0.02, 1e-12);
  YieldModel free({{2.9, 1e11, 0.001}, {2.9, 1e12, 0.02}}, kDefaultPlanningYield, false);
  EXPECT_NEAR(free.yield_at(2.9, 1e11), 0.001, 1e-12);
}

TEST(YieldModelTest, EmptyTableDefaultAndValidation) {
  EXPECT_DOUBLE_EQ(YieldModel().yield_at(1.0, 1e10), kDefaultPlanningYield);
  EXPECT_DOUBLE_EQ(YieldModel::constant(0.3).yield_at(0.4, 1e8), 0.3);
  EXPECT_THROW(YieldModel({{2.9, 1e12, 1.5}}), siv::ConfigError);
  EXPECT_THROW(YieldModel({{2.9, -1.0, 0.1}}), siv::ConfigError);
}

TEST(Calibration, Validate) {
  CalibrationConstants c;
  EXPECT_NO_THROW(c.validate());
  c.single_emitter_rate_cps = 0;
  EXPECT_THROW(c.validate(), siv::ConfigError);
}

TEST(EmittersIo, PlanJsonRoundTrip) {
  const auto plan = plan_session(session_preset("D"));
  const auto back = plan_from_json(plan_to_json(plan));
  EXPECT_EQ(back.label, plan.label);
  EXPECT_DOUBLE_EQ(back.energy_mev, plan.energy_mev);
  ASSERT_EQ(back.spots.size(), plan.spots.size());
  ASSERT_EQ(back.markers.size(), plan.markers.size());
  for (std::size_t i = 0; i < plan.spots.size(); ++i) {
    EXPECT_EQ(back.spots[i].position_um, plan.spots[i].position_um);
    EXPECT_DOUBLE_EQ(back.spots[i].fluence_cm2, plan.spots[i].fluence_cm2);
    EXPECT_DOUBLE_EQ(back.spots[i].expected_emitters, plan.spots[i].expected_emitters);
  }
}

TEST(EmittersIo, SessionAndYieldFromJson) {
  const auto s = session_from_json({{"preset", "C"}, {"rows", 2}});
  EXPECT_EQ(s.rows, 2);
  EXPECT_EQ(s.columns, 8);
  const auto m = yield_model_from_json(
      {{"default_yield", 0.03}, {"table", {{{"energy_mev", 2.9}, {"fluence_cm2", 1e13}, {"yield", 0.05}}}}});
  EXPECT_NEAR(m.yield_at(2.9, 1e13), 0.05, 1e-12);
  const auto back = yield_model_from_json(yield_model_to_json(m));
  EXPECT_NEAR(back.yield_at(2.9, 1e13), 0.05, 1e-12);
}

TEST(EmittersIo, PlanCsvHeader) {
  std::ostringstream os;
  write_plan_csv(os, plan_session(session_preset("D")));
  EXPECT_NE(os.str().find("x_um,y_um,fluence_cm2,expected_ions,expected_emitters"), std::string::npos);
}
