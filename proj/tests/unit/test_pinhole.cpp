#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "siv/errors.hpp"
#include "siv/pinhole/io.hpp"
#include "siv/pinhole/simulate.hpp"

using namespace siv::pinhole;
using siv::Vec2;
using siv::Vec3;

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

BeamSpec low_energy_beam() {
  BeamSpec b;
  b.energy_mev = 0.4;
  b.lateral_radius_um = 0.6;
  return b;
}

SimulationOptions single_thread() {
  SimulationOptions o;
  o.threads = 1;
  return o;
}

}  // namespace

TEST(PathLength, AxialThroughHoleIsZero) {
  PinholeGeometry g;
  EXPECT_DOUBLE_EQ(path_length_in_wall(g, Vec2(0, 0), Vec3::UnitZ()), 0.0);
}

TEST(PathLength, FullFoilFarFromCone) {
  PinholeGeometry g;
  EXPECT_NEAR(path_length_in_wall(g, Vec2(200.0, 0), Vec3::UnitZ()), 27.5, 1e-9);
}

TEST(PathLength, TaperThicknessAtHalfMicronBeyondRim) {
  PinholeGeometry g;
  const double expected = 0.5 * std::tan(40.0 * kDeg);
  EXPECT_NEAR(path_length_in_wall(g, Vec2(1.0, 0), Vec3::UnitZ()), expected, 1e-9);
  EXPECT_NEAR(path_length_in_wall(g, Vec2(0, -1.0), Vec3::UnitZ()), expected, 1e-9);
}

TEST(PathLength, BoundedByObliqueFoilThickness) {
  PinholeGeometry g;
  g.wall_angle_deg = 25.0;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pos(-40.0, 40.0);
  std::uniform_real_distribution<double> ang(-0.3, 0.3);
  for (int i = 0; i < 2000; ++i) {
    Vec3 dir(ang(rng), ang(rng), 1.0);
    dir.normalize();
    const double len = path_length_in_wall(g, Vec2(pos(rng), pos(rng)), dir);
    EXPECT_GE(len, 0.0);
    EXPECT_LE(len, g.foil_thickness_um / dir.z() + 1e-9);
  }
}

TEST(PathLength, VerticalWallsAreFullThickness) {
  PinholeGeometry g;
  g.wall_angle_deg = 90.0;
  EXPECT_NEAR(path_length_in_wall(g, Vec2(0.51, 0), Vec3::UnitZ()), 27.5, 1e-9);
  EXPECT_DOUBLE_EQ(path_length_in_wall(g, Vec2(0.49, 0), Vec3::UnitZ()), 0.0);
}

TEST(Geometry, ValidateRejectsBadValues) {
  PinholeGeometry g;
  g.wall_angle_deg = 0.0;
  EXPECT_THROW(g.validate(), siv::ConfigError);
  g = {};
  g.wall_angle_deg = 91.0;
  EXPECT_THROW(g.validate(), siv::ConfigError);
  g = {};
  g.diameter_um = 0.0;
  EXPECT_THROW(g.validate(), siv::ConfigError);
  g = {};
  g.tilt_vertical_deg = std::nan("");
  EXPECT_THROW(g.validate(), siv::ConfigError);
}

TEST(ConicalWall, MaterialRegions) {
  PinholeGeometry g;
  ConicalWall w(g);
  EXPECT_EQ(w.material_at(Vec3(0, 0, 100)), -1);
  EXPECT_EQ(w.material_at(Vec3(5000, 0, 100)), 0);
  EXPECT_EQ(w.material_at(Vec3(5000, 0, -1)), -1);
  EXPECT_NEAR(w.hole_radius_nm(0), 500.0, 1e-9);
  EXPECT_NEAR(w.hole_radius_nm(1000), 500.0 + 1000.0 / std::tan(40.0 * kDeg), 1e-6);
}

TEST(Beam, ValidationAndWarnings) {
  BeamSpec b;
  b.energy_mev = 0.0;
  EXPECT_THROW(b.validate(), siv::ConfigError);
  b = {};
  b.divergence_mrad = -1;
  EXPECT_THROW(b.validate(), siv::ConfigError);
  b = {};
  b.energy_mev = 5.0;
  EXPECT_NO_THROW(b.validate());
  EXPECT_FALSE(b.warnings().empty());
}

TEST(Tally, ConservationAndRadialSum) {
  const auto t = simulate_pinhole(low_energy_beam(), PinholeGeometry{}, 1.0, 3000, 17, single_thread());
  EXPECT_EQ(t.launched, 3000u);
  EXPECT_EQ(t.launched, t.direct + t.scattered + t.stopped_in_wall + t.blocked);
  EXPECT_TRUE(t.invariants_hold());
  EXPECT_GT(t.direct, 0u);
}

TEST(Tally, ScatteredLoseEnergyDirectKeepIt) {
  BeamSpec b = low_energy_beam();
  SimulationOptions o = single_thread();
  o.binning.keep_direct_impacts = true;
  PinholeGeometry g;
  g.wall_angle_deg = 20.0;
  const auto t = simulate_pinhole(b, g, 1.0, 3000, 23, o);
  ASSERT_GT(t.scattered, 0u);
  for (const auto& imp : t.impacts()) {
    if (imp.scattered) {
      EXPECT_LT(imp.energy_ev, 0.4e6);
    } else {
      EXPECT_FLOAT_EQ(imp.energy_ev, 0.4e6f);
    }
  }
}

TEST(Tally, SameSeedAnyThreadCount) {
  SimulationOptions o1 = single_thread();
  SimulationOptions o3 = single_thread();
  o3.threads = 3;
  PinholeGeometry g;
  g.wall_angle_deg = 20.0;
  const auto a = simulate_pinhole(low_energy_beam(), g, 1.0, 2000, 5, o1);
  const auto b = simulate_pinhole(low_energy_beam(), g, 1.0, 2000, 5, o3);
  EXPECT_EQ(a.direct, b.direct);
  EXPECT_EQ(a.scattered, b.scattered);
  EXPECT_EQ(a.stopped_in_wall, b.stopped_in_wall);
  EXPECT_EQ(a.direct_histogram(), b.direct_histogram());
  EXPECT_EQ(a.scattered_radial(), b.scattered_radial());
  ASSERT_EQ(a.impacts().size(), b.impacts().size());
  for (std::size_t i = 0; i < a.impacts().size(); ++i) {
    EXPECT_EQ(a.impacts()[i].x_um, b.impacts()[i].x_um);
    EXPECT_EQ(a.impacts()[i].energy_ev, b.impacts()[i].energy_ev);
  }
}

TEST(Tally, DirectSpotWidthMatchesGeometricConvolution) {
  BeamSpec b = low_energy_beam();
  SimulationOptions o = single_thread();
  o.binning.keep_direct_impacts = true;
  PinholeGeometry g;
  const double d_mm = 1.0;
  const auto t = simulate_pinhole(b, g, d_mm, 20000, 31, o);
  double sxx = 0, syy = 0;
  std::size_t n = 0;
  for (const auto& imp : t.impacts()) {
    if (imp.scattered) continue;
    sxx += double(imp.x_um) * imp.x_um;
    syy += double(imp.y_um) * imp.y_um;
    ++n;
  }
  ASSERT_GT(n, 5000u);
  // Uniform disk of the aperture radius (variance R^2/4 per axis) convolved
  // with the angular spread over the flight from the entrance face.
  const double flight_um = d_mm * 1e3 + g.foil_thickness_um;
  const double spread = flight_um * b.divergence_mrad * 1e-3;
  const double expected = std::sqrt(0.5 * 0.5 / 4.0 + spread * spread);
  EXPECT_NEAR(std::sqrt(sxx / n), expected, 0.03 * expected);
  EXPECT_NEAR(std::sqrt(syy / n), expected, 0.03 * expected);
}

TEST(Tally, SmallTiltBarelyChangesTransmission) {
  BeamSpec b = low_energy_beam();
  PinholeGeometry flat;
  PinholeGeometry tilted;
  tilted.tilt_horizontal_deg = 0.3;
  tilted.tilt_vertical_deg = 0.3;
  const auto a = simulate_pinhole(b, flat, 1.0, 10000, 8, single_thread());
  const auto c = simulate_pinhole(b, tilted, 1.0, 10000, 8, single_thread());
  const double fa = double(a.direct) / a.launched;
  const double fc = double(c.direct) / c.launched;
  EXPECT_LT(std::abs(fc - fa) / fa, 0.05);
}

TEST(Tally, ThinFoilWarnsNotOpaque) {
  PinholeGeometry g;
  g.foil_thickness_um = 0.3;
  BeamSpec b;
  b.lateral_radius_um = 0.6;
  const auto t = simulate_pinhole(b, g, 1.0, 50, 2, single_thread());
  bool found = false;
  for (const auto& w : t.warnings) found = found || w.find("not opaque") != std::string::npos;
  EXPECT_TRUE(found);
  const auto thick = simulate_pinhole(b, PinholeGeometry{}, 1.0, 50, 2, single_thread());
  for (const auto& w : thick.warnings) EXPECT_EQ(w.find("not opaque"), std::string::npos);
}

TEST(Tally, MultiPlaneMatchesSinglePlane) {
  const std::vector<double> d{0.8, 1.0};
  PinholeGeometry g;
  g.wall_angle_deg = 20.0;
  const auto planes = simulate_pinhole_planes(low_energy_beam(), g, d, 1500, 9, single_thread());
  const auto single = simulate_pinhole(low_energy_beam(), g, 1.0, 1500, 9, single_thread());
  ASSERT_EQ(planes.size(), 2u);
  EXPECT_EQ(planes[1].direct, single.direct);
  EXPECT_EQ(planes[1].scattered, single.scattered);
  EXPECT_EQ(planes[0].direct + planes[0].scattered, planes[1].direct + planes[1].scattered);
}

TEST(Ratio, ZeroScatteredAndUndefined) {
  SamplePlaneTally t;
  EXPECT_THROW(scattered_to_direct_ratio(t), siv::UndefinedRatioError);
  t.add_direct(0, 0, 1e6);
  EXPECT_EQ(scattered_to_direct_ratio(t), 0.0);
  t.add_scattered(10, 0, 1e5);
  t.add_scattered(20, 0, 1e5);
  EXPECT_DOUBLE_EQ(scattered_to_direct_ratio(t), 2.0);
}

TEST(RadialProfile, EmptyTallyGivesEmptyProfile) {
  SamplePlaneTally t;
  EXPECT_TRUE(radial_density_profile(t, 5.0).bins.empty());
  EXPECT_THROW(radial_density_profile(t, 0.0), siv::DomainError);
}

TEST(RadialProfile, ScatteredWithoutDirectThrows) {
  SamplePlaneTally t;
  t.add_scattered(1, 1, 1e5);
  EXPECT_THROW(radial_density_profile(t, 5.0), siv::NormalizationError);
}

TEST(RadialProfile, UniformImpactsGiveFlatProfileAndConserveCounts) {
  SamplePlaneTally t;
  for (int i = 0; i < 100; ++i) t.add_direct(0.01, 0.01, 1e6);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r_max = 600.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double r = r_max * std::sqrt(u(rng));
    const double phi = 2.0 * 3.14159265358979323846 * u(rng);
    t.add_scattered(r * std::cos(phi), r * std::sin(phi), 1e5);
  }
  const auto p = radial_density_profile(t, 50.0);
  ASSERT_FALSE(p.bins.empty());
  EXPECT_GE(p.bins.back().r_outer_um, 500.0);
  const double expected = n / (3.14159265358979323846 * r_max * r_max) / p.reference_density_per_um2;
  double total = 0.0;
  for (const auto& b : p.bins) {
    const double area = 3.14159265358979323846 * (b.r_outer_um * b.r_outer_um - b.r_inner_um * b.r_inner_um);
    total += b.relative_density * p.reference_density_per_um2 * area;
    if (b.r_outer_um <= r_max - 1e-9) EXPECT_NEAR(b.relative_density, expected, 0.05 * expected) << b.radius_um;
    EXPECT_GE(b.relative_density, 0.0);
  }
  EXPECT_NEAR(total, double(n), 1e-6 * n);
}

TEST(RadialProfile, ReferenceIsPeakDirectBin) {
  SamplePlaneTally t;
  for (int i = 0; i < 8; ++i) t.add_direct(0.01, 0.01, 1e6);
  const double bin_area = 0.05 * 0.05;
  EXPECT_NEAR(t.peak_direct_density_per_um2(), 8.0 / bin_area, 1e-9);
}

TEST(TallyIo, SaveLoadRoundTrip) {
  PinholeGeometry g;
  g.wall_angle_deg = 20.0;
  const auto t = simulate_pinhole(low_energy_beam(), g, 1.0, 1500, 19, single_thread());
  std::stringstream ss;
  save_tally(ss, t, {{"energy_mev", 0.4}});
  std::stringstream copy(ss.str());
  const auto header = read_tally_header(copy);
  EXPECT_DOUBLE_EQ(header.at("energy_mev").get<double>(), 0.4);
  const auto back = load_tally(ss);
  EXPECT_EQ(back.launched, t.launched);
  EXPECT_EQ(back.direct, t.direct);
  EXPECT_EQ(back.scattered, t.scattered);
  EXPECT_EQ(back.stopped_in_wall, t.stopped_in_wall);
  EXPECT_EQ(back.blocked, t.blocked);
  EXPECT_EQ(back.direct_histogram(), t.direct_histogram());
  EXPECT_EQ(back.scattered_radial(), t.scattered_radial());
  EXPECT_DOUBLE_EQ(back.distance_mm(), t.distance_mm());
  EXPECT_TRUE(back.invariants_hold());
}

TEST(TallyIo, MalformedInputThrows) {
  std::stringstream ss("NOT A TALLY\n");
  EXPECT_THROW(load_tally(ss), siv::ConfigError);
}

TEST(TallyIo, RadialCsvHeader) {
  SamplePlaneTally t;
  t.add_direct(0, 0, 1e6);
  t.add_scattered(3, 4, 1e5);
  std::ostringstream os;
  write_radial_profile_csv(os, radial_density_profile(t, 5.0));
  EXPECT_NE(os.str().find("radius_um,relative_density"), std::string::npos);
}
