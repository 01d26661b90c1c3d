#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "siv/analysis/fits.hpp"
#include "siv/analysis/io.hpp"
#include "siv/analysis/nlls.hpp"
#include "siv/analysis/spots.hpp"
#include "siv/analysis/yield_curve.hpp"
#include "siv/errors.hpp"
#include "siv/optics/confocal.hpp"
#include "siv/optics/hbt.hpp"

using namespace siv::analysis;
using siv::Vec2;

namespace {

double line(double x, std::span<const double> p) { return p[0] + p[1] * x; }

double decay(double x, std::span<const double> p) { return p[0] * std::exp(-x / p[1]); }

siv::optics::EmitterField field_at(std::initializer_list<Vec2> positions, double cps) {
  siv::optics::EmitterField f;
  int i = 0;
  for (const auto& p : positions)
    f.emitters.push_back({p, 1000.0, cps, siv::optics::EmitterOrigin::kDirect, i++});
  return f;
}

SpotRecord spot(double peak, double fwhm) {
  SpotRecord s;
  s.centroid_um = Vec2(0, 0);
  s.peak_rate_cps = peak;
  s.integrated_rate_cps = peak;
  s.fwhm_nm = fwhm;
  return s;
}

}  // namespace

TEST(Nlls, LinearFitExact) {
  std::vector<double> x{0, 1, 2, 3, 4}, y, s(5, 1.0);
  for (double v : x) y.push_back(2.0 + 0.5 * v);
  const auto r = nlls_fit(line, x, y, s, {0.0, 0.0});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.params[0], 2.0, 1e-8);
  EXPECT_NEAR(r.params[1], 0.5, 1e-8);
  EXPECT_NEAR(r.chi2, 0.0, 1e-12);
}

TEST(Nlls, LinearCovarianceMatchesClosedForm) {
  // Ordinary least squares with unit weights: Var(slope) = 1 / Sxx.
  std::vector<double> x{0, 1, 2, 3, 4, 5}, y{0.1, 1.2, 1.9, 3.2, 3.9, 5.1}, s(6, 1.0);
  const auto r = nlls_fit(line, x, y, s, {0.0, 1.0});
  ASSERT_TRUE(r.converged);
  const double xm = 2.5;
  double sxx = 0;
  for (double v : x) sxx += (v - xm) * (v - xm);
  EXPECT_NEAR(r.sigmas[1], std::sqrt(1.0 / sxx), 1e-6);
  EXPECT_NEAR(r.sigmas[0], std::sqrt(1.0 / 6.0 + xm * xm / sxx), 1e-6);
  EXPECT_EQ(r.reduced_chi2, r.chi2 / 4.0);
}

TEST(Nlls, ExponentialFromPoorStart) {
  std::vector<double> x, y, s;
  for (int i = 0; i < 30; ++i) {
    x.push_back(i * 0.5);
    y.push_back(5.0 * std::exp(-x.back() / 3.0));
    s.push_back(0.01);
  }
  const auto r = nlls_fit(decay, x, y, s, {1.0, 10.0});
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.params[0], 5.0, 1e-6);
  EXPECT_NEAR(r.params[1], 3.0, 1e-6);
}

TEST(Nlls, BadlyScaledParametersReachMinimum) {
  // Amplitude, length and floor differ by eight orders of magnitude.
  std::vector<double> r, y, s;
  for (int i = 0; i < 50; ++i) {
    r.push_back(10.0 * i + 5.0);
    y.push_back(exponential_background(r.back(), std::vector<double>{1.2e-4, 84.0, 2.5e-6}));
    s.push_back(0.02 * y.back());
  }
  const auto fit = nlls_fit(exponential_background, r, y, s, {3.8e-4, 55.0, 2.2e-6});
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.params[0] / 1.2e-4, 1.0, 1e-6);
  EXPECT_NEAR(fit.params[1] / 84.0, 1.0, 1e-6);
  EXPECT_NEAR(fit.params[2] / 2.5e-6, 1.0, 1e-6);
  for (double v : fit.sigmas) EXPECT_GT(v, 0.0);
}

TEST(Nlls, AcceptedNormsNeverIncrease) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> x, y, s;
  for (int i = 0; i < 40; ++i) {
    x.push_back(i * 0.25);
    y.push_back(2.0 * std::exp(-x.back() / 1.5) + noise(rng));
    s.push_back(0.05);
  }
  const auto r = nlls_fit(decay, x, y, s, {0.5, 8.0});
  ASSERT_GE(r.accepted_norms.size(), 2u);
  for (std::size_t i = 1; i < r.accepted_norms.size(); ++i)
    EXPECT_LE(r.accepted_norms[i], r.accepted_norms[i - 1]);
  EXPECT_NEAR(r.residual_norm, r.accepted_norms.back(), 1e-12);
}

TEST(Nlls, FixedParameterStaysPut) {
  std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7}, s(4, 1.0);
  NllsOptions o;
  o.fixed = {true, false};
  const auto r = nlls_fit(line, x, y, s, {0.0, 1.0}, o);
  EXPECT_EQ(r.params[0], 0.0);
  EXPECT_NEAR(r.params[1], (3 + 10 + 21) / 14.0, 1e-8);
}

TEST(Nlls, ErrorCases) {
  std::vector<double> x{0, 1}, y{1, 2}, s{1, 1};
  EXPECT_THROW(nlls_fit(line, x, y, s, {0, 0, 0}), siv::DomainError);
  std::vector<double> bad{1, 0};
  EXPECT_THROW(nlls_fit(line, x, y, bad, {0, 0}), siv::DomainError);
  std::vector<double> x4{0, 1, 2, 3}, y4{1, 1, 1, 1}, s4(4, 1.0);
  auto ignores_second = [](double xv, std::span<const double> p) { return p[0] + 0.0 * xv; };
  EXPECT_THROW(nlls_fit(ignores_second, x4, y4, s4, {0.0, 1.0}), siv::DegenerateFitError);
}

TEST(Exponential, RecoversParametersAndPassesRunsTest) {
  std::mt19937_64 rng(10);
  std::vector<double> r, y, s;
  for (int i = 0; i < 60; ++i) {
    r.push_back(5.0 * i + 2.5);
    const double mu = 200.0 * std::exp(-r.back() / 40.0) + 3.0;
    y.push_back(std::poisson_distribution<int>(mu)(rng));
    s.push_back(std::sqrt(std::max(mu, 1.0)));
  }
  const auto fit = fit_exponential_background(r, y, s);
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.params[1], 40.0, 4.0);
  std::vector<double> res;
  for (std::size_t i = 0; i < r.size(); ++i) res.push_back(y[i] - exponential_background(r[i], fit.params));
  EXPECT_TRUE(runs_test(res).passes());
}

TEST(Exponential, TooFewPointsThrows) {
  std::vector<double> r{1, 2, 3}, y{3, 2, 1}, s{1, 1, 1};
  EXPECT_THROW(fit_exponential_background(r, y, s), siv::DomainError);
}

TEST(Exponential, RisingDataIsNotConverged) {
  std::vector<double> r, y, s;
  for (int i = 0; i < 10; ++i) {
    r.push_back(i);
    y.push_back(1.0 + i * i);
    s.push_back(1.0);
  }
  EXPECT_FALSE(fit_exponential_background(r, y, s).converged);
}

TEST(RunsTestCase, ClosedFormStatistic) {
  const std::vector<double> res{1, 1, -1, -1, -1, 1, -1, 1, 1, 0, -1};
  const auto t = runs_test(res);
  EXPECT_EQ(t.positives, 5u);
  EXPECT_EQ(t.negatives, 5u);
  EXPECT_EQ(t.runs, 6u);
  const double n1 = 5, n2 = 5, n = 10;
  const double mean = 2 * n1 * n2 / n + 1;
  const double var = 2 * n1 * n2 * (2 * n1 * n2 - n) / (n * n * (n - 1));
  EXPECT_NEAR(t.z, (6 - mean) / std::sqrt(var), 1e-12);
  EXPECT_NEAR(t.p_value, std::erfc(std::abs(t.z) / std::sqrt(2.0)), 1e-12);
}

TEST(RunsTestCase, DetectsSystematicResiduals) {
  std::vector<double> block(40, 1.0);
  std::fill(block.begin() + 20, block.end(), -1.0);
  EXPECT_FALSE(runs_test(block).passes());
  std::vector<double> alt;
  for (int i = 0; i < 40; ++i) alt.push_back(i % 2 ? 1.0 : -1.0);
  EXPECT_FALSE(runs_test(alt).passes());
}

TEST(Zpl, FitsSingleLine) {
  Spectrum s;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 2.0);
  for (double wl = 720.0; wl <= 760.0; wl += 0.1) {
    s.wavelength_nm.push_back(wl);
    const std::vector<double> p{737.0, 5.0, 200.0, 50.0};
    s.intensity_cps.push_back(lorentzian(wl, p) + noise(rng));
  }
  const auto z = fit_lorentzian_zpl(s);
  ASSERT_TRUE(z.line_detected);
  EXPECT_NEAR(z.center_nm, 737.0, 0.05);
  EXPECT_NEAR(z.fwhm_nm, 5.0, 0.2);
  EXPECT_NEAR(z.contrast, 5.0, 0.2);
  EXPECT_TRUE(z.warnings.empty());
}

TEST(Zpl, FlatSpectrumHasNoLine) {
  Spectrum s;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 2.0);
  for (double wl = 720.0; wl <= 760.0; wl += 0.1) {
    s.wavelength_nm.push_back(wl);
    s.intensity_cps.push_back(100.0 + noise(rng));
  }
  EXPECT_FALSE(fit_lorentzian_zpl(s).line_detected);
}

TEST(Zpl, SecondaryLineWarns) {
  Spectrum s;
  for (double wl = 720.0; wl <= 760.0; wl += 0.1) {
    s.wavelength_nm.push_back(wl);
    s.intensity_cps.push_back(lorentzian(wl, std::vector<double>{737.0, 4.0, 300.0, 50.0}) +
                              lorentzian(wl, std::vector<double>{750.0, 3.0, 120.0, 0.0}));
  }
  const auto z = fit_lorentzian_zpl(s);
  EXPECT_TRUE(z.line_detected);
  EXPECT_FALSE(z.warnings.empty());
}

TEST(Zpl, ValidateSpectrum) {
  Spectrum s{{1.0, 1.0}, {2.0, 3.0}};
  EXPECT_THROW(s.validate(), siv::DomainError);
}

TEST(G2, ModelValues) {
  const std::vector<double> p{1.0, 0.8, 2.0, 0.0, 10.0};
  EXPECT_NEAR(g2_model(0.0, p), 0.2, 1e-12);
  EXPECT_NEAR(g2_model(1e4, p), 1.0, 1e-12);
  const std::vector<double> b{1.0, 1.0, 2.0, 0.5, 50.0};
  EXPECT_NEAR(g2_model(0.0, b), 0.0, 1e-12);
  EXPECT_GT(g2_model(10.0, b), 1.0);
}

TEST(G2, FitsSimulatedSingleEmitter) {
  siv::optics::HbtConfig c;
  c.duration_s = 30.0;
  const auto fit = fit_g2(siv::optics::simulate_hbt(c, 21));
  EXPECT_TRUE(fit.fit.converged);
  EXPECT_LT(fit.g2_zero, 0.3);
  EXPECT_TRUE(fit.single_emitter);
  // Antibunching time 1 / (r + 1/tau) for a two-level emitter.
  const double expected_t1 = 1.0 / (c.excitation_rate_per_ns + 1.0 / c.lifetime_ns);
  EXPECT_NEAR(fit.antibunching_time_ns, expected_t1, 0.25 * expected_t1);
}

TEST(G2, TwoEmittersAreNotSingle) {
  siv::optics::HbtConfig c;
  c.n_emitters = 2;
  c.duration_s = 30.0;
  const auto fit = fit_g2(siv::optics::simulate_hbt(c, 22));
  EXPECT_NEAR(fit.g2_zero, 0.5, 0.1);
  EXPECT_FALSE(fit.single_emitter);
}

TEST(G2, BunchingTermWithShelf) {
  siv::optics::HbtConfig c;
  c.shelving_probability = 0.3;
  c.shelf_lifetime_ns = 30.0;
  c.excitation_rate_per_ns = 0.2;
  c.max_delay_ns = 400.0;
  c.duration_s = 30.0;
  auto h = siv::optics::simulate_hbt(c, 23);
  h.plateau_min_delay_ns = 300.0;
  const auto fit = fit_g2(h, G2Options{true});
  EXPECT_TRUE(fit.fit.converged);
  EXPECT_GT(fit.bunching_amplitude, 0.1);
  EXPECT_GT(fit.bunching_time_ns, fit.antibunching_time_ns);
}

TEST(G2, NoPlateauThrows) {
  siv::optics::CoincidenceHistogram h;
  h.bin_width_ns = 1;
  h.min_delay_ns = -5.5;
  h.counts.assign(11, 3);
  EXPECT_THROW(fit_g2(h), siv::NormalizationError);
}

TEST(Spots, DetectsKnownEmitters) {
  siv::optics::OpticsConfig o;
  o.background_cps = 200.0;
  const siv::optics::Region r{-3, -3, 13, 8};
  const auto f = field_at({Vec2(0, 0), Vec2(5, 0), Vec2(10, 5)}, 20000.0);
  const auto map = siv::optics::synthesize_confocal_map(f, o, r, 5);
  const auto spots = detect_spots(map, o.fwhm_nm());
  ASSERT_EQ(spots.size(), 3u);
  for (const auto& e : f.emitters) {
    const int k = nearest_spot(spots, e.position_um, 0.1);
    ASSERT_GE(k, 0);
    EXPECT_NEAR(spots[static_cast<std::size_t>(k)].fwhm_nm, o.fwhm_nm(), 60.0);
    EXPECT_NEAR(spots[static_cast<std::size_t>(k)].peak_rate_cps, 20000.0, 2000.0);
    EXPECT_FALSE(spots[static_cast<std::size_t>(k)].larger_than_diffraction);
  }
  for (std::size_t i = 1; i < spots.size(); ++i) {
    const auto& a = spots[i - 1].centroid_um;
    const auto& b = spots[i].centroid_um;
    EXPECT_TRUE(a.y() < b.y() || (a.y() == b.y() && a.x() <= b.x()));
  }
}

TEST(Spots, PeakRateUnbiasedWithCalibratedSigma) {
  siv::optics::OpticsConfig o;
  o.background_cps = 500.0;
  const auto f = field_at({Vec2(0, 0)}, 2700.0);
  double sum = 0, pull2 = 0;
  int n = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto map = siv::optics::synthesize_confocal_map(f, o, {-2, -2, 2, 2}, seed);
    const auto spots = detect_spots(map, o.fwhm_nm());
    const int k = nearest_spot(spots, Vec2(0, 0), 0.3);
    ASSERT_GE(k, 0);
    const auto& s = spots[static_cast<std::size_t>(k)];
    ASSERT_GT(s.peak_rate_sigma_cps, 0.0);
    sum += s.peak_rate_cps;
    pull2 += std::pow((s.peak_rate_cps - 2700.0) / s.peak_rate_sigma_cps, 2);
    ++n;
  }
  // Standard error of the mean is about 9 cps.
  EXPECT_NEAR(sum / n, 2700.0, 30.0);
  EXPECT_NEAR(std::sqrt(pull2 / n), 1.0, 0.15);
}

TEST(Spots, ExtendedSpotFlagged) {
  siv::optics::OpticsConfig o;
  o.background_cps = 100.0;
  siv::optics::EmitterField f;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      f.emitters.push_back({Vec2(0.12 * i, 0.12 * j), 1000.0, 5000.0, siv::optics::EmitterOrigin::kDirect, 0});
  const auto map = siv::optics::synthesize_confocal_map(f, o, {-3, -3, 3, 3}, 6);
  const auto spots = detect_spots(map, o.fwhm_nm());
  ASSERT_EQ(spots.size(), 1u);
  EXPECT_TRUE(spots[0].larger_than_diffraction);
  EXPECT_GT(spots[0].integrated_rate_cps, spots[0].peak_rate_cps);
}

TEST(Spots, EmptyAndSaturatedMaps) {
  siv::optics::ConfocalMap m;
  m.nx = 20;
  m.ny = 20;
  m.pixel_size_nm = 100;
  m.dwell_s = 0.01;
  m.counts.assign(400, 0);
  EXPECT_TRUE(detect_spots(m, 396.0).empty());
  m.counts.assign(400, 7);
  EXPECT_THROW(detect_spots(m, 396.0), siv::ThresholdUndefinedError);
  siv::optics::ConfocalMap empty;
  EXPECT_THROW(detect_spots(empty, 396.0), siv::DomainError);
}

TEST(Spots, BackgroundOnlyGivesNoFalsePositives) {
  siv::optics::OpticsConfig o;
  o.background_cps = 1500.0;
  // 5 maps of 40000 pixels; a 5-sigma threshold on Poisson data allows the odd hit.
  int false_hits = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto map = siv::optics::synthesize_confocal_map({}, o, {0, 0, 20, 20}, seed);
    false_hits += static_cast<int>(detect_spots(map, o.fwhm_nm()).size());
  }
  EXPECT_LE(false_hits, 1);
}

TEST(Spots, OnPlanFlagsAndNearest) {
  std::vector<SpotRecord> s{spot(1, 400), spot(1, 400)};
  s[1].centroid_um = Vec2(5, 0);
  const std::vector<Vec2> planned{Vec2(0.05, 0.0)};
  flag_on_plan(s, planned, 0.1);
  EXPECT_TRUE(s[0].on_plan);
  EXPECT_FALSE(s[1].on_plan);
  EXPECT_EQ(nearest_spot(s, Vec2(4.9, 0.05), 0.2), 1);
  EXPECT_EQ(nearest_spot(s, Vec2(2.5, 0), 0.2), -1);
}

TEST(YieldCurve, RecoversInjectedYield) {
  const siv::emitters::CalibrationConstants calib;
  const double fluence = 1e12;
  const double ions = fluence * siv::emitters::kNominalSpotAreaCm2;
  SpotGroup g{2.9, fluence, {}};
  for (double n : {160.0, 170.0, 150.0, 165.0}) g.spots.push_back(spot(n * 2700.0, 390.0));
  const auto out = extract_yield_curve(std::span(&g, 1), calib);
  ASSERT_EQ(out.rows.size(), 1u);
  EXPECT_NEAR(out.rows[0].mean_emitters, 161.25, 1e-9);
  EXPECT_NEAR(out.rows[0].yield, 161.25 / ions, 1e-12);
  EXPECT_GT(out.rows[0].yield_sigma, 0.0);
  EXPECT_NEAR(out.model.yield_at(2.9, fluence), out.rows[0].yield, 1e-12);
}

TEST(YieldCurve, AreaRatioScalesCount) {
  SpotGroup g{2.9, 1e13, {spot(2700.0, 2.0 * 396.2)}};
  g.spots[0].larger_than_diffraction = true;
  YieldOptions o;
  o.psf_fwhm_nm = 396.2;
  const auto out = extract_yield_curve(std::span(&g, 1), {}, o);
  EXPECT_NEAR(out.rows[0].mean_emitters, 4.0, 1e-9);
}

TEST(YieldCurve, PermutationInvariantBitForBit) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1000.0, 90000.0);
  SpotGroup g{0.4, 1e13, {}};
  for (int i = 0; i < 37; ++i) g.spots.push_back(spot(u(rng), 400.0 + i));
  SpotGroup h = g;
  std::shuffle(h.spots.begin(), h.spots.end(), rng);
  const auto a = extract_yield_curve(std::span(&g, 1), {});
  const auto b = extract_yield_curve(std::span(&h, 1), {});
  EXPECT_EQ(a.rows[0].yield, b.rows[0].yield);
  EXPECT_EQ(a.rows[0].yield_sigma, b.rows[0].yield_sigma);
}

TEST(YieldCurve, ZeroSignalUpperBoundAndOrdering) {
  std::vector<SpotGroup> groups{{2.9, 1e13, {spot(27000, 396.2)}}, {0.4, 1e9, {spot(0, 396.2), spot(0, 396.2)}}};
  const auto out = extract_yield_curve(groups, {});
  ASSERT_EQ(out.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(out.rows[0].energy_mev, 0.4);
  EXPECT_TRUE(out.rows[0].zero_signal);
  const double ions = 1e9 * siv::emitters::kNominalSpotAreaCm2;
  EXPECT_NEAR(out.rows[0].yield_upper_bound, -std::log(0.05) / (2 * ions), 1e-12);
  std::vector<SpotGroup> empty{{2.9, 1e13, {}}};
  EXPECT_THROW(extract_yield_curve(empty, {}), siv::DomainError);
}

TEST(YieldCurve, SingleEmitterRateEstimate) {
  std::vector<SpotRecord> s{spot(2500, 400), spot(2900, 400), spot(9000, 800)};
  s[2].larger_than_diffraction = true;
  const auto e = estimate_single_emitter_rate(s);
  EXPECT_NEAR(e.value, 2700.0, 1e-9);
  EXPECT_NEAR(e.sigma, std::sqrt(2.0 * 200.0 * 200.0), 1e-9);
  std::vector<SpotRecord> none{s[2]};
  EXPECT_THROW(estimate_single_emitter_rate(none), siv::DomainError);
}

TEST(AnalysisIo, CsvHeadersAndSpectrumReader) {
  std::ostringstream os;
  std::vector<SpotRecord> s{spot(1, 400)};
  write_spots_csv(os, s);
  EXPECT_NE(os.str().find("x_um,y_um,peak_rate_cps"), std::string::npos);
  std::istringstream in("# comment\nwavelength_nm,counts\n736.5,10\n737.0,30\n");
  const auto sp = read_spectrum_csv(in);
  ASSERT_EQ(sp.wavelength_nm.size(), 2u);
  EXPECT_DOUBLE_EQ(sp.intensity_cps[1], 30.0);
  std::istringstream bad("wavelength_nm,counts\nabc,1\n");
  EXPECT_THROW(read_spectrum_csv(bad), siv::ConfigError);
}
