#include <chrono>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "siv/errors.hpp"
#include "siv/stopping/elements.hpp"
#include "siv/stopping/stopping.hpp"

using namespace siv::stopping;

namespace {

const IonSpecies kSi = IonSpecies::silicon();

// Reference values computed with CATIMA 1.7 (SRIM-2013 electronic stopping
// for heavy ions, amorphous carbon at 3.52 g/cm^3 and Fe at 7.87 g/cm^3).
// Stopping in eV/nm, ranges in nm.
constexpr double kCatimaSeC_0p1 = 727.6;
constexpr double kCatimaSeC_0p4 = 1196.7;
constexpr double kCatimaSeC_1 = 2090.3;
constexpr double kCatimaSeC_2p9 = 4216.2;
constexpr double kCatimaSeFe_1 = 1889.2;
constexpr double kCatimaRangeC_0p4 = 279.74;
constexpr double kCatimaRangeC_1 = 612.08;
constexpr double kCatimaRangeC_2p9 = 1202.56;

// ZBL universal nuclear stopping, written out independently of the library.
double zbl_nuclear_oracle(double z1, double m1, double z2, double m2, double e_ev, double n_cm3) {
  const double zsum = std::pow(z1, 0.23) + std::pow(z2, 0.23);
  const double e_kev = e_ev * 1e-3;
  const double eps = 32.53 * m2 * e_kev / (z1 * z2 * (m1 + m2) * zsum);
  const double sn = eps <= 30.0
                        ? std::log(1.0 + 1.1383 * eps) /
                              (2.0 * (eps + 0.01321 * std::pow(eps, 0.21226) + 0.19593 * std::sqrt(eps)))
                        : std::log(eps) / (2.0 * eps);
  const double per_atom_ev_cm2 = 8.462e-15 * z1 * z2 * m1 * sn / ((m1 + m2) * zsum);
  return per_atom_ev_cm2 * n_cm3 * 1e-7;
}

}  // namespace

TEST(Elements, LookupBySymbolAndZ) {
  EXPECT_EQ(element_by_symbol("Fe").z, 26);
  EXPECT_EQ(element_by_z(6).symbol, "C");
  EXPECT_THROW(element_by_symbol("Xx"), siv::ConfigError);
  EXPECT_THROW(element_by_z(0), siv::ConfigError);
}

TEST(Material, DiamondAtomicDensity) {
  const auto c = TargetMaterial::diamond();
  EXPECT_NEAR(c.atomic_density_cm3(), 3.52 / 12.011 * 6.02214076e23, 1e20);
  EXPECT_NEAR(c.mean_spacing_nm(), std::cbrt(1.0 / c.atomic_density_nm3()), 1e-12);
}

TEST(Material, RejectsBadComposition) {
  EXPECT_THROW(TargetMaterial("x", {}, 1.0), siv::ConfigError);
  EXPECT_THROW(TargetMaterial("x", {{6, 12.0, 1.0}}, -1.0), siv::ConfigError);
  EXPECT_THROW(TargetMaterial::element("Qq", 1.0), siv::ConfigError);
  EXPECT_THROW((IonSpecies{0, 28.0}.validate()), siv::ConfigError);
}

TEST(ElectronicStopping, TabulatedMatchesCatima) {
  const auto c = TargetMaterial::diamond();
  const auto tab = ElectronicModel::kTabulated;
  EXPECT_NEAR(electronic_stopping(kSi, c, 0.1e6, tab), kCatimaSeC_0p1, 0.02 * kCatimaSeC_0p1);
  EXPECT_NEAR(electronic_stopping(kSi, c, 0.4e6, tab), kCatimaSeC_0p4, 0.02 * kCatimaSeC_0p4);
  EXPECT_NEAR(electronic_stopping(kSi, c, 1.0e6, tab), kCatimaSeC_1, 0.02 * kCatimaSeC_1);
  EXPECT_NEAR(electronic_stopping(kSi, c, 2.9e6, tab), kCatimaSeC_2p9, 0.02 * kCatimaSeC_2p9);
  EXPECT_NEAR(electronic_stopping(kSi, TargetMaterial::steel(), 1.0e6, tab), kCatimaSeFe_1,
              0.02 * kCatimaSeFe_1);
}

TEST(ElectronicStopping, LindhardScharffScalesAsSqrtE) {
  const auto c = TargetMaterial::diamond();
  const double s1 = electronic_stopping(kSi, c, 1e5);
  const double s4 = electronic_stopping(kSi, c, 4e5);
  EXPECT_NEAR(s4 / s1, 2.0, 1e-9);
  EXPECT_NEAR(electronic_stopping(kSi, c, 1e6), 1915.0, 0.01 * 1915.0);
  EXPECT_DOUBLE_EQ(electronic_stopping(kSi, c, 1e6, ElectronicModel::kLindhardScharff, 2.0),
                   2.0 * electronic_stopping(kSi, c, 1e6));
}

TEST(ElectronicStopping, NegativeEnergyThrows) {
  EXPECT_THROW(electronic_stopping(kSi, TargetMaterial::diamond(), -1.0), siv::DomainError);
}

TEST(NuclearStopping, MatchesUniversalFormula) {
  const auto c = TargetMaterial::diamond();
  const auto fe = TargetMaterial::steel();
  for (double e : {1e3, 1e4, 1e5, 4e5, 2.9e6}) {
    const double oc = zbl_nuclear_oracle(14, 28.0, 6, c.components()[0].mass_u, e, c.atomic_density_cm3());
    EXPECT_NEAR(nuclear_stopping(kSi, c, e), oc, 0.01 * oc) << e;
    const double of = zbl_nuclear_oracle(14, 28.0, 26, fe.components()[0].mass_u, e, fe.atomic_density_cm3());
    EXPECT_NEAR(nuclear_stopping(kSi, fe, e), of, 0.01 * of) << e;
  }
}

TEST(Range, CsdaNearCatimaRanges) {
  const auto c = TargetMaterial::diamond();
  EXPECT_NEAR(csda_range(kSi, c, 0.4e6), kCatimaRangeC_0p4, 0.10 * kCatimaRangeC_0p4);
  EXPECT_NEAR(csda_range(kSi, c, 1.0e6), kCatimaRangeC_1, 0.05 * kCatimaRangeC_1);
  EXPECT_NEAR(csda_range(kSi, c, 2.9e6), kCatimaRangeC_2p9, 0.05 * kCatimaRangeC_2p9);
}

TEST(Range, AnchorAt2p9MeVIsAboutOneMicron) {
  const auto c = TargetMaterial::diamond();
  const auto t0 = std::chrono::steady_clock::now();
  const double r = csda_range(kSi, c, 2.9e6);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_NEAR(r, 1100.0, 0.15 * 1100.0);
  EXPECT_LT(dt, 1.0);
}

TEST(Range, StrictlyIncreasingAndZeroAtZero) {
  const auto c = TargetMaterial::diamond();
  EXPECT_EQ(csda_range(kSi, c, 0.0), 0.0);
  double prev = 0.0;
  for (double e = 2e3; e <= 3.2e6; e *= 1.3) {
    const double r = csda_range(kSi, c, e);
    EXPECT_GT(r, prev) << e;
    prev = r;
  }
}

TEST(Range, ProjectedFactorAndElectronicBound) {
  const auto c = TargetMaterial::diamond();
  StoppingModel m;
  EXPECT_NEAR(csda_range(kSi, c, 1e6, m), m.projected_range_factor * path_length_range(kSi, c, 1e6, m),
              1e-9);
  EXPECT_GT(electronic_only_range(kSi, c, 1e6, m), path_length_range(kSi, c, 1e6, m));
}

TEST(Range, PathLengthMatchesDirectIntegration) {
  // Trapezoid integration of 1/S in sqrt(E) as an independent route.
  const auto c = TargetMaterial::diamond();
  const StoppingModel m;
  const double e_max = 4e5;
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u0 = std::sqrt(e_max) * i / n;
    const double u1 = std::sqrt(e_max) * (i + 1) / n;
    auto f = [&](double u) {
      if (u == 0.0) return 0.0;
      return 2.0 * u / total_stopping(kSi, c, u * u, m);
    };
    sum += 0.5 * (f(u0) + f(u1)) * (u1 - u0);
  }
  EXPECT_NEAR(path_length_range(kSi, c, e_max, m), sum, 0.005 * sum);
}

TEST(StoppingModel, ValidateRejectsNonPositive) {
  StoppingModel m;
  m.energy_cutoff_ev = 0;
  EXPECT_THROW(m.validate(), siv::ConfigError);
  m = {};
  m.projected_range_factor = -1;
  EXPECT_THROW(m.validate(), siv::ConfigError);
}

TEST(StoppingTable, CsvHeaderAndRows) {
  const std::vector<double> e{1e5, 1e6};
  const auto rows = stopping_table(kSi, TargetMaterial::diamond(), e);
  ASSERT_EQ(rows.size(), 2u);
  std::ostringstream os;
  write_stopping_csv(os, rows);
  EXPECT_EQ(os.str().rfind("energy_eV,S_e,S_n,range_nm", 0), 0u);
}
