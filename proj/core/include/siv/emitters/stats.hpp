#pragma once

#include <vector>

namespace siv::emitters {

/// Area of the nominal 1-µm pinhole spot, pi (0.5 µm)^2, in cm^2.
inline constexpr double kNominalSpotAreaCm2 = 7.853981633974483e-9;

/// Activation yield for which 0.6e10 cm^-2 gives one emitter per nominal
/// spot on average: 1 / (0.6e10 * kNominalSpotAreaCm2) ~= 0.0212.
inline constexpr double kDefaultPlanningYield = 1.0 / (0.6e10 * kNominalSpotAreaCm2);

struct CalibrationConstants {
  double single_emitter_rate_cps = 2700.0;
  double single_emitter_rate_sigma_cps = 300.0;
  double excitation_power_mw = 3.3;
  double excitation_wavelength_nm = 656.0;
  double numerical_aperture = 0.95;
  double detection_efficiency = 0.0012;

  /// Throws ConfigError unless every value is positive (sigma may be zero).
  void validate() const;
};

struct EmitterEstimate {
  double value;
  double sigma;
};

/// N = R_meas * area_ratio / R_single with the R_single uncertainty
/// propagated linearly. Throws DomainError for R_meas < 0 or area_ratio < 1.
EmitterEstimate emitters_from_countrate(double rate_cps, double area_ratio,
                                        const CalibrationConstants& calib = {});

/// N / (fluence * spot_area * throughput). Throws DomainError for
/// non-positive fluence, area or throughput, and InconsistentInputsError
/// (carrying the computed yield) if the result exceeds 1.
double activation_yield(double n_emitters, double fluence_cm2,
                        double spot_area_cm2 = kNominalSpotAreaCm2,
                        double throughput_correction = 1.0);

/// Poisson pmf P(0..k_max) with k_max = max(20, ceil(lambda + 10 sqrt(lambda))).
/// The neglected tail is below 1e-12 for lambda up to 1e4. Throws
/// DomainError for negative lambda.
std::vector<double> poisson_spot_distribution(double lambda);

/// lambda / (yield * spot_area). Throws InfeasibleTargetError for yield <= 0
/// and DomainError for negative lambda or non-positive area.
double fluence_for_mean(double lambda, double yield,
                        double spot_area_cm2 = kNominalSpotAreaCm2);

/// P(1; lambda) = lambda exp(-lambda).
double single_emitter_fraction(double lambda);

struct YieldPoint {
  double energy_mev;
  double fluence_cm2;
  double yield;
};

/// Activation yield by (energy, fluence). Queries pick the tabulated energy
/// closest to the request and interpolate linearly in log fluence, clamping
/// at the table ends. An empty table returns default_yield everywhere.
class YieldModel {
 public:
  YieldModel() = default;
  /// Throws ConfigError for yields outside [0, 1] or non-positive keys.
  explicit YieldModel(std::vector<YieldPoint> points, double default_yield = kDefaultPlanningYield,
                      bool constant_below_1e12 = true);

  static YieldModel constant(double yield);

  double yield_at(double energy_mev, double fluence_cm2) const;

  const std::vector<YieldPoint>& points() const noexcept { return points_; }
  double default_yield() const noexcept { return default_yield_; }
  /// When set, fluences below 1e12 cm^-2 use the 1e12 cm^-2 value.
  bool constant_below_1e12() const noexcept { return constant_below_; }

 private:
  std::vector<YieldPoint> points_;
  double default_yield_ = kDefaultPlanningYield;
  bool constant_below_ = true;
};

}  // namespace siv::emitters
