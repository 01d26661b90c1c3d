#include "siv/emitters/stats.hpp"

#include <algorithm>
#include <cmath>

#include "siv/errors.hpp"

namespace siv::emitters {

void CalibrationConstants::validate() const {
  if (!(single_emitter_rate_cps > 0 && single_emitter_rate_sigma_cps >= 0 &&
        excitation_power_mw > 0 && excitation_wavelength_nm > 0 && numerical_aperture > 0 &&
        detection_efficiency > 0))
    throw ConfigError("calibration constants must be positive");
}

EmitterEstimate emitters_from_countrate(double rate_cps, double area_ratio,
                                        const CalibrationConstants& calib) {
  calib.validate();
  if (rate_cps < 0) throw DomainError("count rate must be non-negative");
  if (!(area_ratio >= 1)) throw DomainError("area ratio must be at least 1");
  const double n = rate_cps * area_ratio / calib.single_emitter_rate_cps;
  return {n, n * calib.single_emitter_rate_sigma_cps / calib.single_emitter_rate_cps};
}

double activation_yield(double n_emitters, double fluence_cm2, double spot_area_cm2,
                        double throughput_correction) {
  if (!(fluence_cm2 > 0)) throw DomainError("fluence must be positive");
  if (!(spot_area_cm2 > 0)) throw DomainError("spot area must be positive");
  if (!(throughput_correction > 0)) throw DomainError("throughput correction must be positive");
  if (n_emitters < 0) throw DomainError("emitter count must be non-negative");
  const double y = n_emitters / (fluence_cm2 * spot_area_cm2 * throughput_correction);
  if (y > 1.0 + 1e-12)
    throw InconsistentInputsError("activation yield exceeds 1: more emitters than ions", y);
  return std::min(y, 1.0);
}

std::vector<double> poisson_spot_distribution(double lambda) {
  if (!(lambda >= 0)) throw DomainError("Poisson mean must be non-negative");
  const auto k_max = static_cast<std::size_t>(
      std::max(20.0, std::ceil(lambda + 10.0 * std::sqrt(lambda))));
  std::vector<double> p(k_max + 1, 0.0);
  if (lambda == 0) {
    p[0] = 1.0;
    return p;
  }
  const double ll = std::log(lambda);
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double kd = static_cast<double>(k);
    p[k] = std::exp(kd * ll - lambda - std::lgamma(kd + 1.0));
  }
  return p;
}

double fluence_for_mean(double lambda, double yield, double spot_area_cm2) {
  if (lambda < 0) throw DomainError("target mean must be non-negative");
  if (!(spot_area_cm2 > 0)) throw DomainError("spot area must be positive");
  if (!(yield > 0)) throw InfeasibleTargetError("zero activation yield: no fluence reaches the target");
  return lambda / (yield * spot_area_cm2);
}

double single_emitter_fraction(double lambda) {
  if (!(lambda >= 0)) throw DomainError("Poisson mean must be non-negative");
  return lambda * std::exp(-lambda);
}

YieldModel::YieldModel(std::vector<YieldPoint> points, double default_yield,
                       bool constant_below_1e12)
    : points_(std::move(points)), default_yield_(default_yield), constant_below_(constant_below_1e12) {
  if (!(default_yield_ >= 0 && default_yield_ <= 1))
    throw ConfigError("default yield must lie in [0, 1]");
  for (const auto& p : points_)
    if (!(p.energy_mev > 0 && p.fluence_cm2 > 0 && p.yield >= 0 && p.yield <= 1))
      throw ConfigError("yield table entries need positive energy/fluence and yield in [0, 1]");
  std::sort(points_.begin(), points_.end(), [](const auto& a, const auto& b) {
    return a.energy_mev != b.energy_mev ? a.energy_mev < b.energy_mev : a.fluence_cm2 < b.fluence_cm2;
  });
}

YieldModel YieldModel::constant(double yield) { return YieldModel({}, yield, true); }

double YieldModel::yield_at(double energy_mev, double fluence_cm2) const {
  if (points_.empty()) return default_yield_;
  double best_e = points_.front().energy_mev;
  for (const auto& p : points_)
    if (std::abs(p.energy_mev - energy_mev) < std::abs(best_e - energy_mev)) best_e = p.energy_mev;
  std::vector<const YieldPoint*> row;
  for (const auto& p : points_)
    if (p.energy_mev == best_e) row.push_back(&p);
  double f = fluence_cm2;
  if (constant_below_ && f < 1e12) f = 1e12;
  if (f <= row.front()->fluence_cm2) return row.front()->yield;
  if (f >= row.back()->fluence_cm2) return row.back()->yield;
  for (std::size_t i = 0; i + 1 < row.size(); ++i) {
    const auto* a = row[i];
    const auto* b = row[i + 1];
    if (f <= b->fluence_cm2) {
      const double t = std::log(f / a->fluence_cm2) / std::log(b->fluence_cm2 / a->fluence_cm2);
      return a->yield + t * (b->yield - a->yield);
    }
  }
  return row.back()->yield;
}

}  // namespace siv::emitters
