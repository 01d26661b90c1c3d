#include "siv/optics/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "siv/errors.hpp"
#include "siv/rng.hpp"
#include "siv/stopping/material.hpp"
#include "siv/stopping/stopping.hpp"

namespace siv::optics {

namespace {

/// Draws positions from the tally's direct-spot histogram, uniform inside a bin.
class DirectSampler {
 public:
  DirectSampler(const pinhole::SamplePlaneTally& tally, double fallback_radius_um)
      : tally_(tally), fallback_radius_um_(fallback_radius_um) {
    const auto& h = tally.direct_histogram();
    double acc = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i] == 0) continue;
      acc += static_cast<double>(h[i]);
      cdf_.push_back(acc);
      index_.push_back(i);
    }
    for (double& c : cdf_) c /= acc;
  }

  Vec2 operator()(rng::Engine& g) const {
    if (cdf_.empty()) {
      double x, y;
      do {
        x = 2 * rng::uniform_open(g) - 1;
        y = 2 * rng::uniform_open(g) - 1;
      } while (x * x + y * y > 1);
      return Vec2(x, y) * fallback_radius_um_;
    }
    const double u = rng::uniform_open(g);
    const auto k = static_cast<std::size_t>(std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    const std::size_t bin = index_[std::min(k, index_.size() - 1)];
    const std::size_t n = tally_.direct_bins_per_axis();
    const double w = tally_.binning().direct_bin_nm * 1e-3;
    return Vec2(tally_.direct_bin_center_um(bin % n) + (rng::uniform_open(g) - 0.5) * w,
                tally_.direct_bin_center_um(bin / n) + (rng::uniform_open(g) - 0.5) * w);
  }

 private:
  const pinhole::SamplePlaneTally& tally_;
  double fallback_radius_um_;
  std::vector<double> cdf_;
  std::vector<std::size_t> index_;
};

}  // namespace

EmitterField generate_emitter_field(const emitters::ImplantPlan& plan,
                                    const emitters::YieldModel& yield_model,
                                    const pinhole::SamplePlaneTally& tally, double tally_energy_mev,
                                    std::uint64_t seed, const FieldOptions& options) {
  if (std::abs(tally_energy_mev - plan.energy_mev) > 1e-9 * std::max(1.0, plan.energy_mev))
    throw ConfigError("scatter tally energy differs from the plan energy");
  if (!(options.brightness_cps >= 0) || !(options.brightness_sigma >= 0) ||
      !(options.position_jitter_um >= 0) || !(options.depth_nm >= 0))
    throw ConfigError("emitter field options must be non-negative");

  EmitterField field;
  field.energy_mev = plan.energy_mev;

  double depth = options.depth_nm;
  if (depth == 0)
    depth = stopping::csda_range(stopping::IonSpecies::silicon(), stopping::TargetMaterial::diamond(),
                                 plan.energy_mev * 1e6);

  std::vector<pinhole::ImpactRecord> scattered;
  for (const auto& rec : tally.impacts())
    if (rec.scattered) scattered.push_back(rec);
  double scatter_per_direct = 0;
  if (options.include_scattered && !scattered.empty()) {
    if (tally.direct == 0) throw NormalizationError("tally has scattered but no direct ions");
    scatter_per_direct = static_cast<double>(tally.scattered) / static_cast<double>(tally.direct);
  }

  const DirectSampler direct(tally, std::sqrt(plan.spot_area_cm2 / constants::kPi) * constants::kUmPerCm);
  // Brightness median chosen so the mean stays at brightness_cps.
  const double mu = std::log(std::max(options.brightness_cps, 1e-300)) -
                    0.5 * options.brightness_sigma * options.brightness_sigma;

  std::vector<const emitters::PlannedSpot*> all;
  for (const auto& s : plan.spots) all.push_back(&s);
  for (const auto& s : plan.markers) all.push_back(&s);

  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& spot = *all[i];
    auto g = rng::substream(seed, rng::Stage::kEmitterField, i);
    std::normal_distribution<double> normal;
    const double yield = yield_model.yield_at(plan.energy_mev, spot.fluence_cm2);
    const double lambda = yield * spot.expected_ions;

    Vec2 centre = spot.position_um;
    if (options.position_jitter_um > 0)
      centre += Vec2(normal(g), normal(g)) * options.position_jitter_um;

    auto emit = [&](Vec2 pos, EmitterOrigin origin) {
      const double b = options.brightness_sigma > 0 ? std::exp(mu + options.brightness_sigma * normal(g))
                                                    : options.brightness_cps;
      field.emitters.push_back(Emitter{pos, depth, b, origin, static_cast<int>(i)});
    };

    const long n_direct = lambda > 0 ? std::poisson_distribution<long>(lambda)(g) : 0;
    for (long k = 0; k < n_direct; ++k) emit(centre + direct(g), EmitterOrigin::kDirect);

    const double lambda_s = lambda * scatter_per_direct;
    const long n_scattered = lambda_s > 0 ? std::poisson_distribution<long>(lambda_s)(g) : 0;
    for (long k = 0; k < n_scattered; ++k) {
      const auto idx = static_cast<std::size_t>(rng::uniform_open(g) * static_cast<double>(scattered.size()));
      const auto& rec = scattered[std::min(idx, scattered.size() - 1)];
      const double phi = 2 * constants::kPi * rng::uniform_open(g);
      const double c = std::cos(phi), s = std::sin(phi);
      const Vec2 off(c * rec.x_um - s * rec.y_um, s * rec.x_um + c * rec.y_um);
      emit(centre + off, EmitterOrigin::kScattered);
    }
  }
  return field;
}

}  // namespace siv::optics
