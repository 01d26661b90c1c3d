#pragma once

#include <cstdint>
#include <vector>

#include "siv/emitters/session.hpp"
#include "siv/emitters/stats.hpp"
#include "siv/pinhole/tally.hpp"
#include "siv/types.hpp"

namespace siv::optics {

enum class EmitterOrigin { kDirect, kScattered };

struct Emitter {
  Vec2 position_um;
  double depth_nm;
  /// Detected count rate with the focus centred on the emitter.
  double brightness_cps;
  EmitterOrigin origin;
  /// Index into plan.spots (markers follow the matrix spots); the spot whose
  /// beam produced the emitter.
  int spot_index;
};

struct EmitterField {
  double energy_mev = 0;
  std::vector<Emitter> emitters;
};

struct FieldOptions {
  double brightness_cps = 2700.0;
  /// Log-normal sigma of the brightness; the mean stays at brightness_cps.
  double brightness_sigma = 0.2;
  bool include_scattered = true;
  /// Gaussian sigma of the actual spot position around the planned one.
  double position_jitter_um = 0.0;
  /// Mean implantation depth; 0 takes csda_range of the ion in diamond.
  double depth_nm = 0.0;
};

/// Realizes a plan: per spot (and marker) a Poisson number of emitters with
/// mean yield * expected ions, placed by resampling the tally's direct
/// impacts (a uniform disk of the pinhole radius if it has none). With
/// include_scattered, each spot also gets Poisson(yield * expected ions *
/// scattered/direct) emitters at offsets resampled from the scattered impacts
/// with a random rotation. Throws ConfigError if the tally was produced at
/// another beam energy than the plan.
EmitterField generate_emitter_field(const emitters::ImplantPlan& plan,
                                    const emitters::YieldModel& yield_model,
                                    const pinhole::SamplePlaneTally& tally, double tally_energy_mev,
                                    std::uint64_t seed, const FieldOptions& options = {});

}  // namespace siv::optics
