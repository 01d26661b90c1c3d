#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "siv/pinhole/geometry.hpp"
#include "siv/pinhole/tally.hpp"
#include "siv/stopping/stopping.hpp"
#include "siv/stopping/transport.hpp"

namespace siv::pinhole {

struct BeamSpec {
  stopping::IonSpecies ion = stopping::IonSpecies::silicon();
  double energy_mev = 2.9;
  /// Gaussian sigma of the beam direction per transverse axis, mrad.
  double divergence_mrad = 0.3;
  /// Uniform lateral profile radius, µm. Unset: the sampling disk of
  /// sampling_radius_um, so nothing is blocked.
  std::optional<double> lateral_radius_um;
  double fluence_cm2 = 1e10;

  /// Throws ConfigError on non-positive energy, negative divergence or
  /// fluence. Energies outside 0.4-3 MeV are accepted with a warning.
  void validate() const;
  std::vector<std::string> warnings() const;
};

struct SimulationOptions {
  stopping::StoppingModel model{};
  stopping::TransportOptions transport{};
  TallyBinning binning{};
  /// 0 uses std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Radius (µm) of the beam disk outside of which the foil is opaque: three
/// aperture radii plus the taper window R / sin(wall_angle), where R is the
/// transport's residual path bound at the beam energy. Beyond it the entry
/// point lies farther than R from the hole surface.
double sampling_radius_um(const BeamSpec& beam, const PinholeGeometry& geom,
                          const stopping::StoppingModel& model = {});

/// One transport run tallied on several sample planes at once. Plane
/// distances are measured along the beam axis from the foil's back face.
std::vector<SamplePlaneTally> simulate_pinhole_planes(const BeamSpec& beam,
                                                      const PinholeGeometry& geom,
                                                      std::span<const double> distances_mm,
                                                      std::uint64_t n_histories,
                                                      std::uint64_t seed,
                                                      const SimulationOptions& options = {});

SamplePlaneTally simulate_pinhole(const BeamSpec& beam, const PinholeGeometry& geom,
                                  double distance_mm, std::uint64_t n_histories,
                                  std::uint64_t seed, const SimulationOptions& options = {});

}  // namespace siv::pinhole
