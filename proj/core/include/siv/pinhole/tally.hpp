#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "siv/types.hpp"

namespace siv::pinhole {

struct ImpactRecord {
  float x_um;
  float y_um;
  float energy_ev;
  bool scattered;
};

struct TallyBinning {
  double direct_bin_nm = 50.0;
  double direct_half_width_um = 5.0;
  double radial_bin_um = 5.0;
  double radial_max_um = 1000.0;
  /// Keep direct impacts as records too (scattered impacts are always kept).
  bool keep_direct_impacts = false;

  void validate() const;
};

/// Ions arriving on one sample plane. Positions are lab coordinates on the
/// plane relative to the beam axis.
class SamplePlaneTally {
 public:
  explicit SamplePlaneTally(double distance_mm = 1.0, TallyBinning binning = {});

  double distance_mm() const noexcept { return distance_mm_; }
  const TallyBinning& binning() const noexcept { return binning_; }

  std::uint64_t launched = 0;
  std::uint64_t direct = 0;
  std::uint64_t scattered = 0;
  std::uint64_t stopped_in_wall = 0;
  std::uint64_t blocked = 0;

  void add_direct(double x_um, double y_um, double energy_ev);
  void add_scattered(double x_um, double y_um, double energy_ev);
  void add_stopped(std::uint64_t n = 1) { launched += n; stopped_in_wall += n; }
  void add_blocked(std::uint64_t n = 1) { launched += n; blocked += n; }

  /// Sums counters and bins; appends impacts. Requires identical binning
  /// and distance.
  void merge(const SamplePlaneTally& other);

  /// Direct-spot histogram, row-major [iy * n + ix], bins of direct_bin_nm
  /// centred on the axis. Direct ions outside it are counted but not binned.
  std::size_t direct_bins_per_axis() const noexcept { return direct_n_; }
  const std::vector<std::uint64_t>& direct_histogram() const noexcept { return direct_hist_; }
  /// Bin centre coordinate (µm) of direct histogram index i along one axis.
  double direct_bin_center_um(std::size_t i) const;
  /// Highest direct bin count divided by the bin area, per µm^2.
  double peak_direct_density_per_um2() const;

  /// Scattered counts per radial annulus of radial_bin_um; the final entry
  /// collects everything beyond radial_max_um.
  const std::vector<std::uint64_t>& scattered_radial() const noexcept { return radial_; }

  const std::vector<ImpactRecord>& impacts() const noexcept { return impacts_; }

  /// Conservation, non-negativity and radial-sum checks.
  bool invariants_hold() const;

  std::vector<std::string> warnings;

 private:
  double distance_mm_;
  TallyBinning binning_;
  std::size_t direct_n_;
  std::vector<std::uint64_t> direct_hist_;
  std::vector<std::uint64_t> radial_;
  std::vector<ImpactRecord> impacts_;
};

/// scattered / direct. Throws UndefinedRatioError if direct is zero.
double scattered_to_direct_ratio(const SamplePlaneTally& tally);

struct RadialBin {
  double r_inner_um;
  double r_outer_um;
  double radius_um;  // bin centre
  std::uint64_t counts;
  /// Scattered density in the annulus over the peak direct density.
  double relative_density;
};

struct RadialProfile {
  double bin_width_um = 0;
  double reference_density_per_um2 = 0;
  std::vector<RadialBin> bins;
};

/// Annulus-normalized scattered density relative to the peak direct-bin
/// density, from the stored scattered impacts. Covers at least 0-500 µm and
/// extends to the farthest scattered impact, so the bins account for every
/// scattered ion. Empty tally gives an empty profile; scattered ions without
/// any direct ion throw NormalizationError. bin_width must be positive.
RadialProfile radial_density_profile(const SamplePlaneTally& tally, double bin_width_um);

}  // namespace siv::pinhole
