#pragma once

#include <span>
#include <vector>

#include "siv/analysis/spots.hpp"
#include "siv/emitters/stats.hpp"

namespace siv::analysis {

struct SpotGroup {
  double energy_mev;
  double fluence_cm2;
  std::vector<SpotRecord> spots;
};

struct YieldRow {
  double energy_mev;
  double fluence_cm2;
  std::size_t n_spots;
  double mean_emitters;
  double mean_emitters_sigma;
  double yield;
  double yield_sigma;
  /// Set when no group spot shows any signal; yield is then 0 and
  /// yield_upper_bound holds the 95% limit from zero observed emitters.
  bool zero_signal = false;
  double yield_upper_bound = 0;
};

struct YieldOptions {
  double psf_fwhm_nm = 0.51 * 738.0 / 0.95;
  double spot_area_cm2 = emitters::kNominalSpotAreaCm2;
  double throughput_correction = 1.0;
  /// Relative 1-sigma uncertainty of the throughput correction.
  double throughput_relative_sigma = 0.0;
};

struct YieldExtraction {
  /// Sorted by energy, then fluence.
  std::vector<YieldRow> rows;
  emitters::YieldModel model;
};

/// Per spot N = emitters_from_countrate(peak rate, area ratio), where the
/// area ratio is max(1, (FWHM / PSF FWHM)^2) for spots flagged larger than
/// the diffraction limit and 1 otherwise; per group the mean N goes through activation_yield. The uncertainty
/// combines the standard error of the mean, the single-emitter rate error
/// and the throughput error. Spots are summed in canonical order, so
/// reordering a group leaves the result bit-identical. Throws DomainError
/// for an empty group.
YieldExtraction extract_yield_curve(std::span<const SpotGroup> groups,
                                    const emitters::CalibrationConstants& calib,
                                    const YieldOptions& options = {});

/// Single-emitter rate from isolated bright spots: mean and standard
/// deviation of the peak rates of spots not flagged larger than the
/// diffraction limit. Throws DomainError if no such spot exists.
emitters::EmitterEstimate estimate_single_emitter_rate(std::span<const SpotRecord> spots);

}  // namespace siv::analysis
