#pragma once

#include <span>
#include <vector>

#include "siv/optics/confocal.hpp"
#include "siv/types.hpp"

namespace siv::analysis {

struct SpotRecord {
  Vec2 centroid_um;
  /// Background-subtracted rate with the focus on the spot. For spots not
  /// larger than the diffraction limit it comes from a refit with the width
  /// held at the PSF.
  double peak_rate_cps;
  /// Peak rate scaled by the fitted spot area over the PSF area.
  double integrated_rate_cps;
  double fwhm_nm;
  bool larger_than_diffraction = false;
  bool on_plan = false;
  /// 1-sigma uncertainty of peak_rate_cps from the Poisson-weighted fit;
  /// zero when no fit converged.
  double peak_rate_sigma_cps = 0;
};

struct BackgroundStats {
  double mean;
  double sigma;
  std::size_t pixels;
};

struct DetectOptions {
  double threshold_sigma = 5.0;
  double clip_sigma = 3.0;
  int clip_passes = 5;
  /// Fitted FWHM above this multiple of the PSF FWHM flags the spot.
  double large_spot_ratio = 1.3;
  /// Half-size of the per-spot fit window in PSF FWHMs.
  double fit_window_fwhm = 2.0;
};

/// Sigma-clipped mean and standard deviation of the pixel counts. Throws
/// ThresholdUndefinedError if clipping leaves no pixels, or every pixel
/// holds the same non-zero value.
BackgroundStats background_statistics(const optics::ConfocalMap& map, const DetectOptions& options = {});

/// Local maxima above mean + threshold_sigma * sigma (sigma floored at the
/// Poisson value sqrt(mean) and at one count), merged when closer than one
/// PSF FWHM, brightest first. Centroids come from a symmetric 2-D Gaussian
/// fit, or quadratic interpolation around the maximum when that fit fails.
/// Returned in canonical order (by y, then x). An all-zero map gives an
/// empty list. Throws DomainError for an empty map.
std::vector<SpotRecord> detect_spots(const optics::ConfocalMap& map, double psf_fwhm_nm,
                                     double threshold_sigma = 5.0, const DetectOptions& options = {});

/// Sets on_plan for spots within `tolerance_um` of any planned position.
void flag_on_plan(std::vector<SpotRecord>& spots, std::span<const Vec2> planned_um, double tolerance_um);

/// Index of the closest spot within `tolerance_um` of `position`, or -1.
int nearest_spot(std::span<const SpotRecord> spots, const Vec2& position, double tolerance_um);

}  // namespace siv::analysis
