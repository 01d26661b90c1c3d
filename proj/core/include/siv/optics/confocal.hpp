#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "siv/optics/field.hpp"

namespace siv::optics {

struct OpticsConfig {
  double emission_wavelength_nm = 738.0;
  double numerical_aperture = 0.95;
  /// Unset: 0.51 * wavelength / NA.
  std::optional<double> psf_fwhm_nm;
  double pixel_size_nm = 100.0;
  double dwell_s = 0.01;
  double background_cps = 0.0;
  double detection_efficiency = 0.0012;

  double fwhm_nm() const;
  double psf_sigma_nm() const;
  /// Throws ConfigError for non-positive values or pixel >= FWHM.
  void validate() const;
  /// Non-fatal notes, e.g. pixels coarser than FWHM/2.
  std::vector<std::string> warnings() const;
};

struct Region {
  double x_min_um;
  double y_min_um;
  double x_max_um;
  double y_max_um;
};

/// Photon counts on a regular grid. Pixel (ix, iy) is centred at
/// origin + (ix, iy) * pixel_size.
struct ConfocalMap {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double pixel_size_nm = 0;
  double origin_x_um = 0;
  double origin_y_um = 0;
  double dwell_s = 0;
  std::vector<std::uint32_t> counts;  // row-major, iy * nx + ix

  std::uint32_t at(std::size_t ix, std::size_t iy) const { return counts[iy * nx + ix]; }
  double x_um(std::size_t ix) const { return origin_x_um + static_cast<double>(ix) * pixel_size_nm * 1e-3; }
  double y_um(std::size_t iy) const { return origin_y_um + static_cast<double>(iy) * pixel_size_nm * 1e-3; }
};

struct MapGrid {
  std::size_t nx;
  std::size_t ny;
  double origin_x_um;
  double origin_y_um;
};

/// Pixel grid covering `region`. Throws ConfigError for an empty region.
MapGrid map_grid(const Region& region, double pixel_size_nm);

/// Expected counts per pixel before noise: sum of brightness * PSF(peak 1)
/// * dwell over emitters plus background * dwell. Emitter contributions are
/// cut beyond 6 PSF sigma.
std::vector<double> expected_counts(const EmitterField& field, const OpticsConfig& optics,
                                    const Region& region);

/// Poisson draw of expected_counts, one RNG substream per pixel row.
ConfocalMap synthesize_confocal_map(const EmitterField& field, const OpticsConfig& optics,
                                    const Region& region, std::uint64_t seed);

}  // namespace siv::optics
