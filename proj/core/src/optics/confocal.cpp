#include "siv/optics/confocal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "siv/errors.hpp"
#include "siv/rng.hpp"

namespace siv::optics {

namespace {
constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)
constexpr double kCutoffSigmas = 6.0;
}  // namespace

double OpticsConfig::fwhm_nm() const {
  return psf_fwhm_nm ? *psf_fwhm_nm : 0.51 * emission_wavelength_nm / numerical_aperture;
}

double OpticsConfig::psf_sigma_nm() const { return fwhm_nm() / kFwhmPerSigma; }

void OpticsConfig::validate() const {
  if (!(emission_wavelength_nm > 0) || !(numerical_aperture > 0) || !(pixel_size_nm > 0) ||
      !(dwell_s > 0))
    throw ConfigError("wavelength, NA, pixel size and dwell time must be positive");
  if (psf_fwhm_nm && !(*psf_fwhm_nm > 0)) throw ConfigError("PSF FWHM must be positive");
  if (!(background_cps >= 0)) throw ConfigError("background rate must be non-negative");
  if (!(detection_efficiency > 0 && detection_efficiency <= 1))
    throw ConfigError("detection efficiency must lie in (0, 1]");
  if (pixel_size_nm >= fwhm_nm())
    throw ConfigError("pixel size must be smaller than the PSF FWHM (undersampled map)");
}

std::vector<std::string> OpticsConfig::warnings() const {
  std::vector<std::string> w;
  if (pixel_size_nm >= 0.5 * fwhm_nm()) w.emplace_back("pixel size is coarser than FWHM/2");
  return w;
}

MapGrid map_grid(const Region& region, double pixel_size_nm) {
  const double w = region.x_max_um - region.x_min_um;
  const double h = region.y_max_um - region.y_min_um;
  if (!(w > 0 && h > 0) || !std::isfinite(w) || !std::isfinite(h))
    throw ConfigError("map region must be non-empty");
  const double p = pixel_size_nm * 1e-3;
  const auto nx = static_cast<std::size_t>(std::ceil(w / p - 1e-9));
  const auto ny = static_cast<std::size_t>(std::ceil(h / p - 1e-9));
  return {nx, ny, region.x_min_um + 0.5 * p, region.y_min_um + 0.5 * p};
}

std::vector<double> expected_counts(const EmitterField& field, const OpticsConfig& optics,
                                    const Region& region) {
  optics.validate();
  const MapGrid grid = map_grid(region, optics.pixel_size_nm);
  const double p = optics.pixel_size_nm * 1e-3;
  const double sigma = optics.psf_sigma_nm() * 1e-3;
  const double reach = kCutoffSigmas * sigma;
  std::vector<double> out(grid.nx * grid.ny, optics.background_cps * optics.dwell_s);

  std::vector<double> wx, wy;
  for (const auto& e : field.emitters) {
    const double fx = (e.position_um.x() - grid.origin_x_um) / p;
    const double fy = (e.position_um.y() - grid.origin_y_um) / p;
    const long ix0 = std::max(0L, static_cast<long>(std::ceil(fx - reach / p)));
    const long ix1 = std::min(static_cast<long>(grid.nx) - 1, static_cast<long>(std::floor(fx + reach / p)));
    const long iy0 = std::max(0L, static_cast<long>(std::ceil(fy - reach / p)));
    const long iy1 = std::min(static_cast<long>(grid.ny) - 1, static_cast<long>(std::floor(fy + reach / p)));
    if (ix0 > ix1 || iy0 > iy1) continue;
    wx.clear();
    wy.clear();
    for (long ix = ix0; ix <= ix1; ++ix) {
      const double d = (static_cast<double>(ix) - fx) * p / sigma;
      wx.push_back(std::exp(-0.5 * d * d));
    }
    for (long iy = iy0; iy <= iy1; ++iy) {
      const double d = (static_cast<double>(iy) - fy) * p / sigma;
      wy.push_back(std::exp(-0.5 * d * d));
    }
    const double amp = e.brightness_cps * optics.dwell_s;
    for (long iy = iy0; iy <= iy1; ++iy) {
      double* row = out.data() + static_cast<std::size_t>(iy) * grid.nx;
      const double ay = amp * wy[static_cast<std::size_t>(iy - iy0)];
      for (long ix = ix0; ix <= ix1; ++ix) row[ix] += ay * wx[static_cast<std::size_t>(ix - ix0)];
    }
  }
  return out;
}

ConfocalMap synthesize_confocal_map(const EmitterField& field, const OpticsConfig& optics,
                                    const Region& region, std::uint64_t seed) {
  const std::vector<double> mean = expected_counts(field, optics, region);
  const MapGrid grid = map_grid(region, optics.pixel_size_nm);
  ConfocalMap map;
  map.nx = grid.nx;
  map.ny = grid.ny;
  map.pixel_size_nm = optics.pixel_size_nm;
  map.origin_x_um = grid.origin_x_um;
  map.origin_y_um = grid.origin_y_um;
  map.dwell_s = optics.dwell_s;
  map.counts.resize(mean.size());
  for (std::size_t iy = 0; iy < grid.ny; ++iy) {
    auto g = rng::substream(seed, rng::Stage::kConfocal, iy);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const double m = mean[iy * grid.nx + ix];
      map.counts[iy * grid.nx + ix] =
          m > 0 ? std::poisson_distribution<std::uint32_t>(m)(g) : 0;
    }
  }
  return map;
}

}  // namespace siv::optics
