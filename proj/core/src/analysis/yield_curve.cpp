#include "siv/analysis/yield_curve.hpp"

#include <algorithm>
#include <cmath>

#include "siv/errors.hpp"

namespace siv::analysis {

YieldExtraction extract_yield_curve(std::span<const SpotGroup> groups,
                                    const emitters::CalibrationConstants& calib,
                                    const YieldOptions& options) {
  calib.validate();
  if (!(options.psf_fwhm_nm > 0)) throw DomainError("PSF FWHM must be positive");
  YieldExtraction out;
  for (const auto& g : groups) {
    if (g.spots.empty()) throw DomainError("yield group has no spots");
    std::vector<double> n;
    for (const auto& s : g.spots) {
      const double ratio =
          s.larger_than_diffraction ? std::max(1.0, std::pow(s.fwhm_nm / options.psf_fwhm_nm, 2)) : 1.0;
      n.push_back(s.peak_rate_cps * ratio / calib.single_emitter_rate_cps);
    }
    std::sort(n.begin(), n.end());
    const auto k = static_cast<double>(n.size());
    double sum = 0;
    for (double v : n) sum += v;
    const double mean = sum / k;
    double ss = 0;
    for (double v : n) ss += (v - mean) * (v - mean);
    const double sem = n.size() > 1 ? std::sqrt(ss / (k - 1) / k) : 0.0;
    const double cal_rel = calib.single_emitter_rate_sigma_cps / calib.single_emitter_rate_cps;

    YieldRow row{};
    row.energy_mev = g.energy_mev;
    row.fluence_cm2 = g.fluence_cm2;
    row.n_spots = n.size();
    row.mean_emitters = mean;
    row.mean_emitters_sigma = std::hypot(sem, mean * cal_rel);
    const double ions = g.fluence_cm2 * options.spot_area_cm2 * options.throughput_correction;
    if (mean <= 0) {
      row.zero_signal = true;
      row.yield = 0;
      // Poisson 95% upper limit for zero events is -ln(0.05) ~= 3.
      row.yield_upper_bound = -std::log(0.05) / (k * ions);
    } else {
      row.yield = emitters::activation_yield(mean, g.fluence_cm2, options.spot_area_cm2,
                                             options.throughput_correction);
      row.yield_sigma = row.yield * std::hypot(row.mean_emitters_sigma / mean, options.throughput_relative_sigma);
    }
    out.rows.push_back(row);
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const YieldRow& a, const YieldRow& b) {
    return a.energy_mev != b.energy_mev ? a.energy_mev < b.energy_mev : a.fluence_cm2 < b.fluence_cm2;
  });
  std::vector<emitters::YieldPoint> pts;
  for (const auto& r : out.rows) pts.push_back({r.energy_mev, r.fluence_cm2, std::clamp(r.yield, 0.0, 1.0)});
  out.model = emitters::YieldModel(std::move(pts));
  return out;
}

emitters::EmitterEstimate estimate_single_emitter_rate(std::span<const SpotRecord> spots) {
  std::vector<double> r;
  for (const auto& s : spots)
    if (!s.larger_than_diffraction) r.push_back(s.peak_rate_cps);
  if (r.empty()) throw DomainError("no diffraction-limited spots to calibrate on");
  std::sort(r.begin(), r.end());
  double sum = 0;
  for (double v : r) sum += v;
  const double mean = sum / static_cast<double>(r.size());
  double ss = 0;
  for (double v : r) ss += (v - mean) * (v - mean);
  return {mean, r.size() > 1 ? std::sqrt(ss / static_cast<double>(r.size() - 1)) : 0.0};
}

}  // namespace siv::analysis
