#pragma once

#include <iosfwd>
#include <span>

#include "siv/analysis/fits.hpp"
#include "siv/analysis/spots.hpp"
#include "siv/analysis/yield_curve.hpp"
#include "siv/config.hpp"

namespace siv::analysis {

/// `wavelength_nm,counts` CSV, `#` comment lines skipped. Throws ConfigError
/// on malformed rows.
Spectrum read_spectrum_csv(std::istream& is);

/// `x_um,y_um,peak_rate_cps,integrated_rate_cps,fwhm_nm,larger_than_diffraction,on_plan`.
void write_spots_csv(std::ostream& os, std::span<const SpotRecord> spots);

/// `energy_mev,fluence_cm2,n_spots,mean_emitters,mean_emitters_sigma,yield,yield_sigma,yield_upper_bound`.
void write_yield_csv(std::ostream& os, std::span<const YieldRow> rows);

config::Json fit_to_json(const FitResult& fit, std::span<const char* const> names);
config::Json spots_to_json(std::span<const SpotRecord> spots);
config::Json g2_fit_to_json(const G2Fit& fit);
config::Json zpl_fit_to_json(const ZplFit& fit);

}  // namespace siv::analysis
