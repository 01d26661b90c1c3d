#include "siv/analysis/io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "siv/errors.hpp"

namespace siv::analysis {

Spectrum read_spectrum_csv(std::istream& is) {
  Spectrum s;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      if (line.find_first_not_of("0123456789.-+eE, \t") != std::string::npos) continue;
    }
    std::istringstream row(line);
    double w = 0, c = 0;
    char comma = 0;
    if (!(row >> w >> comma >> c) || comma != ',') throw ConfigError("malformed spectrum row: " + line);
    s.wavelength_nm.push_back(w);
    s.intensity_cps.push_back(c);
  }
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

void write_spots_csv(std::ostream& os, std::span<const SpotRecord> spots) {
  os << "x_um,y_um,peak_rate_cps,integrated_rate_cps,fwhm_nm,larger_than_diffraction,on_plan,peak_rate_sigma_cps\n"
     << std::setprecision(10);
  for (const auto& s : spots)
    os << s.centroid_um.x() << ',' << s.centroid_um.y() << ',' << s.peak_rate_cps << ','
       << s.integrated_rate_cps << ',' << s.fwhm_nm << ',' << int(s.larger_than_diffraction) << ','
       << int(s.on_plan) << ',' << s.peak_rate_sigma_cps << '\n';
}

void write_yield_csv(std::ostream& os, std::span<const YieldRow> rows) {
  os << "energy_mev,fluence_cm2,n_spots,mean_emitters,mean_emitters_sigma,yield,yield_sigma,yield_upper_bound\n"
     << std::setprecision(10);
  for (const auto& r : rows) {
    os << r.energy_mev << ',' << r.fluence_cm2 << ',' << r.n_spots << ',' << r.mean_emitters << ','
       << r.mean_emitters_sigma << ',' << r.yield << ',' << r.yield_sigma << ',';
    if (r.zero_signal) os << r.yield_upper_bound;
    os << '\n';
  }
}

config::Json fit_to_json(const FitResult& fit, std::span<const char* const> names) {
  config::Json params = config::Json::object();
  for (std::size_t i = 0; i < fit.params.size(); ++i) {
    const std::string key = i < names.size() ? names[i] : "p" + std::to_string(i);
    config::Json e = {{"value", fit.params[i]}};
    if (i < fit.sigmas.size()) e["sigma"] = fit.sigmas[i];
    params[key] = e;
  }
  return {{"params", params},
          {"converged", fit.converged},
          {"iterations", fit.iterations},
          {"residual_norm", fit.residual_norm},
          {"reduced_chi2", fit.reduced_chi2}};
}

config::Json spots_to_json(std::span<const SpotRecord> spots) {
  config::Json a = config::Json::array();
  for (const auto& s : spots)
    a.push_back({{"x_um", s.centroid_um.x()},
                 {"y_um", s.centroid_um.y()},
                 {"peak_rate_cps", s.peak_rate_cps},
                 {"integrated_rate_cps", s.integrated_rate_cps},
                 {"fwhm_nm", s.fwhm_nm},
                 {"larger_than_diffraction", s.larger_than_diffraction},
                 {"on_plan", s.on_plan},
                 {"peak_rate_sigma_cps", s.peak_rate_sigma_cps}});
  return a;
}

config::Json g2_fit_to_json(const G2Fit& fit) {
  static constexpr const char* kNames[] = {"scale", "depth", "antibunching_time_ns", "bunching_amplitude",
                                           "bunching_time_ns"};
  return {{"fit", fit_to_json(fit.fit, kNames)},
          {"g2_zero", fit.g2_zero},
          {"g2_zero_sigma", fit.g2_zero_sigma},
          {"antibunching_time_ns", fit.antibunching_time_ns},
          {"single_emitter", fit.single_emitter},
          {"warnings", fit.warnings}};
}

config::Json zpl_fit_to_json(const ZplFit& fit) {
  static constexpr const char* kNames[] = {"center_nm", "fwhm_nm", "amplitude_cps", "baseline_cps"};
  return {{"fit", fit_to_json(fit.fit, kNames)},
          {"line_detected", fit.line_detected},
          {"center_nm", fit.center_nm},
          {"fwhm_nm", fit.fwhm_nm},
          {"contrast", fit.contrast},
          {"baseline_noise_cps", fit.baseline_noise},
          {"warnings", fit.warnings}};
}

}  // namespace siv::analysis
