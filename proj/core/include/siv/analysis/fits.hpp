#pragma once

#include <span>
#include <string>
#include <vector>

#include "siv/analysis/nlls.hpp"
#include "siv/optics/hbt.hpp"
#include "siv/pinhole/tally.hpp"

namespace siv::analysis {

/// A * exp(-r / l) + c; params {A, l, c}.
double exponential_background(double r, std::span<const double> p);

/// Fits A exp(-r/l) + c. Initial guess from a log-linear regression after
/// subtracting the smallest sample. A degenerate or non-decaying fit comes
/// back with converged = false instead of throwing. Throws DomainError for
/// fewer than 4 samples.
FitResult fit_exponential_background(std::span<const double> r, std::span<const double> y,
                                     std::span<const double> sigma);

/// Profile overload over every bin, sigma from the Poisson counts (at least
/// one count per bin).
FitResult fit_exponential_background(const pinhole::RadialProfile& profile);

struct RunsTest {
  std::size_t runs = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  double z = 0;
  /// Two-sided p-value of the Wald-Wolfowitz statistic (normal approximation).
  double p_value = 1;
  bool passes(double alpha = 0.05) const { return p_value >= alpha; }
};

/// Wald-Wolfowitz runs test on residual signs; zeros are skipped.
RunsTest runs_test(std::span<const double> residuals);

struct Spectrum {
  std::vector<double> wavelength_nm;
  std::vector<double> intensity_cps;

  /// Throws DomainError unless sizes match and wavelengths strictly increase.
  void validate() const;
};

/// b + A / (1 + ((x - x0) / (w / 2))^2); params {x0, w, A, b}.
double lorentzian(double x, std::span<const double> p);

struct ZplFit {
  FitResult fit;
  bool line_detected = false;
  double center_nm = 0;
  double fwhm_nm = 0;
  /// (amplitude + baseline) / baseline.
  double contrast = 0;
  /// Robust standard deviation of the data off the line.
  double baseline_noise = 0;
  std::vector<std::string> warnings;
};

/// Single Lorentzian plus constant. No line is reported when the fitted
/// amplitude stays below 2x the baseline noise; residual peaks above 5x the
/// noise raise a secondary-line warning.
ZplFit fit_lorentzian_zpl(const Spectrum& spectrum);

/// c * (1 - rho * ((1 + a) exp(-|t|/t1) - a exp(-|t|/t2))); params {c, rho, t1, a, t2}.
/// g2(0) = c (1 - rho).
double g2_model(double tau_ns, std::span<const double> p);

struct G2Fit {
  FitResult fit;
  double g2_zero = 1;
  double g2_zero_sigma = 0;
  double antibunching_time_ns = 0;
  double bunching_amplitude = 0;
  double bunching_time_ns = 0;
  /// Upper one-sided 95% bound of g2(0) below 0.5.
  bool single_emitter = false;
  std::vector<std::string> warnings;
};

struct G2Options {
  /// Also fit the bunching term (a, t2); otherwise a = 0.
  bool fit_bunching = false;
};

/// Normalizes by the plateau and fits g2_model with Poisson weights.
/// Initial t1 from the half-depth width of the dip. Throws
/// NormalizationError if the plateau is absent.
G2Fit fit_g2(const optics::CoincidenceHistogram& hist, const G2Options& options = {});

}  // namespace siv::analysis
