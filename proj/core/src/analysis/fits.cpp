#include "siv/analysis/fits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "siv/errors.hpp"

namespace siv::analysis {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2) return *mid;
  return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

/// 1.4826 * median absolute deviation.
double robust_sigma(const std::vector<double>& v) {
  const double m = median(v);
  std::vector<double> dev;
  dev.reserve(v.size());
  for (double x : v) dev.push_back(std::abs(x - m));
  return 1.4826 * median(std::move(dev));
}

}  // namespace

double exponential_background(double r, std::span<const double> p) {
  return p[0] * std::exp(-r / p[1]) + p[2];
}

FitResult fit_exponential_background(std::span<const double> r, std::span<const double> y,
                                     std::span<const double> sigma) {
  if (r.size() < 4) throw DomainError("exponential background fit needs at least 4 samples");
  const double c0 = *std::min_element(y.begin(), y.end());
  const double a0 = y[0] - c0;
  // Decay length from a log-linear regression of the points above the floor.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = y[i] - c0;
    if (d <= 0.05 * a0) continue;
    const double ly = std::log(d);
    sx += r[i], sy += ly, sxx += r[i] * r[i], sxy += r[i] * ly;
    ++n;
  }
  double l0 = (r.back() - r.front()) / 3;
  if (n >= 2) {
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (slope < 0 && std::isfinite(slope)) l0 = -1 / slope;
  }
  FitResult res;
  try {
    res = nlls_fit(exponential_background, r, y, sigma, {a0, l0, c0});
  } catch (const DegenerateFitError&) {
    NllsOptions o;
    o.max_iterations = 0;
    res = nlls_fit(exponential_background, r, y, sigma, {a0, l0, c0}, o);
    res.converged = false;
    return res;
  }
  if (!(res.params[0] > 0 && res.params[1] > 0)) {
    res.converged = false;
    res.sigmas.clear();
  }
  return res;
}

FitResult fit_exponential_background(const pinhole::RadialProfile& profile) {
  std::vector<double> r, y, s;
  for (const auto& b : profile.bins) {
    const double area = constants::kPi * (b.r_outer_um * b.r_outer_um - b.r_inner_um * b.r_inner_um);
    const double per_count = 1.0 / (area * profile.reference_density_per_um2);
    r.push_back(b.radius_um);
    y.push_back(b.relative_density);
    s.push_back(per_count * std::sqrt(std::max<double>(static_cast<double>(b.counts), 1.0)));
  }
  return fit_exponential_background(r, y, s);
}

RunsTest runs_test(std::span<const double> residuals) {
  RunsTest t;
  int prev = 0;
  for (double v : residuals) {
    if (v == 0) continue;
    const int s = v > 0 ? 1 : -1;
    (s > 0 ? t.positives : t.negatives)++;
    if (s != prev) ++t.runs;
    prev = s;
  }
  const double n1 = static_cast<double>(t.positives), n2 = static_cast<double>(t.negatives);
  const double n = n1 + n2;
  if (n1 == 0 || n2 == 0 || n < 3) return t;
  const double mu = 2 * n1 * n2 / n + 1;
  const double var = 2 * n1 * n2 * (2 * n1 * n2 - n) / (n * n * (n - 1));
  t.z = (static_cast<double>(t.runs) - mu) / std::sqrt(var);
  t.p_value = std::erfc(std::abs(t.z) / std::sqrt(2.0));
  return t;
}

void Spectrum::validate() const {
  if (wavelength_nm.size() != intensity_cps.size()) throw DomainError("spectrum columns differ in length");
  for (std::size_t i = 1; i < wavelength_nm.size(); ++i)
    if (!(wavelength_nm[i] > wavelength_nm[i - 1]))
      throw DomainError("spectrum wavelengths must strictly increase");
}

double lorentzian(double x, std::span<const double> p) {
  const double u = (x - p[0]) / (0.5 * p[1]);
  return p[3] + p[2] / (1 + u * u);
}

ZplFit fit_lorentzian_zpl(const Spectrum& spectrum) {
  spectrum.validate();
  const auto& x = spectrum.wavelength_nm;
  const auto& y = spectrum.intensity_cps;
  ZplFit out;
  if (x.size() < 5) throw DomainError("spectrum needs at least 5 samples");

  const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double b0 = median(y);
  const double a0 = y[peak] - b0;
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && y[lo] > b0 + 0.5 * a0) --lo;
  while (hi + 1 < y.size() && y[hi] > b0 + 0.5 * a0) ++hi;
  const double w0 = std::max(x[hi] - x[lo], 2 * (x[1] - x[0]));
  const double noise0 = robust_sigma(y);
  const double scale = noise0 > 0 ? noise0 : std::max(1e-6 * std::abs(y[peak]), 1e-12);
  const std::vector<double> s(x.size(), scale);

  try {
    out.fit = nlls_fit(lorentzian, x, y, s, {x[peak], w0, a0, b0});
  } catch (const DegenerateFitError&) {
    out.warnings.emplace_back("line fit is degenerate");
    out.baseline_noise = noise0;
    return out;
  }
  const auto& p = out.fit.params;
  if (out.fit.converged && out.fit.reduced_chi2 > 0) {
    const double k = std::sqrt(out.fit.reduced_chi2);
    for (auto& v : out.fit.sigmas) v *= k;
    out.fit.covariance *= out.fit.reduced_chi2;
  }
  out.center_nm = p[0];
  out.fwhm_nm = std::abs(p[1]);

  std::vector<double> off, resid(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    resid[i] = y[i] - lorentzian(x[i], p);
    if (std::abs(x[i] - p[0]) > 3 * out.fwhm_nm) off.push_back(y[i]);
  }
  out.baseline_noise = off.size() >= 3 ? robust_sigma(off) : noise0;
  out.line_detected = out.fit.converged && p[2] > 0 && p[2] > 2 * out.baseline_noise &&
                      p[0] >= x.front() && p[0] <= x.back();
  if (!out.line_detected) return out;
  out.contrast = p[3] > 0 ? (p[2] + p[3]) / p[3] : std::numeric_limits<double>::infinity();
  const double limit = std::max(5 * out.baseline_noise, 0.1 * p[2]);
  if (*std::max_element(resid.begin(), resid.end()) > limit)
    out.warnings.emplace_back("residuals show a secondary line");
  return out;
}

double g2_model(double tau_ns, std::span<const double> p) {
  const double t = std::abs(tau_ns);
  const double a = p[3];
  const double bunch = a != 0 ? a * std::exp(-t / p[4]) : 0.0;
  return p[0] * (1 - p[1] * ((1 + a) * std::exp(-t / p[2]) - bunch));
}

G2Fit fit_g2(const optics::CoincidenceHistogram& hist, const G2Options& options) {
  const double level = optics::plateau_level(hist);
  std::vector<double> tau, g2, sig;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    tau.push_back(hist.delay_ns(i));
    g2.push_back(static_cast<double>(hist.counts[i]) / level);
    sig.push_back(std::sqrt(std::max<double>(static_cast<double>(hist.counts[i]), 1.0)) / level);
  }

  // Dip depth from the bins around zero; t1 from the half-depth crossing.
  const std::size_t mid = hist.size() / 2;
  double centre = 0;
  int nc = 0;
  for (std::size_t i = mid > 0 ? mid - 1 : 0; i <= std::min(mid + 1, hist.size() - 1); ++i, ++nc)
    centre += g2[i];
  centre /= nc;
  const double rho0 = std::clamp(1 - centre, 0.05, 1.0);
  double t1 = 1.0;
  for (std::size_t k = 1; k <= mid && mid + k < hist.size(); ++k) {
    if (0.5 * (g2[mid - k] + g2[mid + k]) >= 1 - 0.5 * rho0) {
      t1 = std::max(tau[mid + k] / std::log(2.0), hist.bin_width_ns);
      break;
    }
  }

  G2Fit out;
  NllsOptions o;
  o.fixed = {false, false, false, true, true};
  try {
    out.fit = nlls_fit(g2_model, tau, g2, sig, {1.0, rho0, t1, 0.0, 10 * t1}, o);
  } catch (const DegenerateFitError&) {
    out.warnings.emplace_back("antibunching time is unconstrained; held at its initial value");
    o.fixed[2] = true;
    out.fit = nlls_fit(g2_model, tau, g2, sig, {1.0, rho0, t1, 0.0, 10 * t1}, o);
  }
  if (options.fit_bunching && out.fit.converged) {
    auto p = out.fit.params;
    p[3] = 0.1;
    p[4] = 10 * p[2];
    NllsOptions ob;
    try {
      auto b = nlls_fit(g2_model, tau, g2, sig, p, ob);
      if (b.converged) out.fit = std::move(b);
      else out.warnings.emplace_back("bunching fit did not converge; two-level result kept");
    } catch (const DegenerateFitError&) {
      out.warnings.emplace_back("bunching term is unconstrained; two-level result kept");
    }
  }
  if (!out.fit.converged) out.warnings.emplace_back("g2 fit did not converge");

  const auto& p = out.fit.params;
  out.g2_zero = p[0] * (1 - p[1]);
  out.antibunching_time_ns = p[2];
  out.bunching_amplitude = p[3];
  out.bunching_time_ns = p[3] != 0 ? p[4] : 0;
  if (out.fit.converged) {
    const auto& C = out.fit.covariance;
    const double dc = 1 - p[1], dr = -p[0];
    const double var = dc * dc * C(0, 0) + dr * dr * C(1, 1) + 2 * dc * dr * C(0, 1);
    out.g2_zero_sigma = std::sqrt(std::max(0.0, var));
    out.single_emitter = out.g2_zero + 1.6448536269514722 * out.g2_zero_sigma < 0.5;
  }
  return out;
}

}  // namespace siv::analysis
