#include "siv/analysis/spots.hpp"

#include <algorithm>
#include <cmath>

#include "siv/analysis/nlls.hpp"
#include "siv/errors.hpp"

namespace siv::analysis {

namespace {

constexpr double kFwhmPerSigma = 2.3548200450309493;

struct Clipped {
  double mean;
  double sigma;
  std::size_t n;
};

Clipped sigma_clip(const std::vector<double>& v, double k, int passes) {
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  Clipped c{0, 0, 0};
  for (int pass = 0; pass <= passes; ++pass) {
    double s = 0, s2 = 0;
    std::size_t n = 0;
    for (double x : v) {
      if (x < lo || x > hi) continue;
      s += x;
      s2 += x * x;
      ++n;
    }
    if (n == 0) throw ThresholdUndefinedError("no background pixels left after sigma clipping");
    const double mean = s / static_cast<double>(n);
    const double sigma = std::sqrt(std::max(0.0, s2 / static_cast<double>(n) - mean * mean));
    const bool same = n == c.n;
    c = {mean, sigma, n};
    if (same && pass > 0) break;
    lo = mean - k * sigma;
    hi = mean + k * sigma;
  }
  return c;
}

/// Separable Gaussian smoothing with sigma in pixels; returns sum of squared weights.
double smooth(const std::vector<double>& in, std::size_t nx, std::size_t ny, double sigma_px,
              std::vector<double>& out) {
  const int h = std::max(1, static_cast<int>(std::ceil(3 * sigma_px)));
  std::vector<double> w(static_cast<std::size_t>(2 * h + 1));
  double sum = 0;
  for (int k = -h; k <= h; ++k) sum += w[static_cast<std::size_t>(k + h)] = std::exp(-0.5 * k * k / (sigma_px * sigma_px));
  double w2 = 0;
  for (auto& x : w) x /= sum, w2 += x * x;
  std::vector<double> tmp(in.size(), 0.0);
  out.assign(in.size(), 0.0);
  const auto sx = static_cast<long>(nx), sy = static_cast<long>(ny);
  for (long y = 0; y < sy; ++y)
    for (long x = 0; x < sx; ++x) {
      double acc = 0, norm = 0;
      for (int k = -h; k <= h; ++k) {
        const long xx = x + k;
        if (xx < 0 || xx >= sx) continue;
        acc += w[static_cast<std::size_t>(k + h)] * in[static_cast<std::size_t>(y * sx + xx)];
        norm += w[static_cast<std::size_t>(k + h)];
      }
      tmp[static_cast<std::size_t>(y * sx + x)] = acc / norm;
    }
  for (long y = 0; y < sy; ++y)
    for (long x = 0; x < sx; ++x) {
      double acc = 0, norm = 0;
      for (int k = -h; k <= h; ++k) {
        const long yy = y + k;
        if (yy < 0 || yy >= sy) continue;
        acc += w[static_cast<std::size_t>(k + h)] * tmp[static_cast<std::size_t>(yy * sx + x)];
        norm += w[static_cast<std::size_t>(k + h)];
      }
      out[static_cast<std::size_t>(y * sx + x)] = acc / norm;
    }
  return w2 * w2;  // 2-D kernel: product of the 1-D sums
}

/// Vertex offset of the parabola through (-1, a), (0, b), (1, c), clamped to half a pixel.
double parabola_offset(double a, double b, double c) {
  const double den = a - 2 * b + c;
  if (den >= 0) return 0;
  return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

}  // namespace

BackgroundStats background_statistics(const optics::ConfocalMap& map, const DetectOptions& options) {
  if (map.counts.empty()) throw DomainError("map is empty");
  std::vector<double> v(map.counts.begin(), map.counts.end());
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  if (*mn == *mx && *mx > 0) throw ThresholdUndefinedError("map is saturated: no background variation");
  const Clipped c = sigma_clip(v, options.clip_sigma, options.clip_passes);
  return {c.mean, c.sigma, c.n};
}

std::vector<SpotRecord> detect_spots(const optics::ConfocalMap& map, double psf_fwhm_nm,
                                     double threshold_sigma, const DetectOptions& options) {
  if (map.counts.empty() || map.nx == 0 || map.ny == 0) throw DomainError("map is empty");
  if (!(psf_fwhm_nm > 0) || !(threshold_sigma > 0)) throw DomainError("PSF FWHM and threshold must be positive");
  if (std::all_of(map.counts.begin(), map.counts.end(), [](auto c) { return c == 0; })) return {};
  const BackgroundStats raw = background_statistics(map, options);

  const std::size_t nx = map.nx, ny = map.ny;
  const double px_um = map.pixel_size_nm * 1e-3;
  const double psf_sigma_px = psf_fwhm_nm / kFwhmPerSigma / map.pixel_size_nm;
  std::vector<double> v(map.counts.begin(), map.counts.end());
  std::vector<double> s;
  const double w2 = smooth(v, nx, ny, 0.5 * psf_sigma_px, s);
  const Clipped bg = sigma_clip(s, options.clip_sigma, options.clip_passes);
  const double floor = std::sqrt(w2) * std::max(1.0, std::sqrt(std::max(raw.mean, 0.0)));
  const double thr = bg.mean + threshold_sigma * std::max(bg.sigma, floor);

  struct Cand {
    std::size_t ix, iy;
    double value;
  };
  std::vector<Cand> cands;
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t i = iy * nx + ix;
      const double c = s[i];
      if (c <= thr) continue;
      bool peak = true;
      for (int dy = -1; dy <= 1 && peak; ++dy)
        for (int dx = -1; dx <= 1 && peak; ++dx) {
          if (!dx && !dy) continue;
          const long xx = static_cast<long>(ix) + dx, yy = static_cast<long>(iy) + dy;
          if (xx < 0 || yy < 0 || xx >= static_cast<long>(nx) || yy >= static_cast<long>(ny)) continue;
          const std::size_t j = static_cast<std::size_t>(yy) * nx + static_cast<std::size_t>(xx);
          peak = c > s[j] || (c == s[j] && i < j);
        }
      if (peak) cands.push_back({ix, iy, c});
    }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.value > b.value; });

  const double merge_px2 = std::pow(psf_fwhm_nm / map.pixel_size_nm, 2);
  std::vector<Cand> kept;
  for (const auto& c : cands) {
    bool close = false;
    for (const auto& k : kept) {
      const double dx = static_cast<double>(c.ix) - static_cast<double>(k.ix);
      const double dy = static_cast<double>(c.iy) - static_cast<double>(k.iy);
      close = close || dx * dx + dy * dy < merge_px2;
    }
    if (!close) kept.push_back(c);
  }

  // The fit abscissa is an index into the window's pixel coordinates.
  std::vector<double> wx, wy;
  const auto model = [&wx, &wy](double k, std::span<const double> p) {
    const auto i = static_cast<std::size_t>(k);
    const double dx = wx[i] - p[1], dy = wy[i] - p[2];
    return p[4] + p[0] * std::exp(-(dx * dx + dy * dy) / (2 * p[3] * p[3]));
  };

  std::vector<SpotRecord> spots;
  for (const auto& c : kept) {
    auto at = [&](long x, long y) {
      x = std::clamp(x, 0L, static_cast<long>(nx) - 1);
      y = std::clamp(y, 0L, static_cast<long>(ny) - 1);
      return s[static_cast<std::size_t>(y) * nx + static_cast<std::size_t>(x)];
    };
    const auto cx = static_cast<long>(c.ix), cy = static_cast<long>(c.iy);
    const double qx = static_cast<double>(c.ix) + parabola_offset(at(cx - 1, cy), at(cx, cy), at(cx + 1, cy));
    const double qy = static_cast<double>(c.iy) + parabola_offset(at(cx, cy - 1), at(cx, cy), at(cx, cy + 1));

    std::vector<double> p = {v[c.iy * nx + c.ix] - raw.mean, qx, qy, psf_sigma_px, raw.mean};
    double half = options.fit_window_fwhm * psf_fwhm_nm / map.pixel_size_nm;
    bool fitted = false;
    double amplitude_sigma = 0;
    std::vector<double> xs, ys, ss;
    for (int attempt = 0; attempt < 3; ++attempt) {
      xs.clear();
      ys.clear();
      ss.clear();
      wx.clear();
      wy.clear();
      const long x0 = std::max(0L, static_cast<long>(std::floor(qx - half)));
      const long x1 = std::min(static_cast<long>(nx) - 1, static_cast<long>(std::ceil(qx + half)));
      const long y0 = std::max(0L, static_cast<long>(std::floor(qy - half)));
      const long y1 = std::min(static_cast<long>(ny) - 1, static_cast<long>(std::ceil(qy + half)));
      for (long y = y0; y <= y1; ++y)
        for (long x = x0; x <= x1; ++x) {
          const double val = v[static_cast<std::size_t>(y) * nx + static_cast<std::size_t>(x)];
          xs.push_back(static_cast<double>(xs.size()));
          wx.push_back(static_cast<double>(x));
          wy.push_back(static_cast<double>(y));
          ys.push_back(val);
          // Once a fit exists, weight by the model prediction to avoid the low bias of data weights.
          const double dx = static_cast<double>(x) - p[1], dy = static_cast<double>(y) - p[2];
          const double expect = fitted ? p[4] + p[0] * std::exp(-(dx * dx + dy * dy) / (2 * p[3] * p[3])) : val;
          ss.push_back(std::sqrt(std::max(expect, 1.0)));
        }
      try {
        FitResult f = nlls_fit(model, xs, ys, ss, p);
        const bool sane = f.converged && f.params[0] > 0 && std::abs(f.params[3]) > 0.1 &&
                          std::hypot(f.params[1] - qx, f.params[2] - qy) < half;
        if (!sane) break;
        p = f.params;
        p[3] = std::abs(p[3]);
        amplitude_sigma = f.sigmas[0];
        fitted = true;
        if (attempt > 0 && 2.5 * p[3] <= half) break;
        half = std::max(half, 2.5 * p[3]);
      } catch (const Error&) {
        break;
      }
    }
    if (!fitted) {
      p = {v[c.iy * nx + c.ix] - raw.mean, qx, qy, psf_sigma_px, raw.mean};
      p[0] = std::max(p[0], 0.0);
    }
    SpotRecord rec;
    rec.centroid_um = Vec2(map.origin_x_um + p[1] * px_um, map.origin_y_um + p[2] * px_um);
    rec.fwhm_nm = kFwhmPerSigma * p[3] * map.pixel_size_nm;
    rec.larger_than_diffraction = rec.fwhm_nm > options.large_spot_ratio * psf_fwhm_nm;
    double peak = p[0];
    if (fitted && !rec.larger_than_diffraction) {
      // The width of a diffraction-limited spot is the PSF; fitting it only adds noise to the peak.
      std::vector<double> q = p;
      q[3] = psf_sigma_px;
      NllsOptions fixed_width;
      fixed_width.fixed = {false, false, false, true, false};
      try {
        const FitResult f = nlls_fit(model, xs, ys, ss, q, fixed_width);
        if (f.converged && f.params[0] > 0) {
          peak = f.params[0];
          amplitude_sigma = f.sigmas[0];
        }
      } catch (const Error&) {
        // Keep the free-width amplitude.
      }
    }
    rec.peak_rate_cps = peak / map.dwell_s;
    rec.peak_rate_sigma_cps = amplitude_sigma / map.dwell_s;
    const double area_scale = (p[3] * p[3]) / (psf_sigma_px * psf_sigma_px);
    rec.integrated_rate_cps = rec.peak_rate_cps * area_scale;
    spots.push_back(rec);
  }

  // Fits of neighbouring candidates can land on the same spot; keep the brighter one.
  std::vector<SpotRecord> unique;
  const double merge_um = psf_fwhm_nm * 1e-3;
  for (const auto& r : spots) {
    bool dup = false;
    for (auto& u : unique)
      if ((u.centroid_um - r.centroid_um).norm() < merge_um) {
        dup = true;
        if (r.peak_rate_cps > u.peak_rate_cps) u = r;
      }
    if (!dup) unique.push_back(r);
  }
  std::sort(unique.begin(), unique.end(), [](const SpotRecord& a, const SpotRecord& b) {
    if (a.centroid_um.y() != b.centroid_um.y()) return a.centroid_um.y() < b.centroid_um.y();
    return a.centroid_um.x() < b.centroid_um.x();
  });
  return unique;
}

void flag_on_plan(std::vector<SpotRecord>& spots, std::span<const Vec2> planned_um, double tolerance_um) {
  for (auto& s : spots) {
    s.on_plan = false;
    for (const auto& p : planned_um) s.on_plan = s.on_plan || (s.centroid_um - p).norm() <= tolerance_um;
  }
}

int nearest_spot(std::span<const SpotRecord> spots, const Vec2& position, double tolerance_um) {
  int best = -1;
  double best_d = tolerance_um;
  for (std::size_t i = 0; i < spots.size(); ++i) {
    const double d = (spots[i].centroid_um - position).norm();
    if (d <= best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace siv::analysis
