#include "siv/pinhole/tally.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "siv/errors.hpp"

namespace siv::pinhole {

void TallyBinning::validate() const {
  if (!(direct_bin_nm > 0 && direct_half_width_um > 0 && radial_bin_um > 0 &&
        radial_max_um > radial_bin_um))
    throw ConfigError("tally bin widths and extents must be positive");
}

SamplePlaneTally::SamplePlaneTally(double distance_mm, TallyBinning binning)
    : distance_mm_(distance_mm), binning_(binning) {
  binning_.validate();
  if (!(distance_mm > 0)) throw ConfigError("pinhole-sample distance must be positive");
  direct_n_ = static_cast<std::size_t>(
      std::ceil(2.0 * binning_.direct_half_width_um * constants::kNmPerUm / binning_.direct_bin_nm));
  direct_hist_.assign(direct_n_ * direct_n_, 0);
  radial_.assign(static_cast<std::size_t>(std::ceil(binning_.radial_max_um / binning_.radial_bin_um)) + 1,
                 0);
}

double SamplePlaneTally::direct_bin_center_um(std::size_t i) const {
  const double w = binning_.direct_bin_nm / constants::kNmPerUm;
  return (static_cast<double>(i) + 0.5) * w - 0.5 * static_cast<double>(direct_n_) * w;
}

void SamplePlaneTally::add_direct(double x_um, double y_um, double energy_ev) {
  ++launched;
  ++direct;
  const double w = binning_.direct_bin_nm / constants::kNmPerUm;
  const double half = 0.5 * static_cast<double>(direct_n_) * w;
  const double fx = std::floor((x_um + half) / w);
  const double fy = std::floor((y_um + half) / w);
  const double n = static_cast<double>(direct_n_);
  if (fx >= 0 && fx < n && fy >= 0 && fy < n)
    ++direct_hist_[static_cast<std::size_t>(fy) * direct_n_ + static_cast<std::size_t>(fx)];
  if (binning_.keep_direct_impacts)
    impacts_.push_back({static_cast<float>(x_um), static_cast<float>(y_um),
                        static_cast<float>(energy_ev), false});
}

void SamplePlaneTally::add_scattered(double x_um, double y_um, double energy_ev) {
  ++launched;
  ++scattered;
  const double r = std::hypot(x_um, y_um);
  const auto last = radial_.size() - 1;
  const auto k = r >= binning_.radial_max_um
                     ? last
                     : std::min(last, static_cast<std::size_t>(r / binning_.radial_bin_um));
  ++radial_[k];
  impacts_.push_back({static_cast<float>(x_um), static_cast<float>(y_um),
                      static_cast<float>(energy_ev), true});
}

void SamplePlaneTally::merge(const SamplePlaneTally& o) {
  if (o.distance_mm_ != distance_mm_ || o.direct_n_ != direct_n_ || o.radial_.size() != radial_.size())
    throw ConfigError("cannot merge tallies with different planes or binning");
  launched += o.launched;
  direct += o.direct;
  scattered += o.scattered;
  stopped_in_wall += o.stopped_in_wall;
  blocked += o.blocked;
  for (std::size_t i = 0; i < direct_hist_.size(); ++i) direct_hist_[i] += o.direct_hist_[i];
  for (std::size_t i = 0; i < radial_.size(); ++i) radial_[i] += o.radial_[i];
  impacts_.insert(impacts_.end(), o.impacts_.begin(), o.impacts_.end());
  for (const auto& w : o.warnings)
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
}

double SamplePlaneTally::peak_direct_density_per_um2() const {
  const double w = binning_.direct_bin_nm / constants::kNmPerUm;
  const auto peak = direct_hist_.empty() ? 0 : *std::max_element(direct_hist_.begin(), direct_hist_.end());
  return static_cast<double>(peak) / (w * w);
}

bool SamplePlaneTally::invariants_hold() const {
  if (launched != direct + scattered + stopped_in_wall + blocked) return false;
  const auto radial_sum = std::accumulate(radial_.begin(), radial_.end(), std::uint64_t{0});
  if (radial_sum != scattered) return false;
  const auto binned = std::accumulate(direct_hist_.begin(), direct_hist_.end(), std::uint64_t{0});
  return binned <= direct;
}

double scattered_to_direct_ratio(const SamplePlaneTally& t) {
  if (t.direct == 0) throw UndefinedRatioError("scattered/direct ratio undefined: no direct ions");
  return static_cast<double>(t.scattered) / static_cast<double>(t.direct);
}

RadialProfile radial_density_profile(const SamplePlaneTally& t, double bin_width_um) {
  if (!(bin_width_um > 0)) throw DomainError("radial profile bin width must be positive");
  RadialProfile prof;
  prof.bin_width_um = bin_width_um;
  if (t.launched == 0) return prof;
  prof.reference_density_per_um2 = t.peak_direct_density_per_um2();
  if (prof.reference_density_per_um2 <= 0) {
    if (t.scattered == 0) return prof;
    throw NormalizationError("radial profile needs direct ions for normalization");
  }
  double r_max = 500.0;
  for (const auto& imp : t.impacts())
    if (imp.scattered) r_max = std::max(r_max, std::hypot(double(imp.x_um), double(imp.y_um)));
  const auto n = static_cast<std::size_t>(std::floor(r_max / bin_width_um)) + 1;
  std::vector<std::uint64_t> counts(n, 0);
  for (const auto& imp : t.impacts())
    if (imp.scattered) {
      const double r = std::hypot(double(imp.x_um), double(imp.y_um));
      ++counts[std::min(n - 1, static_cast<std::size_t>(r / bin_width_um))];
    }
  prof.bins.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r0 = static_cast<double>(i) * bin_width_um;
    const double r1 = r0 + bin_width_um;
    const double area = constants::kPi * (r1 * r1 - r0 * r0);
    prof.bins.push_back({r0, r1, 0.5 * (r0 + r1), counts[i],
                         static_cast<double>(counts[i]) / area / prof.reference_density_per_um2});
  }
  return prof;
}

}  // namespace siv::pinhole
