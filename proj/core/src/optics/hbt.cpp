#include "siv/optics/hbt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "siv/errors.hpp"
#include "siv/rng.hpp"

namespace siv::optics {

void HbtConfig::validate() const {
  if (n_emitters < 1) throw ConfigError("HBT needs at least one emitter");
  if (!(duration_s > 0) || !(lifetime_ns > 0) || !(bin_width_ns > 0) || !(max_delay_ns > bin_width_ns))
    throw ConfigError("duration, lifetime, bin width and delay range must be positive");
  if (!(excitation_rate_per_ns >= 0)) throw ConfigError("excitation rate must be non-negative");
  if (!(detection_efficiency >= 0 && detection_efficiency <= 1) ||
      !(shelving_probability >= 0 && shelving_probability <= 1))
    throw ConfigError("probabilities must lie in [0, 1]");
  if (!(shelf_lifetime_ns >= 0)) throw ConfigError("shelf lifetime must be non-negative");
}

namespace {

/// Mean time between detections, ns; infinite without emission.
double mean_interval_ns(const HbtConfig& c) {
  const double q = 1.0 - c.shelving_probability;
  if (c.excitation_rate_per_ns <= 0 || c.detection_efficiency <= 0 || q <= 0)
    return std::numeric_limits<double>::infinity();
  const double cycles = 1.0 / (c.detection_efficiency * q);
  const double shelvings = cycles * c.shelving_probability;
  return cycles * (1.0 / c.excitation_rate_per_ns + c.lifetime_ns) + shelvings * c.shelf_lifetime_ns;
}

}  // namespace

double detected_rate_cps(const HbtConfig& config) { return 1e9 / mean_interval_ns(config); }

double excitation_rate_for(double target_cps, const HbtConfig& config) {
  HbtConfig c = config;
  c.excitation_rate_per_ns = std::numeric_limits<double>::infinity();
  const double q = 1.0 - c.shelving_probability;
  if (!(target_cps > 0) || c.detection_efficiency <= 0 || q <= 0)
    throw DomainError("target count rate is unreachable");
  const double cycles = 1.0 / (c.detection_efficiency * q);
  const double budget = 1e9 / target_cps - cycles * c.lifetime_ns -
                        cycles * c.shelving_probability * c.shelf_lifetime_ns;
  if (!(budget > 0)) throw DomainError("target count rate exceeds the saturated emitter rate");
  return cycles / budget;
}

double plateau_level(const CoincidenceHistogram& hist) {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (std::abs(hist.delay_ns(i)) > hist.plateau_min_delay_ns) {
      sum += static_cast<double>(hist.counts[i]);
      ++n;
    }
  }
  if (n == 0 || sum <= 0) throw NormalizationError("coincidence histogram has no populated plateau");
  return sum / static_cast<double>(n);
}

std::vector<double> normalized_g2(const CoincidenceHistogram& hist) {
  const double level = plateau_level(hist);
  std::vector<double> g2;
  g2.reserve(hist.size());
  for (auto c : hist.counts) g2.push_back(static_cast<double>(c) / level);
  return g2;
}

CoincidenceHistogram simulate_hbt(const HbtConfig& config, std::uint64_t seed) {
  config.validate();
  CoincidenceHistogram hist;
  const auto half = static_cast<std::size_t>(std::floor(config.max_delay_ns / config.bin_width_ns - 0.5));
  hist.bin_width_ns = config.bin_width_ns;
  hist.min_delay_ns = -(static_cast<double>(half) + 0.5) * config.bin_width_ns;
  hist.counts.assign(2 * half + 1, 0);
  hist.duration_s = config.duration_s;
  hist.plateau_min_delay_ns = 10.0 * config.lifetime_ns;
  if (!std::isfinite(mean_interval_ns(config))) {
    hist.warnings.emplace_back("configuration produces no detected photons; histogram is empty");
    return hist;
  }

  const double t_end = config.duration_s * 1e9;
  const double q = 1.0 - config.shelving_probability;
  std::vector<double> a, b;
  for (int e = 0; e < config.n_emitters; ++e) {
    auto g = rng::substream(seed, rng::Stage::kHbt, static_cast<std::uint64_t>(e));
    // Each detected photon is preceded by K emitting cycles (the last one
    // detected) and M shelving cycles; every cycle is one excitation plus one decay.
    std::geometric_distribution<long> emitting(config.detection_efficiency);
    double t = 0;
    while (true) {
      const long k = 1 + emitting(g);
      const long m = q < 1 ? std::negative_binomial_distribution<long>(k, q)(g) : 0;
      const auto cycles = static_cast<double>(k + m);
      t += std::gamma_distribution<double>(cycles, 1.0 / config.excitation_rate_per_ns)(g);
      t += std::gamma_distribution<double>(cycles, config.lifetime_ns)(g);
      if (m > 0 && config.shelf_lifetime_ns > 0)
        t += std::gamma_distribution<double>(static_cast<double>(m), config.shelf_lifetime_ns)(g);
      if (t >= t_end) break;
      (g() >> 63 ? a : b).push_back(t);
    }
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  hist.rate_a_cps = static_cast<double>(a.size()) / config.duration_s;
  hist.rate_b_cps = static_cast<double>(b.size()) / config.duration_s;

  const double lo = hist.min_delay_ns;
  const double hi = -lo;
  auto stop = b.begin();
  for (double start : a) {
    stop = std::lower_bound(stop, b.end(), start + lo);
    if (stop == b.end()) break;
    const double tau = *stop - start;
    if (tau >= hi) continue;
    const auto bin = static_cast<std::size_t>((tau - lo) / config.bin_width_ns);
    if (bin < hist.counts.size()) ++hist.counts[bin];
  }
  if (a.empty() || b.empty()) hist.warnings.emplace_back("one detector recorded no photons");
  return hist;
}

}  // namespace siv::optics
