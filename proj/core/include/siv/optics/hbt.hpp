#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace siv::optics {

/// Photon statistics of independent three-level emitters (ground, excited,
/// optional shelving level) observed through a 50/50 beam splitter.
struct HbtConfig {
  int n_emitters = 1;
  double lifetime_ns = 1.7;
  double excitation_rate_per_ns = 0.05;
  double detection_efficiency = 0.0012;
  /// Probability that a decay from the excited state goes to the shelf.
  double shelving_probability = 0.0;
  double shelf_lifetime_ns = 0.0;
  double duration_s = 60.0;
  double bin_width_ns = 0.25;
  double max_delay_ns = 100.0;

  /// Throws ConfigError for n_emitters < 1, non-positive duration, lifetime,
  /// bin width or delay range, or probabilities outside [0, 1].
  void validate() const;
};

/// Mean detected rate of one emitter in counts/s (both detectors together).
double detected_rate_cps(const HbtConfig& config);

/// Excitation rate per ns at which one emitter yields `target_cps` detected
/// counts. Throws DomainError if the target is unreachable.
double excitation_rate_for(double target_cps, const HbtConfig& config);

struct CoincidenceHistogram {
  double bin_width_ns = 0;
  /// Lower edge of bin 0.
  double min_delay_ns = 0;
  std::vector<std::uint64_t> counts;
  double rate_a_cps = 0;
  double rate_b_cps = 0;
  double duration_s = 0;
  /// Bins with |delay| above this form the normalization plateau.
  double plateau_min_delay_ns = 17.0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return counts.size(); }
  double delay_ns(std::size_t i) const {
    return min_delay_ns + (static_cast<double>(i) + 0.5) * bin_width_ns;
  }
};

/// Mean count of the plateau bins. Throws NormalizationError if there are
/// none or they are all empty.
double plateau_level(const CoincidenceHistogram& hist);

/// counts / plateau_level.
std::vector<double> normalized_g2(const CoincidenceHistogram& hist);

/// Start-stop coincidences: every detector-A photon starts a clock that the
/// first detector-B photon later than (start - max_delay) stops. Bins are
/// centred on zero delay; the plateau threshold is 10 lifetimes. A
/// configuration without emission returns an empty histogram and a warning.
CoincidenceHistogram simulate_hbt(const HbtConfig& config, std::uint64_t seed);

}  // namespace siv::optics
