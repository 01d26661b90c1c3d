#pragma once

#include <cstdint>
#include <random>

namespace siv::rng {

using Engine = std::mt19937_64;

/// Stage tags for substream derivation. Values are part of the seed
/// derivation and must not be renumbered.
enum class Stage : std::uint64_t {
  kTransport = 1,
  kPinhole = 2,
  kEmitterField = 3,
  kConfocal = 4,
  kHbt = 5,
  kAnalysis = 6,
};

/// One SplitMix64 step: golden-ratio increment, then the finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of substream `index` of `stage` under `master`:
///   mix64(mix64(master ^ mix64(stage)) + index).
/// Histories, spots and pixel rows each get their own index, so results do
/// not depend on how work is split across threads.
std::uint64_t substream_seed(std::uint64_t master, Stage stage,
                             std::uint64_t index) noexcept;

Engine substream(std::uint64_t master, Stage stage, std::uint64_t index);

/// Uniform double in (0, 1).
inline double uniform_open(Engine& g) {
  // 53 random bits, offset by half an ulp so 0 is never returned.
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace siv::rng
