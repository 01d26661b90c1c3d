#include "siv/rng.hpp"

namespace siv::rng {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, Stage stage,
                             std::uint64_t index) noexcept {
  const auto base = mix64(master ^ mix64(static_cast<std::uint64_t>(stage)));
  return mix64(base + index);
}

Engine substream(std::uint64_t master, Stage stage, std::uint64_t index) {
  return Engine(substream_seed(master, stage, index));
}

}  // namespace siv::rng
