#include "ckpt/rng.hpp"

namespace ckpt {

std::uint64_t splitmix64(std::uint64_t value) {
  std::uint64_t z = value + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t instance_seed(std::uint64_t base_seed, std::uint64_t instance) {
  return base_seed ^ splitmix64(instance);
}

std::uint64_t substream_seed(std::uint64_t seed, Substream stream) {
  return splitmix64(seed ^ splitmix64(0xC0FFEE00ULL + static_cast<std::uint64_t>(stream)));
}

double uniform_open_closed(Rng& rng) {
  double u = 0.0;
  while (u <= 0.0) u = 1.0 - std::generate_canonical<double, 53>(rng);
  return u;
}

}  // namespace ckpt
