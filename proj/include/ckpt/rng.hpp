#pragma once

// Seed derivation. An experiment has one 64-bit base seed; instance i draws
// from base ^ splitmix64(i), and each random ingredient of an instance reads
// its own substream.

#include <cstdint>
#include <random>

namespace ckpt {

using Rng = std::mt19937_64;

enum class Substream : std::uint64_t {
  Faults = 1,
  Labeling = 2,
  FalsePredictions = 3,
  InexactOffsets = 4,
  Policy = 5,
};

std::uint64_t splitmix64(std::uint64_t value);

std::uint64_t instance_seed(std::uint64_t base_seed, std::uint64_t instance);

std::uint64_t substream_seed(std::uint64_t seed, Substream stream);

inline Rng make_rng(std::uint64_t seed, Substream stream) { return Rng(substream_seed(seed, stream)); }

// Uniform draw on (0, 1].
double uniform_open_closed(Rng& rng);

}  // namespace ckpt
