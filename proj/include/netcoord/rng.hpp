#pragma once

#include <cstdint>
#include <random>

namespace netcoord {

using Rng = std::mt19937_64;

// Derives a child seed from a master seed and a stream index, so that
// replicates/workers get decorrelated but reproducible generators.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 step over (master ^ golden*stream)
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace netcoord
