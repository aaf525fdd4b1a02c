#pragma once

#include <cstdint>

namespace mrec {

// splitmix64 finalizer; full-period bijection on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic per-branch / per-cell seed derivation. Independent branches
// get decorrelated streams from (parent seed, branch index) alone, so sibling
// subtrees can run concurrently and still reproduce bit-identical results.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return mix64(parent ^ mix64(index + 1));
}

}  // namespace mrec
