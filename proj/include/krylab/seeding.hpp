#pragma once

#include <cstdint>

namespace krylab {

// SplitMix64 finalizer; used to derive independent per-task seeds from a
// master seed so that parallel work stays reproducible.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix_seed(mix_seed(master) ^ (index + 1));
}

}  // namespace krylab
