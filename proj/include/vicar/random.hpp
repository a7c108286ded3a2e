#pragma once

#include <cstdint>
#include <random>

namespace vicar {

// Every run owns one of these; nothing in the library shares a stream.
using Rng = std::mt19937_64;

// Uniform draw on the open interval (0, 1).
inline double uniform_open01(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  while (u <= 0.0 || u >= 1.0) u = dist(rng);
  return u;
}

// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// splitmix64 finalizer: a 64-bit multiply-xor-shift bijection.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace vicar
