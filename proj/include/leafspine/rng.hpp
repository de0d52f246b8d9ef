#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace leafspine {

// Independent deterministic streams derived from one master seed, so that
// e.g. sort tie-breaking never perturbs fill-edge choices.
enum class RngStream : std::uint64_t {
  SortTies = 0x9e3779b97f4a7c15ull,
  BfsTies = 0xbf58476d1ce4e5b9ull,
  Fill = 0x94d049bb133111ebull,
  Generator = 0xd6e8feb86659fd93ull,
  Expander = 0xa0761d6478bd642full,
  Update = 0xe7037ed1a0b428dbull,
};

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t master, RngStream stream,
                                std::uint64_t salt = 0) {
  return std::mt19937_64(mix64(master ^ static_cast<std::uint64_t>(stream)) ^
                         mix64(salt + 1));
}

// Uniform in [0, bound). std::uniform_int_distribution's sequence is
// implementation-defined, so draws are done by rejection here.
inline std::size_t rand_index(std::mt19937_64& rng, std::size_t bound) {
  std::size_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    std::size_t r = static_cast<std::size_t>(rng()) & mask;
    if (r < bound) return r;
  }
}

// Uniform in [0, 1) with 53 bits of precision.
inline double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rand_index(rng, i)]);
  }
}

}  // namespace leafspine
