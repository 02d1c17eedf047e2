#include "gennv/rng.hpp"

#include <bit>

namespace gennv {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t base_seed,
                                 std::initializer_list<std::uint64_t> key) noexcept {
  std::uint64_t h = splitmix64(base_seed);
  for (std::uint64_t word : key) {
    h = splitmix64(h ^ splitmix64(word + 0x632be59bd9b4e019ULL));
  }
  return h;
}

std::uint64_t double_bits(double v) noexcept {
  if (v == 0.0) v = 0.0;  // fold -0.0 onto +0.0
  return std::bit_cast<std::uint64_t>(v);
}

}  // namespace gennv
