#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace gennv {

// Name recorded in run metadata. Streams are std::mt19937_64 engines whose seed is
// a SplitMix64-mixed hash of (base seed, stream key words).
inline constexpr std::string_view kGeneratorName = "mt19937_64/splitmix64-stream-v1";

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Deterministic, order-sensitive hash of a base seed and a list of key words.
std::uint64_t derive_stream_seed(std::uint64_t base_seed,
                                 std::initializer_list<std::uint64_t> key) noexcept;

// Bit pattern of a double, for hashing real-valued keys such as lambda.
std::uint64_t double_bits(double v) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits. Does not depend on the standard
  // library's distribution implementations, so streams are portable.
  double uniform01() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t next() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gennv
