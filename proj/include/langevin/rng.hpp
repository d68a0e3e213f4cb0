#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace langevin {

/// Philox4x32-10 block function (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Counter-based stream of standard normals.
///
/// Draw number n of stream (seed, stream_id) is a pure function of those
/// three integers: the Philox block with counter (n/2 lo, n/2 hi,
/// stream_id lo, stream_id hi) under key seed yields two 53-bit uniforms
/// in (0,1), which Box-Muller turns into a cosine variate (even n) and a
/// sine variate (odd n). Every normal advances the counter by exactly one.
/// Distinct stream ids therefore never share a block.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream_id);

  double next_normal();
  void fill_normal(std::span<double> out);
  std::vector<double> normal_vector(std::size_t n);

  /// Jumps to draw number n without generating the skipped draws.
  void seek(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

 private:
  void refill(std::uint64_t block);

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  double cached_[2] = {0.0, 0.0};
};

/// Uniform in the open interval (0,1) from the 52 high bits, at cell midpoints.
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace langevin
