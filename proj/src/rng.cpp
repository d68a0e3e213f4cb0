#include "langevin/rng.hpp"

#include <cmath>
#include <numbers>

namespace langevin {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {}

void NoiseStream::refill(std::uint64_t block) {
  const PhiloxCounter ctr{static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                          static_cast<std::uint32_t>(stream_id_),
                          static_cast<std::uint32_t>(stream_id_ >> 32)};
  const PhiloxKey key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  const PhiloxCounter out = philox4x32_10(ctr, key);
  const double u1 = to_open_unit((static_cast<std::uint64_t>(out[1]) << 32) | out[0]);
  const double u2 = to_open_unit((static_cast<std::uint64_t>(out[3]) << 32) | out[2]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_[0] = radius * std::cos(angle);
  cached_[1] = radius * std::sin(angle);
  cached_block_ = block;
}

double NoiseStream::next_normal() {
  const std::uint64_t block = counter_ >> 1;
  if (block != cached_block_) refill(block);
  return cached_[counter_++ & 1];
}

void NoiseStream::fill_normal(std::span<double> out) {
  for (double& v : out) v = next_normal();
}

std::vector<double> NoiseStream::normal_vector(std::size_t n) {
  std::vector<double> out(n);
  fill_normal(out);
  return out;
}

void NoiseStream::seek(std::uint64_t n) { counter_ = n; }

}  // namespace langevin
