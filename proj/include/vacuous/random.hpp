#pragma once

// Counter-based random numbers. Every (seed, stream) pair names an
// independent substream, so replicate i of a simulation draws from stream i
// no matter which worker runs it.

#include <array>
#include <cstdint>

#include "vacuous/specfun.hpp"

namespace vacuous {

/// Philox4x32-10 block function (Salmon et al., Random123).
class Philox4x32 {
 public:
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  static constexpr counter_type apply(counter_type counter, key_type key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      counter = single_round(counter, key);
    }
    return counter;
  }

 private:
  static constexpr counter_type single_round(const counter_type& ctr, const key_type& key) {
    const std::uint64_t product0 = std::uint64_t{0xD2511F53u} * ctr[0];
    const std::uint64_t product1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(product0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(product0);
    const auto hi1 = static_cast<std::uint32_t>(product1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(product1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
};

/// Sequential draws from one substream. Counter words 0-1 hold the block
/// index and words 2-3 the stream index; the seed is the key.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint32_t next_u32() {
    if (index_ == 4) refill();
    return buffer_[index_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal by inversion.
  double normal() { return specfun::normal_quantile(uniform()); }

  /// Chi-squared with dof degrees of freedom as a sum of squared normals.
  double chi_squared(int dof) {
    double sum = 0.0;
    for (int i = 0; i < dof; ++i) {
      const double z = normal();
      sum += z * z;
    }
    return sum;
  }

 private:
  void refill() {
    const Philox4x32::counter_type counter{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = Philox4x32::apply(counter, key_);
    ++block_;
    index_ = 0;
  }

  Philox4x32::key_type key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::counter_type buffer_{};
  int index_ = 4;
};

}  // namespace vacuous
