#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace tapa {

/// Deterministic random stream keyed by (seed, stream_index).
///
/// Monte Carlo work is partitioned over stream indices, never over threads,
/// so a run produces bit-identical numbers regardless of worker count or
/// scheduling. The core is xoshiro256++ with splitmix64 state expansion;
/// normals come from Box-Muller with a fixed consumption of two uniforms
/// per pair, which keeps every stream's draw sequence platform-stable
/// (libstdc++ distributions make no such guarantee).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index) {
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
    for (auto& s : state_) {
      z += 0x9E3779B97F4A7C15ULL;
      std::uint64_t w = z;
      w = (w ^ (w >> 30)) * 0xBF58476D1CE4E5B9ULL;
      w = (w ^ (w >> 27)) * 0x94D049BB133111EBULL;
      s = w ^ (w >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in the open-closed interval (0, 1].
  double next_uniform() {
    return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal draw (Box-Muller, cached spare).
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in the inclusive range [lo, hi].
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tapa
