#pragma once

#include <cmath>
#include <cstdint>

namespace sociallearn {

/// Stateless counter-keyed generator: every draw is a pure function of
/// (seed, trajectory, round, agent, role, lane), so any partition of the
/// work across threads reproduces identical streams.
class CounterRng {
 public:
  enum class Role : std::uint64_t {
    state_init = 1,     // S(0)
    drift = 2,          // X(t)
    measurement = 3,    // D_i(t)
    estimate_init = 4,  // Y_i(0) noise
  };

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t trajectory, std::uint32_t round, std::uint32_t agent,
                     Role role, std::uint64_t lane) const {
    std::uint64_t h = mix(seed_ ^ 0x8000000080001000ull);
    h = mix(h ^ (trajectory + 0x9E3779B97F4A7C15ull));
    h = mix(h ^ ((static_cast<std::uint64_t>(round) << 32) | agent));
    h = mix(h ^ (static_cast<std::uint64_t>(role) + (lane << 8)));
    return h;
  }

  /// Uniform on (0, 1].
  double uniform01(std::uint64_t trajectory, std::uint32_t round, std::uint32_t agent, Role role,
                   std::uint64_t lane) const {
    return (static_cast<double>(bits(trajectory, round, agent, role, lane) >> 11) + 1.0) *
           0x1.0p-53;
  }

  /// Standard normal via Box-Muller on two lanes.
  double normal(std::uint64_t trajectory, std::uint32_t round, std::uint32_t agent,
                Role role) const {
    const double u1 = uniform01(trajectory, round, agent, role, 0);
    const double u2 = uniform01(trajectory, round, agent, role, 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Zero-mean draw with the given standard deviation; uniform family is
  /// rescaled to [-sqrt(3) s, sqrt(3) s] so second moments match.
  double zero_mean(bool gaussian, double stddev, std::uint64_t trajectory, std::uint32_t round,
                   std::uint32_t agent, Role role) const {
    if (gaussian) return stddev * normal(trajectory, round, agent, role);
    const double u = uniform01(trajectory, round, agent, role, 0);
    return stddev * 1.7320508075688772935 * (2.0 * u - 1.0);
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace sociallearn
