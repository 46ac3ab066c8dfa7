#ifndef XCHAN_RNG_HPP
#define XCHAN_RNG_HPP

#include <cmath>
#include <cstdint>

namespace xchan {

// Counter-based random stream: the state for (seed, index) is derived by
// mixing, so sample i can be regenerated in isolation and results do not
// depend on how samples are partitioned across threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t index)
      : state_(mix(seed ^ 0x5bf0f1c3a9e4d2b7ULL, index)) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0,1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (lo, hi]; never returns lo exactly.
  double next_open_closed(double lo, double hi) {
    return hi - (hi - lo) * next_unit();
  }

  // Standard normal via Box-Muller.
  double next_gauss() {
    double u1 = next_unit();
    double u2 = next_unit();
    if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace xchan

#endif  // XCHAN_RNG_HPP
