#ifndef HYDROLAT_RNG_HPP
#define HYDROLAT_RNG_HPP

#include <cmath>
#include <cstdint>

#include "hydrolat/common.hpp"

namespace hydrolat {

// Counter-based Gaussian draws: every value is a pure function of
// (seed, stream, counter), so sampling is reproducible under any
// parallel schedule. Mixing is splitmix64 applied to the packed counter.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct CounterRng {
  std::uint64_t seed = 0;

  std::uint64_t word(std::uint64_t stream, std::uint64_t counter, std::uint64_t lane) const {
    std::uint64_t h = mix64(seed ^ 0x2545f4914f6cdd1dULL);
    h = mix64(h ^ stream);
    h = mix64(h ^ counter);
    h = mix64(h ^ lane);
    return h;
  }

  // uniform in (0,1)
  double uniform(std::uint64_t stream, std::uint64_t counter, std::uint64_t lane) const {
    return (static_cast<double>(word(stream, counter, lane) >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal via Box-Muller
  double normal(std::uint64_t stream, std::uint64_t counter) const {
    double u1 = uniform(stream, counter, 0);
    double u2 = uniform(stream, counter, 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
  }

  cplx normal_pair(std::uint64_t stream, std::uint64_t counter) const {
    double u1 = uniform(stream, counter, 0);
    double u2 = uniform(stream, counter, 1);
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
  }
};

}  // namespace hydrolat

#endif
