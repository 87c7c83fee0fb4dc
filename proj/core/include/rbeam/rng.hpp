#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rbeam {

// Stable mixing of (master seed, stream id) into an independent stream seed.
// splitmix64 finisher; the same (master, id) pair always yields the same
// stream on every platform.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Standard-normal stream over mt19937_64 with an explicit Box-Muller
// transform. std::normal_distribution is implementation-defined, which would
// break the bit-identical-render guarantee across toolchains.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly symmetric complex normal with E|z|^2 = power.
  std::complex<double> next_complex(double power = 1.0) {
    const double s = std::sqrt(0.5 * power);
    const double re = next();
    const double im = next();
    return {s * re, s * im};
  }

 private:
  double uniform01() {
    // 53-bit mantissa in [0, 1); 1 - u keeps log() away from zero.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rbeam
