#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <random>
#include <string_view>

namespace rismec {

// splitmix64 finalizer; mixes labels and indices into substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic random stream. Uniform and normal variates are generated
// explicitly (not via <random> distributions, whose output is
// implementation-defined), so identical seeds give identical draws on any
// standard library.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal, Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // circularly-symmetric complex Gaussian, unit variance: E|z|^2 = 1
  std::complex<double> cnormal() {
    const double re = normal();
    const double im = normal();
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

  static constexpr double kPi = 3.14159265358979323846;

 private:
  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// One named substream per (purpose, sweep value, trial). Purposes keep the
// direct-channel, RIS-channel, task and phase draws independent, so e.g.
// changing the element count N never perturbs the direct links or tasks,
// and all schemes at the same (sweep value, trial) see identical draws.
inline RngStream substream(std::uint64_t master, std::string_view purpose,
                           double sweep_value = 0.0, std::uint64_t trial = 0) {
  std::uint64_t sv_bits = 0;
  std::memcpy(&sv_bits, &sweep_value, sizeof(sv_bits));
  std::uint64_t s = master;
  s = mix64(s ^ fnv1a(purpose));
  s = mix64(s ^ sv_bits);
  s = mix64(s ^ trial);
  return RngStream(s);
}

}  // namespace rismec
