#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace cqed {

// Deterministic normal generator. std::normal_distribution is not pinned down
// by the standard, so traces would not be bit-stable across toolchains; this
// explicit Box-Muller over mt19937_64 is.
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : eng_(seed) {}

  // substream derivation for per-trace noise independent of trace content
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return seed + 0x9E3779B97F4A7C15ull * (index + 1);
  }

  double uniform() {
    // (0,1], never 0, so log() below is safe
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace cqed
