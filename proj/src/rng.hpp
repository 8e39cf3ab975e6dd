#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace gtours {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
// Each call encrypts a 128-bit counter under a 64-bit key and returns four
// 32-bit words.  Because outputs depend only on (counter, key), any sample
// index can be generated independently of all others, which is what makes
// the deterministic parallel reduction possible.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> encrypt(std::array<std::uint32_t, 4> counter,
                                              std::uint64_t key) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
      if (round != 0) {
        k0 += kWeyl0;
        k1 += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * counter[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * counter[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      counter = {hi1 ^ counter[1] ^ k0, lo1, hi0 ^ counter[3] ^ k1, lo0};
    }
    return counter;
  }
};

// Inverse of the standard normal CDF, algorithm AS 241 (Wichura 1988),
// double-precision branch PPND16.  Relative error is below 1e-15 across
// (0, 1).  Requires 0 < p < 1.
inline double normal_quantile(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
            1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
          1.3314166789178437745e2) * r + 3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
            5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
          4.2313330701600911252e1) * r + 1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
    x = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    x = num / den;
  }
  return (q < 0.0) ? -x : x;
}

// Stream of standard normal deviates for one sample.  The counter layout is
// (sample index low word, sample index high word, block sequence, stream
// tag) and the key is the user's seed, so distinct (seed, tag, sample)
// triples never share Philox blocks.  Each 128-bit block yields two
// uniforms via the top 53 bits of each 64-bit half, mapped into the open
// interval (0, 1), and each uniform is inverted through normal_quantile.
// The quantile map consumes exactly one uniform per deviate, which keeps
// the stream position a pure function of how many deviates were drawn.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t sample_index, std::uint32_t tag)
      : key_(seed),
        base_{static_cast<std::uint32_t>(sample_index),
              static_cast<std::uint32_t>(sample_index >> 32), 0u, tag} {}

  double next() {
    if (phase_ == 0) {
      std::array<std::uint32_t, 4> ctr = base_;
      ctr[2] = block_++;
      const auto words = Philox4x32::encrypt(ctr, key_);
      pending_[0] = to_unit(words[0], words[1]);
      pending_[1] = to_unit(words[2], words[3]);
    }
    const double u = pending_[phase_];
    phase_ ^= 1;
    return normal_quantile(u);
  }

 private:
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  std::uint64_t key_;
  std::array<std::uint32_t, 4> base_;
  std::uint32_t block_ = 0;
  int phase_ = 0;
  std::array<double, 2> pending_{};
};

}  // namespace gtours
