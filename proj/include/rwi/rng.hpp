#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace rwi {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 stream derivation. One Rng per (seed, stream)
// pair gives reproducible results under any parallel schedule: stream ids are
// assigned by logical index (sample, trajectory), never by thread.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed ^ (0xd2b74407b1ce6e93ULL * (stream + 1));
    for (auto& w : s_) w = splitmix64(sm);
    bool all_zero = true;
    for (auto w : s_) all_zero = all_zero && (w == 0);
    if (all_zero) s_[0] = 0x9e3779b97f4a7c15ULL;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0,1): 53-bit mantissa, zero excluded so logs are safe.
  double uniform01() {
    for (;;) {
      double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Exact Poisson sampling by exponential spacings; O(mean) work.
  long long poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean)) throw std::invalid_argument("poisson: bad mean");
    if (mean == 0.0) return 0;
    if (mean > 1e6) throw std::invalid_argument("poisson: mean too large");
    long long count = 0;
    double t = exponential(mean);
    while (t < 1.0) {
      ++count;
      t += exponential(mean);
    }
    return count;
  }

  // Draws an index from a cumulative distribution (last entry ~ 1).
  std::size_t discrete_cdf(std::span<const double> cdf) {
    const double u = uniform01();
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u <= cdf[mid]) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rwi
