#pragma once

#include <cstdint>
#include <random>

namespace byztree {

// splitmix64 finalizer; used to derive independent per-trial seeds from a
// master seed so trials can be dispatched in any order (or in parallel) with
// bit-identical results.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(master ^ 0x6a09e667f3bcc908ULL) + mix64(stream) + index * 0x9e3779b97f4a7c15ULL);
}

// mt19937_64 with a fixed 53-bit uniform mapping. The engine's output sequence
// is pinned by the standard, so seeded runs reproduce across platforms; the
// std::*_distribution adapters would not guarantee that.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // unbiased integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace byztree
