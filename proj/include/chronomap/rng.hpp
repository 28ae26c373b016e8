#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace chronomap {

// Derives an independent sub-stream seed from a user seed. The pipeline uses
// this so the generator, the codebook init and the training loop never share
// a stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled uniform draws. The standard distributions are
// implementation-defined, so every derived value here is computed from raw
// engine output to keep results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [0, n), unbiased via rejection.
  std::size_t next_index(std::size_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t excess = (max % n + 1) % n;  // 2^64 mod n
    std::uint64_t x = engine_();
    if (excess != 0) {
      const std::uint64_t limit = max - excess;
      while (x > limit) {
        x = engine_();
      }
    }
    return static_cast<std::size_t>(x % n);
  }

  // Fisher-Yates, high index down.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = next_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Draws an index with probability proportional to weights[i].
  // Weights must be non-negative with a positive sum.
  std::size_t next_weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = next_unit() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (u < cum) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chronomap
