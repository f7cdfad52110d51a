#ifndef STREAMCODE_RANDOM_HPP
#define STREAMCODE_RANDOM_HPP

// All randomness is std::mt19937_64 (fixed by the standard, so sequences are
// portable). Seeds are mixed with SplitMix64 before use, and independent
// streams are derived from (seed, stream id).

#include <cstdint>
#include <random>

namespace streamcode {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection (bound >= 1).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = gen_();
    while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace streamcode

#endif  // STREAMCODE_RANDOM_HPP
