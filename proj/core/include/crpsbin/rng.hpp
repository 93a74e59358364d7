#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace crpsbin {

struct RngSeed {
  std::uint64_t value = 0;
};

// Derives an independent stream seed (splitmix64 finaliser) so replications
// can be generated in any order and still be reproducible.
RngSeed derive_seed(RngSeed base, std::uint64_t stream) noexcept;

// Seedable generator used for every random draw in the project. The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; the
// distributions come from Boost.Random, whose algorithms are fixed across
// platforms. Together they make samples bit-identical for a given seed.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64/boost-random v1";

  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  double normal(double mean, double sd);
  bool bernoulli(double p);
  // Uniform on {0, ..., n-1}; n > 0.
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace crpsbin
