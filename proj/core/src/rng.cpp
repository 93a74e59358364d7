#include "crpsbin/rng.hpp"

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace crpsbin {

RngSeed derive_seed(RngSeed base, std::uint64_t stream) noexcept {
  std::uint64_t z = base.value + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return RngSeed{z ^ (z >> 31)};
}

double Rng::uniform(double lo, double hi) {
  return boost::random::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal(double mean, double sd) {
  return boost::random::normal_distribution<double>(mean, sd)(engine_);
}

bool Rng::bernoulli(double p) {
  return boost::random::bernoulli_distribution<double>(p)(engine_);
}

std::size_t Rng::index(std::size_t n) {
  return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

}  // namespace crpsbin
