#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace bgbm {

using Engine = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// (seed, stream index) -> substream seed. Monte Carlo drivers give every
// replication (or fixed-size block of replications) its own stream, so the
// draws do not depend on how work is split across threads.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  return Engine(substream_seed(seed, stream));
}

// Thin sampler bundle around one engine: ziggurat normals and open-interval
// uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(make_engine(seed, stream)) {}

  double normal() { return normal_(engine_); }

  // Uniform on (0, 1); never returns 0 so log(u) is finite.
  double uniform() {
    double u;
    do {
      u = uniform_(engine_);
    } while (u <= 0.0);
    return u;
  }

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
  boost::random::uniform_01<double> uniform_;
};

}  // namespace bgbm
