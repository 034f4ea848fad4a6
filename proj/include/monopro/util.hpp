#ifndef MONOPRO_UTIL_HPP_
#define MONOPRO_UTIL_HPP_

#include <cstdint>
#include <functional>
#include <random>

namespace monopro {

// splitmix64 step; used to derive independent streams from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix_seed(seed, 0)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : gen_(mix_seed(seed, stream)) {}

  double gaussian() { return normal_(gen_); }
  double uniform() { return unif_(gen_); }
  // inclusive bounds
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

// Runs fn(i) for i in [0, n). Honors MONOPRO_THREADS (default: serial).
// Results must be written to disjoint slots by the caller.
void parallel_for(int n, const std::function<void(int)>& fn);

// Thread cap from MONOPRO_THREADS; 1 when unset or invalid.
int thread_cap();

}  // namespace monopro

#endif  // MONOPRO_UTIL_HPP_
