#pragma once

#include <cstdint>
#include <random>

namespace fbmlt {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of replicate `replicate` under experiment seed `master`:
/// splitmix64(master ^ splitmix64(replicate + 1)). Stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate);

/// Standard normal stream. mt19937_64 is bit-specified by the standard; the
/// Box-Muller transform is done here because std::normal_distribution is not.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double operator()();
  /// Uniform on (0, 1], 53 bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fbmlt
