#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gcdhmc {

/// Seedable random stream with a fixed draw algorithm for every
/// distribution we use, so that equal seeds and equal call sequences give
/// bit-identical results independent of the standard library's
/// distribution implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  /// Derive an independent stream (used for parallel chains).
  RngStream spawn(std::uint64_t salt) const;

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();

  /// Uniform on [a, b).
  double uniform(double a, double b);

  /// Uniform integer in {0, ..., bound-1}; bound >= 1.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Standard Gaussian (Marsaglia polar, one spare cached).
  double normal();

  /// Laplace with density exp(-|x|/scale) / (2 scale).
  double laplace(double scale);

  /// Random permutation of {0, ..., n-1} (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::uint64_t next_u64();

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gcdhmc
