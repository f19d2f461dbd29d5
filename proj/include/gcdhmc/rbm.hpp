#pragma once

#include <vector>

#include "gcdhmc/potentials.hpp"
#include "gcdhmc/rng.hpp"
#include "gcdhmc/types.hpp"

namespace gcdhmc {

/// A random partition of {0..N-1} into batches for the batched force sum.
struct BatchPartition {
  std::vector<std::vector<Index>> batches;
  int batch_size = 2;

  Index covered() const {
    Index total = 0;
    for (const auto& b : batches) total += static_cast<Index>(b.size());
    return total;
  }
};

/// Chunk a uniform random permutation of {0..N-1} into consecutive blocks
/// of the requested size.  A single leftover index (N mod p == 1, N > 1)
/// is folded into the last batch so that every batch keeps >= 2 members;
/// other remainders stay as their own short batch.
BatchPartition shuffle_batches(Index n, int batch_size, RngStream& rng);

/// Split-kernel batched estimate of nabla U:
///   grad_i = nabla V(q_i) + sum_{j != i} K1(q_i - q_j)
///            + s_l * sum_{j in batch(i), j != i} K2(q_i - q_j),
/// with s_l = (N-1)/(|C_l|-1).  Setting printed_scaling uses the
/// uncorrected s_l = N/|C_l| instead (for A/B comparison only; it is
/// biased).  The K1 part does not depend on the partition.
ArrayXXd rbm_gradient(const ArrayXXd& positions, const PotentialModel& model,
                      const BatchPartition& partition, bool printed_scaling = false);

}  // namespace gcdhmc
