#include "gcdhmc/rbm.hpp"

#include <stdexcept>

namespace gcdhmc {

BatchPartition shuffle_batches(Index n, int batch_size, RngStream& rng) {
  if (batch_size < 2) throw std::invalid_argument("batch size must be >= 2");
  BatchPartition part;
  part.batch_size = batch_size;
  if (n == 0) return part;

  const auto perm = rng.permutation(static_cast<std::size_t>(n));
  const Index p = batch_size;
  Index pos = 0;
  while (pos < n) {
    Index take = std::min<Index>(p, n - pos);
    // fold a lone leftover into the previous block
    if (n - pos - take == 1 && n > 1) take += 1;
    std::vector<Index> batch(static_cast<std::size_t>(take));
    for (Index k = 0; k < take; ++k) batch[static_cast<std::size_t>(k)] = static_cast<Index>(perm[static_cast<std::size_t>(pos + k)]);
    part.batches.push_back(std::move(batch));
    pos += take;
  }
  return part;
}

ArrayXXd rbm_gradient(const ArrayXXd& positions, const PotentialModel& model,
                      const BatchPartition& partition, bool printed_scaling) {
  const Index n = positions.rows();
  if (partition.covered() != n)
    throw std::invalid_argument("batch partition does not cover the configuration");

  ArrayXXd grad = ArrayXXd::Zero(n, positions.cols());
  model.add_confinement_gradient(positions, grad);
  model.add_singular_gradient(positions, grad);

  for (const auto& batch : partition.batches) {
    const Index size = static_cast<Index>(batch.size());
    if (size == 1 && n > 1)
      throw std::invalid_argument("batch of size 1 cannot be scaled (N > 1)");
    if (size < 2) continue;  // N == 1: nothing pairwise to estimate
    const double scale = printed_scaling
                             ? static_cast<double>(n) / static_cast<double>(size)
                             : static_cast<double>(n - 1) / static_cast<double>(size - 1);
    for (Index a = 0; a < size; ++a) {
      const Index i = batch[static_cast<std::size_t>(a)];
      for (Index b = 0; b < size; ++b) {
        if (a == b) continue;
        const Index j = batch[static_cast<std::size_t>(b)];
        const RowVec z = positions.row(i) - positions.row(j);
        grad.row(i) += scale * model.smooth_pair_kernel(z);
      }
    }
  }
  return grad;
}

}  // namespace gcdhmc
