#pragma once

#include "gcdhmc/potentials.hpp"
#include "gcdhmc/rng.hpp"
#include "gcdhmc/trace.hpp"
#include "gcdhmc/types.hpp"

namespace gcdhmc {

struct MhConfig {
  double prob_insert = 0.4;
  double prob_delete = 0.4;
  double prob_displace = 0.2;

  void validate() const {
    if (prob_insert < 0.0 || prob_delete < 0.0 || prob_displace < 0.0 ||
        std::abs(prob_insert + prob_delete + prob_displace - 1.0) > 1e-12)
      throw std::invalid_argument("MH move probabilities must be nonnegative and sum to 1");
  }
};

enum class MhMoveKind { Insert, Delete, Displace };

struct MhMove {
  MhMoveKind kind = MhMoveKind::Insert;
  bool accepted = false;
};

/// One reversible-jump MH step on the positions-only chain:
///   insert:  q_new ~ UNIF(box),      acc = min{1, V e^{b mu} e^{-b dU} / (N+1)}
///   delete:  victim uniform,         acc = min{1, N e^{-b mu} e^{-b dU} / V}
///   displace floor(N/5) particles to fresh uniform positions,
///                                    acc = min{1, e^{-b dU}}
/// A delete at N=0 auto-rejects; a displacement of 0 particles auto-accepts.
MhMove mh_step(ArrayXXd& positions, const PotentialModel& model, const SystemParams& params,
               const MhConfig& cfg, RngStream& rng);

ChainTrace mh_sample(ArrayXXd& positions, const PotentialModel& model, const SystemParams& params,
                     const MhConfig& cfg, const SampleOptions& opt, RngStream& rng);

}  // namespace gcdhmc
