#pragma once

#include "gcdhmc/potentials.hpp"
#include "gcdhmc/rng.hpp"
#include "gcdhmc/types.hpp"

namespace gcdhmc {

enum class JumpDirection { Insert, Delete };

/// One proposed dimension change.  For inserts, new_position/new_momentum
/// hold the sampled particle; for deletes, delete_index names the victim.
/// log_proposal_density is log pi_{N,N+1} evaluated at the affected
/// coordinates (position and momentum parts combined).
struct JumpProposal {
  JumpDirection direction = JumpDirection::Insert;
  RowVec new_position;
  RowVec new_momentum;
  Index delete_index = -1;
  double log_proposal_density = 0.0;
};

/// log pi_{N,N+1}(position, momentum): the insertion law's density at the
/// given coordinates (even in the momentum).
double log_insertion_density(const RowVec& position, const RowVec& momentum,
                             const PotentialModel& model, const SystemParams& params);

/// Insert proposal: q_new ~ UNIF(box) (periodic) or ~ exp(-beta V)/Z_beta
/// (confined Gaussian); p_new ~ N(0, (m/beta) I_d).
JumpProposal propose_insert(const PhaseState& state, const SystemParams& params, RngStream& rng);

/// Delete proposal: victim uniform over the current particles.
JumpProposal propose_delete(const PhaseState& state, RngStream& rng);

/// Free-energy barrier for an insert:
///   dU + log(N+1)/beta - log(V)/beta - mu                 (periodic)
///   dU + log(N+1)/beta - log(Z_beta)/beta - V(q_new) - mu (confined)
double barrier_insert(const PhaseState& state, const JumpProposal& proposal,
                      const PotentialModel& model, const SystemParams& params);

/// Free-energy barrier for a delete:
///   dU - log(N)/beta + log(V)/beta + mu                   (periodic)
///   dU - log(N)/beta + log(Z_beta)/beta + V(q_del) + mu   (confined)
double barrier_delete(const PhaseState& state, const JumpProposal& proposal,
                      const PotentialModel& model, const SystemParams& params);

/// Apply (or discard) a proposal.  Accepted inserts append the sampled
/// particle; accepted deletes remove the victim, preserving order.  The
/// indicator pair is untouched here; that bookkeeping lives in dynamics.
void apply_jump(PhaseState& state, const JumpProposal& proposal, bool accepted);

}  // namespace gcdhmc
