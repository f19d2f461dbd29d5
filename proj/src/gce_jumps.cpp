#include "gcdhmc/gce_jumps.hpp"

#include <cmath>
#include <stdexcept>

namespace gcdhmc {

namespace {

double log_momentum_density(const RowVec& p, const SystemParams& params) {
  const double log_zp =
      0.5 * params.dim * std::log(2.0 * params.mass * M_PI / params.beta);
  return -params.beta * p.square().sum() / (2.0 * params.mass) - log_zp;
}

void check_finite_barrier(double value) {
  if (!std::isfinite(value)) throw NonFiniteEnergyError("non-finite energy in jump barrier");
}

}  // namespace

double log_insertion_density(const RowVec& position, const RowVec& momentum,
                             const PotentialModel& model, const SystemParams& params) {
  double log_position_density;
  if (params.boundary == Boundary::Periodic) {
    log_position_density = -std::log(params.volume());
  } else {
    log_position_density =
        -params.beta * model.confinement(position) - params.log_confinement_normalizer();
  }
  return log_position_density + log_momentum_density(momentum, params);
}

JumpProposal propose_insert(const PhaseState& state, const SystemParams& params, RngStream& rng) {
  JumpProposal prop;
  prop.direction = JumpDirection::Insert;
  prop.new_position.resize(params.dim);
  prop.new_momentum.resize(params.dim);

  double log_position_density = 0.0;
  if (params.boundary == Boundary::Periodic) {
    for (int k = 0; k < params.dim; ++k)
      prop.new_position(k) = rng.uniform(0.0, params.box_length);
    log_position_density = -std::log(params.volume());
  } else {
    // exp(-beta |q|^2/2) / Z_beta, an exact Gaussian draw
    const double sigma = 1.0 / std::sqrt(params.beta);
    for (int k = 0; k < params.dim; ++k) prop.new_position(k) = sigma * rng.normal();
    log_position_density = -params.beta * 0.5 * prop.new_position.square().sum() -
                           params.log_confinement_normalizer();
  }
  const double sigma_p = std::sqrt(params.mass / params.beta);
  for (int k = 0; k < params.dim; ++k) prop.new_momentum(k) = sigma_p * rng.normal();

  prop.log_proposal_density = log_position_density + log_momentum_density(prop.new_momentum, params);
  (void)state;
  return prop;
}

JumpProposal propose_delete(const PhaseState& state, RngStream& rng) {
  if (state.count() < 1) throw std::invalid_argument("propose_delete: empty system");
  JumpProposal prop;
  prop.direction = JumpDirection::Delete;
  prop.delete_index = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(state.count())));
  return prop;
}

double barrier_insert(const PhaseState& state, const JumpProposal& proposal,
                      const PotentialModel& model, const SystemParams& params) {
  if (proposal.direction != JumpDirection::Insert)
    throw std::invalid_argument("barrier_insert: proposal is not an insert");
  const double n_after = static_cast<double>(state.count()) + 1.0;
  const double delta_u = model.insertion_energy_delta(state.positions, proposal.new_position);
  check_finite_barrier(delta_u);
  double barrier = delta_u + std::log(n_after) / params.beta - params.mu;
  if (params.boundary == Boundary::Periodic) {
    barrier -= std::log(params.volume()) / params.beta;
  } else {
    barrier -= params.log_confinement_normalizer() / params.beta;
    barrier -= model.confinement(proposal.new_position);
  }
  return barrier;
}

double barrier_delete(const PhaseState& state, const JumpProposal& proposal,
                      const PotentialModel& model, const SystemParams& params) {
  if (proposal.direction != JumpDirection::Delete)
    throw std::invalid_argument("barrier_delete: proposal is not a delete");
  if (state.count() < 1) throw std::invalid_argument("barrier_delete: empty system");
  const double n_before = static_cast<double>(state.count());
  const double delta_u = model.deletion_energy_delta(state.positions, proposal.delete_index);
  check_finite_barrier(delta_u);
  double barrier = delta_u - std::log(n_before) / params.beta + params.mu;
  if (params.boundary == Boundary::Periodic) {
    barrier += std::log(params.volume()) / params.beta;
  } else {
    barrier += params.log_confinement_normalizer() / params.beta;
    barrier += model.confinement(state.positions.row(proposal.delete_index));
  }
  return barrier;
}

void apply_jump(PhaseState& state, const JumpProposal& proposal, bool accepted) {
  if (!accepted) return;
  const Index n = state.count();
  if (proposal.direction == JumpDirection::Insert) {
    state.positions.conservativeResize(n + 1, Eigen::NoChange);
    state.momenta.conservativeResize(n + 1, Eigen::NoChange);
    state.positions.row(n) = proposal.new_position;
    state.momenta.row(n) = proposal.new_momentum;
  } else {
    if (proposal.delete_index < 0 || proposal.delete_index >= n)
      throw std::out_of_range("apply_jump: delete index out of range");
    const Index i = proposal.delete_index;
    const Index tail = n - 1 - i;
    if (tail > 0) {
      state.positions.middleRows(i, tail) = state.positions.bottomRows(tail).eval();
      state.momenta.middleRows(i, tail) = state.momenta.bottomRows(tail).eval();
    }
    state.positions.conservativeResize(n - 1, Eigen::NoChange);
    state.momenta.conservativeResize(n - 1, Eigen::NoChange);
  }
}

}  // namespace gcdhmc
