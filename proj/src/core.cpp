#include "gcdhmc/core.hpp"

#include <cmath>

#include "gcdhmc/potentials.hpp"

namespace gcdhmc {

double kinetic_energy(const ArrayXXd& momenta, double mass) {
  if (momenta.size() == 0) return 0.0;
  return momenta.square().sum() / (2.0 * mass);
}

double laplace_kinetic(double indicator_momentum, double indicator_mass) {
  return std::abs(indicator_momentum) / indicator_mass;
}

RowVec min_image_displacement(const RowVec& a, const RowVec& b, double box_length) {
  RowVec z = a - b;
  return z - box_length * (z / box_length + 0.5).floor();
}

double min_image_displacement(double a, double b, double box_length) {
  const double z = a - b;
  return z - box_length * std::floor(z / box_length + 0.5);
}

void wrap_positions(ArrayXXd& positions, double box_length) {
  positions -= box_length * (positions / box_length).floor();
}

double extended_hamiltonian_with_energy(const PhaseState& state, double potential_energy,
                                        const SystemParams& params) {
  const auto n_particles = state.count();
  const double effective =
      potential_energy + std::lgamma(static_cast<double>(n_particles) + 1.0) / params.beta -
      params.mu_tilde() * static_cast<double>(n_particles);
  return effective + kinetic_energy(state.momenta, params.mass) +
         laplace_kinetic(state.indicator_momentum, params.indicator_mass);
}

double extended_hamiltonian(const PhaseState& state, const PotentialModel& model,
                            const SystemParams& params) {
  if (static_cast<Index>(std::floor(state.indicator)) != state.count())
    throw std::invalid_argument("extended_hamiltonian: floor(n) != particle count");
  return extended_hamiltonian_with_energy(state, model.energy(state.positions), params);
}

void resample_momenta(PhaseState& state, const SystemParams& params, RngStream& rng) {
  const double sigma = std::sqrt(params.mass / params.beta);
  for (Index i = 0; i < state.momenta.rows(); ++i)
    for (Index k = 0; k < state.momenta.cols(); ++k)
      state.momenta(i, k) = sigma * rng.normal();
  state.indicator_momentum = rng.laplace(params.indicator_mass / params.beta);
}

}  // namespace gcdhmc
