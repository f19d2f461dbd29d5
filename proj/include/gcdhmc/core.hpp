#pragma once

#include "gcdhmc/rng.hpp"
#include "gcdhmc/types.hpp"

namespace gcdhmc {

class PotentialModel;

/// K(p) = sum_i |p_i|^2 / (2m); 0 for an empty system.
double kinetic_energy(const ArrayXXd& momenta, double mass);

/// K_n(p_n) = |p_n| / m_n.
double laplace_kinetic(double indicator_momentum, double indicator_mass);

/// Componentwise (a - b) wrapped into [-L/2, L/2).
RowVec min_image_displacement(const RowVec& a, const RowVec& b, double box_length);

/// Scalar overload for 1-D displacements.
double min_image_displacement(double a, double b, double box_length);

/// Wrap every coordinate into [0, L).
void wrap_positions(ArrayXXd& positions, double box_length);

/// H = U_N(q) + K(p) + K_n(p_n) with U_N = U + log(N!)/beta - mu_tilde N.
/// Requires floor(indicator) == particle count.
double extended_hamiltonian(const PhaseState& state, const PotentialModel& model,
                            const SystemParams& params);

/// Same, reusing an already computed U(q) (avoids a second energy pass).
double extended_hamiltonian_with_energy(const PhaseState& state, double potential_energy,
                                        const SystemParams& params);

/// Draw p ~ N(0, m/beta) componentwise and p_n ~ Laplace(m_n/beta);
/// positions and the indicator are untouched.
void resample_momenta(PhaseState& state, const SystemParams& params, RngStream& rng);

}  // namespace gcdhmc
