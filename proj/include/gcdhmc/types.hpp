#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gcdhmc {

using Eigen::ArrayXXd;
using Eigen::Index;
using RowVec = Eigen::Array<double, 1, Eigen::Dynamic>;

/// Raised when an energy evaluation would be non-finite (e.g. overlapping
/// particles inside the hard-core guard radius).
struct NonFiniteEnergyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a chain cannot continue (propagated out of the samplers).
struct SamplerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Boundary {
  Periodic,         // box [0,L)^d, minimum-image interactions
  ConfinedGaussian  // full space with V(q) = |q|^2/2 confinement
};

/// Physical and algorithmic constants of one system.
struct SystemParams {
  double beta = 1.0;            // inverse temperature
  double mu = 0.0;              // chemical potential
  double mass = 1.0;            // particle mass m
  double indicator_mass = 1.0;  // m_n, mass of the dimension indicator
  double box_length = 1.0;      // L, side of the periodic box
  int dim = 1;                  // spatial dimension d
  Boundary boundary = Boundary::Periodic;

  double volume() const {
    return std::pow(box_length, dim);
  }

  /// Chemical potential with the momentum normalizer folded in:
  /// mu - (d / 2 beta) log(2 m pi / beta).
  double mu_tilde() const {
    return mu - 0.5 * dim / beta * std::log(2.0 * mass * M_PI / beta);
  }

  /// log of the Gaussian-well normalizer \int exp(-beta |q|^2/2) dq.
  double log_confinement_normalizer() const {
    return 0.5 * dim * std::log(2.0 * M_PI / beta);
  }

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("m must be > 0");
    if (!(indicator_mass > 0.0)) throw std::invalid_argument("m_n must be > 0");
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (boundary == Boundary::Periodic && !(box_length > 0.0))
      throw std::invalid_argument("L must be > 0");
  }
};

/// Extended state (q^N, p^N, n, p_n) with a variable particle count.
/// positions/momenta are N x d; N == floor(indicator) between steps.
struct PhaseState {
  ArrayXXd positions;           // N x d
  ArrayXXd momenta;             // N x d
  double indicator = 0.0;       // n >= 0
  double indicator_momentum = 0.0;  // p_n

  Index count() const { return positions.rows(); }

  static PhaseState empty(int dim) {
    PhaseState s;
    s.positions.resize(0, dim);
    s.momenta.resize(0, dim);
    s.indicator = 0.5;
    return s;
  }
};

}  // namespace gcdhmc
