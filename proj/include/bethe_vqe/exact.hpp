#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bethe_vqe/bethe.hpp"
#include "bethe_vqe/model.hpp"

namespace bethe_vqe {

inline constexpr std::uint64_t kSectorDimensionGuard = 10000;

struct SectorSpectrum {
  int length = 0;
  int down_spins = 0;
  /// Ascending.
  std::vector<double> eigenvalues;
  /// Columns in sector_basis order, present when requested.
  std::optional<Eigen::MatrixXcd> eigenvectors;
};

/// H restricted to the fixed-magnetization sector with `down_spins` down spins.
Eigen::MatrixXcd sector_matrix(const ChainModel& model, int down_spins);

SectorSpectrum eigenvalues(const ChainModel& model, int down_spins, bool with_vectors = false);

/// Lowest eigenvalue within the sector.
double sector_ground_energy(const ChainModel& model, int down_spins);

/// ||H v - <v|H|v> v||_2 for a normalized state.
double eigen_residual(const QuantumState& state, const PauliHamiltonian& hamiltonian);

}  // namespace bethe_vqe
