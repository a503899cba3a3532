#include "bethe_vqe/exact.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace bethe_vqe {

Eigen::MatrixXcd sector_matrix(const ChainModel& model, int down_spins) {
  model.validate();
  if (down_spins < 0 || down_spins > model.length) throw std::invalid_argument("down-spin count out of range");
  if (binomial(model.length, down_spins) > kSectorDimensionGuard)
    throw std::invalid_argument("sector dimension exceeds the dense guard");

  const auto hamiltonian = build_hamiltonian(model);
  const auto basis = sector_basis(model.length, down_spins);
  std::unordered_map<std::uint64_t, Eigen::Index> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<Eigen::Index>(i));

  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    // Single strings (XX, YY) leave the sector; their sum must not.
    std::unordered_map<std::uint64_t, cplx> leaked;
    for (const auto& term : hamiltonian.terms()) {
      const auto [target, phase] = term.string.act(basis[static_cast<std::size_t>(col)]);
      const auto it = index.find(target);
      if (it == index.end()) {
        leaked[target] += term.coefficient * phase;
      } else {
        m(it->second, col) += term.coefficient * phase;
      }
    }
    for (const auto& [target, amplitude] : leaked)
      if (std::abs(amplitude) > 1e-12) throw Error("Hamiltonian does not conserve magnetization");
  }
  return m;
}

SectorSpectrum eigenvalues(const ChainModel& model, int down_spins, bool with_vectors) {
  const Eigen::MatrixXcd m = sector_matrix(model, down_spins);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");

  const auto& values = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });

  SectorSpectrum spectrum;
  spectrum.length = model.length;
  spectrum.down_spins = down_spins;
  for (auto i : order) spectrum.eigenvalues.push_back(values[i]);
  if (with_vectors) {
    Eigen::MatrixXcd vectors(m.rows(), m.cols());
    for (std::size_t c = 0; c < order.size(); ++c)
      vectors.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(order[c]);
    spectrum.eigenvectors = std::move(vectors);
  }
  return spectrum;
}

double sector_ground_energy(const ChainModel& model, int down_spins) {
  return eigenvalues(model, down_spins).eigenvalues.front();
}

double eigen_residual(const QuantumState& state, const PauliHamiltonian& hamiltonian) {
  if (state.length != hamiltonian.length() || state.amplitudes.size() != (Eigen::Index{1} << hamiltonian.length()))
    throw DimensionMismatch("state and Hamiltonian sizes differ");
  const Eigen::VectorXcd hv = apply_hamiltonian(hamiltonian, state.amplitudes);
  const cplx e = state.amplitudes.dot(hv);
  return (hv - e * state.amplitudes).norm();
}

}  // namespace bethe_vqe
