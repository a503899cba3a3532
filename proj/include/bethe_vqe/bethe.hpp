#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bethe_vqe/core.hpp"

namespace bethe_vqe {

/// Amplitude vector over the full 2^L basis; support is confined to one
/// down-spin sector.
struct QuantumState {
  int length = 0;
  int down_spins = 0;
  Eigen::VectorXcd amplitudes;
  bool normalized = false;
  /// Largest |f(w)| before normalization (diagnostic).
  double prenorm_max = 0.0;

  /// Amplitudes restricted to sector_basis(length, down_spins).
  Eigen::VectorXcd sector_amplitudes() const;
};

/// s(k, k') = 1 - 2 Delta e^{ik'} + e^{i(k+k')}
cplx kernel_s(cplx k, cplx k_prime, double delta);
/// B(k, k') = s(k, k') s(k', -k)
cplx kernel_B(cplx k, cplx k_prime, double delta);
/// alpha(k) = 1 + (h - Delta) e^{-ik}
cplx boundary_alpha(cplx k, double delta, double h);
/// beta(k) = [1 + (h' - Delta) e^{-ik}] e^{i(L+1)k}
cplx boundary_beta(cplx k, double delta, double h_prime, int length);

/// Coordinate Bethe ansatz wavefunction f(w, k) for the periodic chain.
/// `w` is a basis index; its popcount must equal the number of roots.
cplx amplitude_closed(int length, std::uint64_t w, const RootVector& roots, double delta);

/// Wavefunction for the open chain (sum over permutations and reflections).
cplx amplitude_open(std::uint64_t w, const RootVector& roots, const ChainModel& model);

/// Relative cancellation level below which a trial state counts as null.
inline constexpr double kNullStateTolerance = 1e-10;

/// Normalized Bethe state |B(k)>. The global phase is fixed so the first
/// nonzero sector amplitude is real and positive. An empty root vector
/// gives the reference state |0...0>.
///
/// Throws NullStateError when the antisymmetrized sum cancels (for instance
/// at repeated roots).
QuantumState bethe_state(const ChainModel& model, const RootVector& roots);

/// |0...0> for down_spins == 0, |1...1> for down_spins == length.
QuantumState reference_state(int length, int down_spins);

cplx energy_closed(const RootVector& roots, int length, int down_spins, double delta);
cplx energy_open(const RootVector& roots, const ChainModel& model, int down_spins);
/// Dispatches on the model boundary with M = roots.size().
cplx bethe_energy(const ChainModel& model, const RootVector& roots);

/// eta with Delta = cosh(eta); imaginary for |Delta| < 1.
cplx anisotropy_eta(double delta);

/// Rapidity u with e^{ik} = sinh(u + eta/2) / sinh(u - eta/2).
cplx u_from_k(cplx k, double delta);
/// Inverse of u_from_k, k reduced to Re k in (-pi, pi].
cplx k_from_u(cplx u, double delta);

}  // namespace bethe_vqe
