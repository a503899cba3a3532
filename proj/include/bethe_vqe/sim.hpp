#pragma once

#include <cstdint>
#include <limits>

#include "bethe_vqe/bethe.hpp"
#include "bethe_vqe/model.hpp"

namespace bethe_vqe {

/// SplitMix64; small, fast and trivially seedable per substream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of the substream labelled (a, b) under `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

struct ShotConfig {
  /// x: shots spent on every non-identity Pauli string.
  long long shots_per_string = 10000;
  std::uint64_t seed = 0;
};

struct EstimateReport {
  double value = 0.0;
  double std_error = 0.0;
  long long total_shots = 0;
  std::uint64_t seed = 0;
};

double expval_exact(const QuantumState& state, const PauliHamiltonian& hamiltonian);
/// <H^2> - <H>^2, clipped at zero.
double variance_exact(const QuantumState& state, const PauliHamiltonian& hamiltonian);

/// <v|P|v> for a single string.
double string_expectation(const QuantumState& state, const PauliString& string);

/// Probability of the +1 outcome when measuring `string`, obtained by
/// rotating each X/Y site into the Z basis.
double plus_probability(const QuantumState& state, const PauliString& string);

/// Mean of `shots` simulated +-1 measurements of a non-identity string.
double sample_string(const QuantumState& state, const PauliString& string, long long shots, SplitMix64& rng);

EstimateReport expval_shots(const QuantumState& state, const PauliHamiltonian& hamiltonian, const ShotConfig& cfg);
EstimateReport variance_shots(const QuantumState& state, const PauliHamiltonian& hamiltonian, const ShotConfig& cfg);
/// Same as above with H^2 supplied by the caller.
EstimateReport variance_shots(const QuantumState& state, const PauliHamiltonian& hamiltonian,
                              const PauliHamiltonian& squared, const ShotConfig& cfg);

}  // namespace bethe_vqe
