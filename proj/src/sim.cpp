#include "bethe_vqe/sim.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>

namespace bethe_vqe {

namespace {

using Gate = std::array<cplx, 4>;  // row-major 2x2

void apply_gate(Eigen::VectorXcd& v, int length, int site, const Gate& g) {
  const auto bit = static_cast<Eigen::Index>(site_bit(length, site));
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    if (b & bit) continue;
    const cplx a0 = v[b];
    const cplx a1 = v[b | bit];
    v[b] = g[0] * a0 + g[1] * a1;
    v[b | bit] = g[2] * a0 + g[3] * a1;
  }
}

void check_dimensions(const QuantumState& state, int length) {
  if (state.length != length || state.amplitudes.size() != (Eigen::Index{1} << length))
    throw DimensionMismatch("state and operator sizes differ");
}

struct StringEstimate {
  double mean;
  double var_of_mean;
};

/// Shared estimator: identity strings exact, others sampled on substream
/// (seed, tag, index).
EstimateReport estimate(const QuantumState& state, const PauliHamiltonian& hamiltonian, const ShotConfig& cfg,
                        std::uint64_t tag) {
  check_dimensions(state, hamiltonian.length());
  if (cfg.shots_per_string < 1) throw std::invalid_argument("shots per string must be positive");
  EstimateReport report;
  report.seed = cfg.seed;
  double var = 0.0;
  const auto& terms = hamiltonian.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double a = terms[i].coefficient.real();
    if (terms[i].string.is_identity()) {
      report.value += a;
      continue;
    }
    SplitMix64 rng(derive_seed(cfg.seed, tag, i));
    const double m = sample_string(state, terms[i].string, cfg.shots_per_string, rng);
    const double x = static_cast<double>(cfg.shots_per_string);
    const double var_mean = cfg.shots_per_string > 1 ? std::max(0.0, 1.0 - m * m) / (x - 1.0) : 1.0;
    report.value += a * m;
    var += a * a * var_mean;
    report.total_shots += cfg.shots_per_string;
  }
  report.std_error = std::sqrt(var);
  return report;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(seed);
  std::uint64_t h = g();
  SplitMix64 ga(h ^ (a * 0xd1b54a32d192ed03ULL));
  h = ga();
  SplitMix64 gb(h ^ (b * 0x8cb92ba72f3d8dd7ULL));
  return gb();
}

double string_expectation(const QuantumState& state, const PauliString& string) {
  check_dimensions(state, string.length());
  const auto& v = state.amplitudes;
  cplx acc{0.0, 0.0};
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    if (v[b] == cplx{0.0, 0.0}) continue;
    const auto [target, phase] = string.act(static_cast<std::uint64_t>(b));
    acc += std::conj(v[static_cast<Eigen::Index>(target)]) * phase * v[b];
  }
  return acc.real();
}

double expval_exact(const QuantumState& state, const PauliHamiltonian& hamiltonian) {
  check_dimensions(state, hamiltonian.length());
  const auto& v = state.amplitudes;
  cplx acc{0.0, 0.0};
  for (const auto& term : hamiltonian.terms()) {
    cplx t{0.0, 0.0};
    for (Eigen::Index b = 0; b < v.size(); ++b) {
      if (v[b] == cplx{0.0, 0.0}) continue;
      const auto [target, phase] = term.string.act(static_cast<std::uint64_t>(b));
      t += std::conj(v[static_cast<Eigen::Index>(target)]) * phase * v[b];
    }
    acc += term.coefficient * t;
  }
  if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real())))
    throw Error("expectation value has a non-negligible imaginary part");
  return acc.real();
}

double variance_exact(const QuantumState& state, const PauliHamiltonian& hamiltonian) {
  check_dimensions(state, hamiltonian.length());
  const Eigen::VectorXcd hv = apply_hamiltonian(hamiltonian, state.amplitudes);
  const double h2 = hv.squaredNorm();
  const double h1 = state.amplitudes.dot(hv).real();  // Eigen dot conjugates the left side
  return std::max(0.0, h2 - h1 * h1);
}

double plus_probability(const QuantumState& state, const PauliString& string) {
  check_dimensions(state, string.length());
  const double r = 1.0 / std::sqrt(2.0);
  const Gate hadamard{cplx{r, 0}, cplx{r, 0}, cplx{r, 0}, cplx{-r, 0}};
  // H * S^dagger
  const Gate y_to_z{cplx{r, 0}, cplx{0, -r}, cplx{r, 0}, cplx{0, r}};

  const int length = string.length();
  Eigen::VectorXcd v = state.amplitudes;
  std::uint64_t support = 0;
  for (int n = 0; n < length; ++n) {
    switch (string.op(n)) {
      case PauliOp::I: continue;
      case PauliOp::X: apply_gate(v, length, n, hadamard); break;
      case PauliOp::Y: apply_gate(v, length, n, y_to_z); break;
      case PauliOp::Z: break;
    }
    support |= site_bit(length, n);
  }
  double plus = 0.0, total = 0.0;
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    const double p = std::norm(v[b]);
    total += p;
    if (std::popcount(static_cast<std::uint64_t>(b) & support) % 2 == 0) plus += p;
  }
  return std::clamp(plus / total, 0.0, 1.0);
}

double sample_string(const QuantumState& state, const PauliString& string, long long shots, SplitMix64& rng) {
  if (string.is_identity()) throw std::invalid_argument("identity string is not sampled");
  if (shots < 1) throw std::invalid_argument("shots must be positive");
  const double p = plus_probability(state, string);
  std::binomial_distribution<long long> draw(shots, p);
  const long long plus = draw(rng);
  return static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
}

EstimateReport expval_shots(const QuantumState& state, const PauliHamiltonian& hamiltonian, const ShotConfig& cfg) {
  return estimate(state, hamiltonian, cfg, 0);
}

EstimateReport variance_shots(const QuantumState& state, const PauliHamiltonian& hamiltonian,
                              const PauliHamiltonian& squared, const ShotConfig& cfg) {
  const auto e = estimate(state, hamiltonian, cfg, 0);
  const auto e2 = estimate(state, squared, cfg, 1);
  EstimateReport report;
  report.value = e2.value - e.value * e.value;
  report.std_error = std::sqrt(e2.std_error * e2.std_error + 4.0 * e.value * e.value * e.std_error * e.std_error);
  report.total_shots = e.total_shots + e2.total_shots;
  report.seed = cfg.seed;
  return report;
}

EstimateReport variance_shots(const QuantumState& state, const PauliHamiltonian& hamiltonian, const ShotConfig& cfg) {
  return variance_shots(state, hamiltonian, square_hamiltonian(hamiltonian), cfg);
}

}  // namespace bethe_vqe
