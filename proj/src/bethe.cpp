#include "bethe_vqe/bethe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "bethe_vqe/model.hpp"

namespace bethe_vqe {

namespace {

constexpr cplx kI{0.0, 1.0};

/// One summand of f(w, k): coefficient * exp(i sum_j momenta[j] x_j).
struct PlaneWave {
  cplx coefficient;
  std::vector<cplx> momenta;
};

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t a = 0; a < perm.size(); ++a)
    for (std::size_t b = a + 1; b < perm.size(); ++b)
      if (perm[a] > perm[b]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

std::vector<PlaneWave> closed_expansion(const RootVector& roots, double delta) {
  const int m = static_cast<int>(roots.size());
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<PlaneWave> waves;
  do {
    PlaneWave wave{static_cast<double>(permutation_sign(perm)), {}};
    wave.momenta.reserve(m);
    for (int j = 0; j < m; ++j) wave.momenta.push_back(roots[perm[j]]);
    for (int j = 0; j < m; ++j)
      for (int l = j + 1; l < m; ++l) wave.coefficient *= kernel_s(wave.momenta[l], wave.momenta[j], delta);
    waves.push_back(std::move(wave));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return waves;
}

std::vector<PlaneWave> open_expansion(const RootVector& roots, const ChainModel& model) {
  const int m = static_cast<int>(roots.size());
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<PlaneWave> waves;
  do {
    const int perm_sign = permutation_sign(perm);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      PlaneWave wave{static_cast<double>(perm_sign), {}};
      wave.momenta.reserve(m);
      for (int j = 0; j < m; ++j) {
        const bool flip = (mask >> j) & 1u;
        wave.momenta.push_back(flip ? -roots[perm[j]] : roots[perm[j]]);
        if (flip) wave.coefficient = -wave.coefficient;
      }
      const auto& q = wave.momenta;
      for (int j = 0; j < m; ++j) wave.coefficient *= boundary_beta(-q[j], model.delta, model.h_prime, model.length);
      for (int j = 0; j < m; ++j)
        for (int l = j + 1; l < m; ++l)
          wave.coefficient *= kernel_B(-q[j], q[l], model.delta) * std::exp(-kI * q[l]);
      waves.push_back(std::move(wave));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return waves;
}

std::vector<int> down_positions(int length, std::uint64_t w) {
  std::vector<int> x;
  for (int n = 0; n < length; ++n)
    if (w & site_bit(length, n)) x.push_back(n + 1);
  return x;
}

struct Evaluated {
  cplx value;
  double magnitude_sum;  // sum of |summands|, the cancellation scale
};

Evaluated evaluate(const std::vector<PlaneWave>& waves, const std::vector<int>& x) {
  Evaluated out{{0.0, 0.0}, 0.0};
  for (const auto& wave : waves) {
    cplx phase{0.0, 0.0};
    for (std::size_t j = 0; j < x.size(); ++j) phase += wave.momenta[j] * static_cast<double>(x[j]);
    const cplx term = wave.coefficient * std::exp(kI * phase);
    out.value += term;
    out.magnitude_sum += std::abs(term);
  }
  return out;
}

void check_popcount(std::uint64_t w, const RootVector& roots) {
  if (std::popcount(w) != static_cast<int>(roots.size()))
    throw std::invalid_argument("bitstring down-spin count does not match number of roots");
}

void check_finite(const RootVector& roots) {
  for (const auto& k : roots.roots)
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) throw std::invalid_argument("non-finite Bethe root");
}

}  // namespace

Eigen::VectorXcd QuantumState::sector_amplitudes() const {
  const auto basis = sector_basis(length, down_spins);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) out[static_cast<Eigen::Index>(i)] = amplitudes[static_cast<Eigen::Index>(basis[i])];
  return out;
}

cplx kernel_s(cplx k, cplx k_prime, double delta) {
  return 1.0 - 2.0 * delta * std::exp(kI * k_prime) + std::exp(kI * (k + k_prime));
}

cplx kernel_B(cplx k, cplx k_prime, double delta) { return kernel_s(k, k_prime, delta) * kernel_s(k_prime, -k, delta); }

cplx boundary_alpha(cplx k, double delta, double h) { return 1.0 + (h - delta) * std::exp(-kI * k); }

cplx boundary_beta(cplx k, double delta, double h_prime, int length) {
  return (1.0 + (h_prime - delta) * std::exp(-kI * k)) * std::exp(kI * static_cast<double>(length + 1) * k);
}

cplx amplitude_closed(int length, std::uint64_t w, const RootVector& roots, double delta) {
  check_popcount(w, roots);
  return evaluate(closed_expansion(roots, delta), down_positions(length, w)).value;
}

cplx amplitude_open(std::uint64_t w, const RootVector& roots, const ChainModel& model) {
  check_popcount(w, roots);
  return evaluate(open_expansion(roots, model), down_positions(model.length, w)).value;
}

QuantumState reference_state(int length, int down_spins) {
  if (down_spins != 0 && down_spins != length) throw std::invalid_argument("reference state needs M = 0 or M = L");
  QuantumState state;
  state.length = length;
  state.down_spins = down_spins;
  state.amplitudes = Eigen::VectorXcd::Zero(Eigen::Index{1} << length);
  state.amplitudes[down_spins == 0 ? 0 : (Eigen::Index{1} << length) - 1] = 1.0;
  state.normalized = true;
  state.prenorm_max = 1.0;
  return state;
}

QuantumState bethe_state(const ChainModel& model, const RootVector& roots) {
  model.validate();
  check_finite(roots);
  const int length = model.length;
  const int m = static_cast<int>(roots.size());
  if (m > length) throw std::invalid_argument("more Bethe roots than sites");
  if (m == 0 || m == length) {
    // One-dimensional sector: after normalization and phase fixing the
    // state is the (dual) reference state whenever it is nonzero.
    if (m == length && m > 0) {
      const auto w = (std::uint64_t{1} << length) - 1;
      const cplx f = model.boundary == Boundary::Closed ? amplitude_closed(length, w, roots, model.delta)
                                                         : amplitude_open(w, roots, model);
      if (std::abs(f) == 0.0) throw NullStateError("Bethe state vanishes identically");
    }
    return reference_state(length, m);
  }

  const auto waves = model.boundary == Boundary::Closed ? closed_expansion(roots, model.delta)
                                                        : open_expansion(roots, model);
  const auto basis = sector_basis(length, m);

  std::vector<cplx> f(basis.size());
  double scale = 0.0;
  double max_abs = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto e = evaluate(waves, down_positions(length, basis[i]));
    f[i] = e.value;
    scale = std::max(scale, e.magnitude_sum);
    max_abs = std::max(max_abs, std::abs(e.value));
  }
  if (!std::isfinite(scale) || !std::isfinite(max_abs)) throw NullStateError("Bethe amplitudes overflowed");
  if (max_abs == 0.0 || max_abs < kNullStateTolerance * std::max(scale, 1e-300))
    throw NullStateError("Bethe state vanishes (amplitudes cancel; repeated roots?)");

  // Rescale by the largest amplitude before taking the norm.
  double norm_sq = 0.0;
  for (auto& v : f) {
    v /= max_abs;
    norm_sq += std::norm(v);
  }
  const double norm = std::sqrt(norm_sq);

  cplx phase{1.0, 0.0};
  for (const auto& v : f) {
    if (std::abs(v) / norm > 1e-12) {
      phase = std::conj(v) / std::abs(v);
      break;
    }
  }

  QuantumState state;
  state.length = length;
  state.down_spins = m;
  state.amplitudes = Eigen::VectorXcd::Zero(Eigen::Index{1} << length);
  for (std::size_t i = 0; i < basis.size(); ++i)
    state.amplitudes[static_cast<Eigen::Index>(basis[i])] = f[i] * phase / norm;
  state.normalized = true;
  state.prenorm_max = max_abs;
  return state;
}

cplx energy_closed(const RootVector& roots, int length, int down_spins, double delta) {
  cplx e{(0.25 * length - down_spins) * delta, 0.0};
  for (const auto& k : roots.roots) e += std::cos(k);
  return e;
}

cplx energy_open(const RootVector& roots, const ChainModel& model, int down_spins) {
  cplx e{(0.25 * (model.length - 1) - down_spins) * model.delta + 0.25 * (model.h + model.h_prime), 0.0};
  for (const auto& k : roots.roots) e += std::cos(k);
  return e;
}

cplx bethe_energy(const ChainModel& model, const RootVector& roots) {
  const int m = static_cast<int>(roots.size());
  return model.boundary == Boundary::Closed ? energy_closed(roots, model.length, m, model.delta)
                                            : energy_open(roots, model, m);
}

cplx anisotropy_eta(double delta) { return std::acosh(cplx{delta, 0.0}); }

cplx u_from_k(cplx k, double delta) {
  const cplx a = 0.5 * anisotropy_eta(delta);
  const cplx z = std::exp(kI * k);
  const cplx num = z * std::exp(a) - std::exp(-a);
  const cplx den = z * std::exp(-a) - std::exp(a);
  const double scale = std::abs(z) + std::abs(std::exp(a)) + std::abs(std::exp(-a));
  if (std::abs(den) < 1e-14 * scale || std::abs(num) < 1e-14 * scale)
    throw PoleError("rapidity is infinite for this momentum");
  return 0.5 * std::log(num / den);
}

cplx k_from_u(cplx u, double delta) {
  const cplx a = 0.5 * anisotropy_eta(delta);
  const cplx num = std::sinh(u + a);
  const cplx den = std::sinh(u - a);
  if (std::abs(den) < 1e-14 * (1.0 + std::abs(num))) throw PoleError("sinh(u - eta/2) vanishes");
  return -kI * std::log(num / den);
}

}  // namespace bethe_vqe
