#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bethe_vqe/core.hpp"

namespace bethe_vqe {

// Basis convention used everywhere: basis index b encodes a bitstring with
// chain site 1 as the most significant bit, and bit value 1 is a down spin.
inline std::uint64_t site_bit(int length, int site) {
  return std::uint64_t{1} << (length - 1 - site);
}

enum class PauliOp : std::uint8_t { I, X, Y, Z };

/// Tensor product of single-site Paulis. Site n (0-based) is chain site n+1.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int length);
  static PauliString from_string(std::string_view ops);

  int length() const { return length_; }
  PauliOp op(int site) const;
  void set(int site, PauliOp op);
  bool is_identity() const { return x_bits_ == 0 && z_bits_ == 0; }

  /// Bits where the operator flips the spin (X or Y).
  std::uint64_t x_bits() const { return x_bits_; }
  /// Bits where the operator contributes a sign (Z or Y).
  std::uint64_t z_bits() const { return z_bits_; }

  /// P|b> = phase * |target>.
  std::pair<std::uint64_t, cplx> act(std::uint64_t basis_index) const;

  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  int length_ = 0;
  std::uint64_t x_bits_ = 0;
  std::uint64_t z_bits_ = 0;
};

/// Site-wise product a*b = phase * string.
std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b);

struct PauliTerm {
  cplx coefficient;
  PauliString string;
};

/// Sum of Pauli strings with like strings merged.
class PauliHamiltonian {
 public:
  explicit PauliHamiltonian(int length) : length_(length) {}

  int length() const { return length_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(cplx coefficient, const PauliString& string);
  void add(cplx coefficient, std::string_view ops) { add(coefficient, PauliString::from_string(ops)); }

  /// Drops terms whose coefficient magnitude is below `threshold`.
  void prune(double threshold);

 private:
  int length_;
  std::vector<PauliTerm> terms_;
};

PauliHamiltonian build_closed_hamiltonian(int length, double delta);
PauliHamiltonian build_open_hamiltonian(int length, double delta, double h, double h_prime);
PauliHamiltonian build_hamiltonian(const ChainModel& model);

inline constexpr int kDenseLengthGuard = 14;

/// Kronecker-product expansion of the Pauli sum.
Eigen::MatrixXcd to_dense_matrix(const PauliHamiltonian& hamiltonian);

inline constexpr double kPauliPruneThreshold = 1e-12;

/// H*H through the Pauli product algebra.
PauliHamiltonian square_hamiltonian(const PauliHamiltonian& hamiltonian);

/// H|v> by bit-flip/phase action of each string.
Eigen::VectorXcd apply_hamiltonian(const PauliHamiltonian& hamiltonian, const Eigen::VectorXcd& v);

/// Bitstrings with exactly `down_spins` ones, increasing.
std::vector<std::uint64_t> sector_basis(int length, int down_spins);

std::uint64_t binomial(int n, int k);

}  // namespace bethe_vqe
