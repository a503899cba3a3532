#include "bethe_vqe/model.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace bethe_vqe {

std::string to_string(Boundary b) { return b == Boundary::Closed ? "closed" : "open"; }

Boundary parse_boundary(const std::string& name) {
  if (name == "closed") return Boundary::Closed;
  if (name == "open") return Boundary::Open;
  throw std::invalid_argument("unknown boundary '" + name + "' (expected closed|open)");
}

ChainModel ChainModel::closed(int length, double delta) {
  ChainModel m{Boundary::Closed, length, delta, 0.0, 0.0};
  m.validate();
  return m;
}

ChainModel ChainModel::open(int length, double delta, double h, double h_prime) {
  ChainModel m{Boundary::Open, length, delta, h, h_prime};
  m.validate();
  return m;
}

void ChainModel::validate() const {
  if (length < 2) throw std::invalid_argument("chain length must be at least 2");
  if (!std::isfinite(delta)) throw std::invalid_argument("anisotropy must be finite");
  if (boundary == Boundary::Open && (!std::isfinite(h) || !std::isfinite(h_prime)))
    throw std::invalid_argument("boundary fields must be finite");
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(int length) : length_(length) {
  if (length < 1 || length > 63) throw std::invalid_argument("Pauli string length out of range");
}

PauliString PauliString::from_string(std::string_view ops) {
  PauliString p(static_cast<int>(ops.size()));
  for (int n = 0; n < p.length_; ++n) {
    switch (ops[n]) {
      case 'I': break;
      case 'X': p.set(n, PauliOp::X); break;
      case 'Y': p.set(n, PauliOp::Y); break;
      case 'Z': p.set(n, PauliOp::Z); break;
      default: throw std::invalid_argument("invalid Pauli letter in '" + std::string(ops) + "'");
    }
  }
  return p;
}

PauliOp PauliString::op(int site) const {
  const auto bit = site_bit(length_, site);
  const bool x = x_bits_ & bit;
  const bool z = z_bits_ & bit;
  if (x && z) return PauliOp::Y;
  if (x) return PauliOp::X;
  if (z) return PauliOp::Z;
  return PauliOp::I;
}

void PauliString::set(int site, PauliOp op) {
  if (site < 0 || site >= length_) throw std::out_of_range("Pauli site out of range");
  const auto bit = site_bit(length_, site);
  x_bits_ &= ~bit;
  z_bits_ &= ~bit;
  if (op == PauliOp::X || op == PauliOp::Y) x_bits_ |= bit;
  if (op == PauliOp::Z || op == PauliOp::Y) z_bits_ |= bit;
}

std::pair<std::uint64_t, cplx> PauliString::act(std::uint64_t basis_index) const {
  // Y = i X Z: Y|0> = i|1>, Y|1> = -i|0>.
  static constexpr std::array<cplx, 4> kPowI{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
  const int n_y = std::popcount(x_bits_ & z_bits_);
  const int n_minus = std::popcount(basis_index & z_bits_);
  cplx phase = kPowI[n_y % 4];
  if (n_minus % 2) phase = -phase;
  return {basis_index ^ x_bits_, phase};
}

std::string PauliString::to_string() const {
  std::string s(length_, 'I');
  for (int n = 0; n < length_; ++n) s[n] = "IXYZ"[static_cast<int>(op(n))];
  return s;
}

std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b) {
  if (a.length() != b.length()) throw DimensionMismatch("Pauli product of unequal lengths");
  using enum PauliOp;
  const cplx i{0, 1};
  PauliString out(a.length());
  cplx phase{1, 0};
  for (int n = 0; n < a.length(); ++n) {
    const PauliOp p = a.op(n);
    const PauliOp q = b.op(n);
    if (p == I) {
      out.set(n, q);
    } else if (q == I) {
      out.set(n, p);
    } else if (p == q) {
      // identity
    } else if (p == X && q == Y) {
      out.set(n, Z), phase *= i;
    } else if (p == Y && q == X) {
      out.set(n, Z), phase *= -i;
    } else if (p == Y && q == Z) {
      out.set(n, X), phase *= i;
    } else if (p == Z && q == Y) {
      out.set(n, X), phase *= -i;
    } else if (p == Z && q == X) {
      out.set(n, Y), phase *= i;
    } else {  // X Z
      out.set(n, Y), phase *= -i;
    }
  }
  return {phase, out};
}

// ---------------------------------------------------------------------------
// PauliHamiltonian

void PauliHamiltonian::add(cplx coefficient, const PauliString& string) {
  if (string.length() != length_) throw DimensionMismatch("Pauli string length does not match Hamiltonian");
  for (auto& term : terms_) {
    if (term.string == string) {
      term.coefficient += coefficient;
      return;
    }
  }
  terms_.push_back({coefficient, string});
}

void PauliHamiltonian::prune(double threshold) {
  std::erase_if(terms_, [threshold](const PauliTerm& t) { return std::abs(t.coefficient) < threshold; });
}

namespace {

void add_bond(PauliHamiltonian& hamiltonian, int a, int b, double delta) {
  const int length = hamiltonian.length();
  for (const auto& [op, weight] : {std::pair{PauliOp::X, 0.25}, std::pair{PauliOp::Y, 0.25},
                                  std::pair{PauliOp::Z, 0.25 * delta}}) {
    PauliString p(length);
    p.set(a, op);
    p.set(b, op);
    hamiltonian.add(weight, p);
  }
}

}  // namespace

PauliHamiltonian build_closed_hamiltonian(int length, double delta) {
  ChainModel::closed(length, delta);
  PauliHamiltonian hamiltonian(length);
  for (int n = 0; n < length; ++n) add_bond(hamiltonian, n, (n + 1) % length, delta);
  return hamiltonian;
}

PauliHamiltonian build_open_hamiltonian(int length, double delta, double h, double h_prime) {
  ChainModel::open(length, delta, h, h_prime);
  PauliHamiltonian hamiltonian(length);
  for (int n = 0; n + 1 < length; ++n) add_bond(hamiltonian, n, n + 1, delta);
  PauliString left(length), right(length);
  left.set(0, PauliOp::Z);
  right.set(length - 1, PauliOp::Z);
  hamiltonian.add(0.25 * h, left);
  hamiltonian.add(0.25 * h_prime, right);
  return hamiltonian;
}

PauliHamiltonian build_hamiltonian(const ChainModel& model) {
  return model.boundary == Boundary::Closed
             ? build_closed_hamiltonian(model.length, model.delta)
             : build_open_hamiltonian(model.length, model.delta, model.h, model.h_prime);
}

Eigen::MatrixXcd to_dense_matrix(const PauliHamiltonian& hamiltonian) {
  const int length = hamiltonian.length();
  if (length > kDenseLengthGuard) throw std::invalid_argument("dense matrix guard: L too large");

  // 2x2 factors indexed [row][col]; each column holds exactly one nonzero.
  using Mat2 = std::array<std::array<cplx, 2>, 2>;
  const cplx i{0, 1};
  const std::array<Mat2, 4> sigma{
      Mat2{{{1, 0}, {0, 1}}},
      Mat2{{{0, 1}, {1, 0}}},
      Mat2{{{0, -i}, {i, 0}}},
      Mat2{{{1, 0}, {0, -1}}},
  };

  const Eigen::Index dim = Eigen::Index{1} << length;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : hamiltonian.terms()) {
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::Index row = 0;
      cplx entry = term.coefficient;
      for (int n = 0; n < length; ++n) {
        const auto& s = sigma[static_cast<int>(term.string.op(n))];
        const int c = (col >> (length - 1 - n)) & 1;
        const int r = s[0][c] != cplx{0, 0} ? 0 : 1;
        entry *= s[r][c];
        row = (row << 1) | r;
      }
      m(row, col) += entry;
    }
  }
  return m;
}

PauliHamiltonian square_hamiltonian(const PauliHamiltonian& hamiltonian) {
  std::map<PauliString, cplx> acc;
  for (const auto& a : hamiltonian.terms()) {
    for (const auto& b : hamiltonian.terms()) {
      auto [phase, string] = multiply(a.string, b.string);
      acc[string] += phase * a.coefficient * b.coefficient;
    }
  }
  PauliHamiltonian out(hamiltonian.length());
  for (const auto& [string, coefficient] : acc) {
    if (std::abs(coefficient) < kPauliPruneThreshold) continue;
    // Anticommuting cross terms cancel pairwise; what survives of a Hermitian
    // square is real up to rounding.
    out.add(cplx{coefficient.real(), std::abs(coefficient.imag()) < kPauliPruneThreshold ? 0.0 : coefficient.imag()},
            string);
  }
  return out;
}

Eigen::VectorXcd apply_hamiltonian(const PauliHamiltonian& hamiltonian, const Eigen::VectorXcd& v) {
  const Eigen::Index dim = Eigen::Index{1} << hamiltonian.length();
  if (v.size() != dim) throw DimensionMismatch("state dimension does not match Hamiltonian");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (const auto& term : hamiltonian.terms()) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (v[b] == cplx{0, 0}) continue;
      const auto [target, phase] = term.string.act(static_cast<std::uint64_t>(b));
      out[static_cast<Eigen::Index>(target)] += term.coefficient * phase * v[b];
    }
  }
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
  return r;
}

std::vector<std::uint64_t> sector_basis(int length, int down_spins) {
  if (length < 1 || length > 30) throw std::invalid_argument("sector basis length out of range");
  if (down_spins < 0 || down_spins > length) throw std::invalid_argument("down-spin count out of range");
  std::vector<std::uint64_t> basis;
  basis.reserve(binomial(length, down_spins));
  const std::uint64_t dim = std::uint64_t{1} << length;
  for (std::uint64_t b = 0; b < dim; ++b)
    if (std::popcount(b) == down_spins) basis.push_back(b);
  return basis;
}

}  // namespace bethe_vqe
