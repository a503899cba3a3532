#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bethe_vqe {

using cplx = std::complex<double>;

enum class Boundary { Closed, Open };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& name);

/// Parameters of an XXZ chain. `h` and `h_prime` are only read for open chains.
struct ChainModel {
  Boundary boundary = Boundary::Closed;
  int length = 2;
  double delta = 1.0;
  double h = 0.0;
  double h_prime = 0.0;

  static ChainModel closed(int length, double delta);
  static ChainModel open(int length, double delta, double h, double h_prime);

  /// Throws std::invalid_argument when L < 2 or a parameter is not finite.
  void validate() const;
};

/// Ordered Bethe roots (momenta) together with the boundary they belong to.
struct RootVector {
  std::vector<cplx> roots;
  Boundary boundary = Boundary::Closed;

  std::size_t size() const { return roots.size(); }
  const cplx& operator[](std::size_t i) const { return roots[i]; }
  cplx& operator[](std::size_t i) { return roots[i]; }
};

// Error taxonomy. Everything derives from bethe_vqe::Error so callers can
// catch the family; argument validation uses std::invalid_argument.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NullStateError : Error {
  using Error::Error;
};
struct PoleError : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct SingularJacobian : Error {
  using Error::Error;
};
struct RepeatedRoots : Error {
  using Error::Error;
};
struct NonRealDrift : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct TemplateMismatch : Error {
  using Error::Error;
};
struct EvaluationFailure : Error {
  using Error::Error;
};

}  // namespace bethe_vqe
