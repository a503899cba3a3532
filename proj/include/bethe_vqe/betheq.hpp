#pragma once

#include <vector>

#include "bethe_vqe/core.hpp"

namespace bethe_vqe {

/// Denominator-free Bethe-equation residuals, one per root.
struct ResidualVector {
  std::vector<cplx> values;

  double norm() const;
  double max_abs() const;
};

/// r_j = e^{i k_j L} prod_{l!=j} s(k_j,k_l) - prod_{l!=j} (-s(k_l,k_j))
ResidualVector residual_closed(const RootVector& roots, int length, double delta);

/// r_j = alpha(k_j)beta(k_j) prod B(k_j,k_l) - alpha(-k_j)beta(-k_j) prod B(-k_j,k_l)
ResidualVector residual_open(const RootVector& roots, const ChainModel& model);

ResidualVector residual(const ChainModel& model, const RootVector& roots);

/// Residuals divided by the magnitude of the two cleared products, so that
/// |r_j| is a relative mismatch independent of the e^{(L+1)|Im k|} growth.
ResidualVector scaled_residual(const ChainModel& model, const RootVector& roots);

struct NewtonOptions {
  double fd_step = 1e-6;
  double tolerance = 1e-12;
  int max_iterations = 200;
  int max_backtracks = 30;
  /// Stagnation below this scaled residual counts as converged.
  double floor_tolerance = 1e-8;
};

/// Damped Newton iteration on the real and imaginary parts of the roots.
/// Returns canonicalized roots. Throws NoConvergence, SingularJacobian or
/// RepeatedRoots.
RootVector newton_solve(const ChainModel& model, int down_spins, const RootVector& initial,
                        const NewtonOptions& options = {});

struct LogIterationOptions {
  double tolerance = 1e-12;
  int max_sweeps = 10000;
};

/// Fixed-point iteration of L k_j = 2 pi I_j + sum_{l!=j} theta(k_j, k_l)
/// for all-real closed-chain roots. Starts from k_j = 2 pi I_j / L.
RootVector iterate_log_closed(int length, int down_spins, double delta, const std::vector<double>& quantum_numbers,
                              const LogIterationOptions& options = {});

/// Reduces every root to the fundamental strip and sorts by (Re, Im).
/// Closed: Re k in (-pi, pi]. Open: Re k in [0, pi], with Im k >= 0 on the
/// edges Re k = 0 and Re k = pi (within 1e-4 of the edge, so a root may
/// overshoot the strip by that much).
RootVector canonicalize(const RootVector& roots);
cplx canonical_root(cplx k, Boundary boundary);

struct RootClassification {
  bool repeated_roots = false;
  double max_residual = 0.0;
  bool is_canonical = false;
};

inline constexpr double kRepeatedRootTolerance = 1e-8;

RootClassification classify(const RootVector& roots, const ChainModel& model);

/// Representative of `k` (under 2pi shifts, and reflection for open chains)
/// closest to `target`.
cplx nearest_equivalent(cplx k, cplx target, Boundary boundary);

/// Reorders and gauge-shifts `found` to line up with `reference`, choosing
/// the permutation with the smallest maximal component deviation.
std::vector<cplx> align_roots(const RootVector& found, const std::vector<cplx>& reference);

/// max over roots of max(|dRe|, |dIm|) after alignment.
double max_component_error(const RootVector& found, const std::vector<cplx>& reference);

/// ||k - k'|| / ||k|| after alignment, with ||k|| = sqrt(k . k*).
double relative_root_error(const RootVector& found, const std::vector<cplx>& reference);

}  // namespace bethe_vqe
