#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bethe_vqe/core.hpp"
#include "bethe_vqe/sim.hpp"

namespace bethe_vqe {

enum class RootKind { Real, ConjugatePair, FreeComplex };

/// Real-parameter structure of a root vector. Mini-grammar: comma list of
/// r (real root), p (conjugate pair a +- bi), c (free complex a + bi).
struct RootTemplate {
  std::vector<RootKind> entries;

  static RootTemplate parse(const std::string& spec);
  std::string to_string() const;
  int root_count() const;
  int parameter_count() const;
};

std::vector<double> pack(const RootVector& roots, const RootTemplate& tmpl);
RootVector unpack(std::span<const double> theta, const RootTemplate& tmpl, Boundary boundary);

struct OptimizerConfig {
  int max_iterations = 1000;
  double initial_simplex_scale = 0.3;
  double xtol = 1e-6;
  double ftol = 1e-9;
  /// Stochastic objectives: re-sample every vertex each iteration and keep the
  /// running mean, and rebuild a collapsed simplex around the best vertex when
  /// its values still disagree by more than ftol. Sampled VQE runs turn both on.
  bool resample = false;
  bool restart_on_collapse = false;
};

struct TracePoint {
  int iteration;
  double value;
};

struct MinimizeResult {
  std::vector<double> theta;
  double value = 0.0;
  std::vector<TracePoint> trace;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead simplex descent (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). Always returns the best vertex found.
MinimizeResult minimize(const Objective& objective, std::vector<double> theta0, const OptimizerConfig& cfg = {});

/// Exact statevector evaluation, or shot-based estimation.
struct Evaluator {
  std::optional<ShotConfig> shots;

  static Evaluator exact() { return {}; }
  static Evaluator sampled(long long shots_per_string, std::uint64_t seed = 0) {
    return {ShotConfig{shots_per_string, seed}};
  }
  /// "exact" or "shots:<x>".
  static Evaluator parse(const std::string& spec);

  bool is_exact() const { return !shots.has_value(); }
  std::string to_string() const;
};

enum class VqeObjective { Energy, Variance };

inline constexpr double kNullStatePenalty = 1e6;

/// theta -> <H> or Var(H) on the Bethe trial state. Null states map to
/// kNullStatePenalty. Shot-based evaluations draw a fresh substream per call,
/// derived from `seed` and the call count.
Objective make_objective(const ChainModel& model, const RootTemplate& tmpl, const Evaluator& evaluator,
                         VqeObjective kind, std::uint64_t seed);

struct VqeResult {
  RootVector roots;
  std::vector<double> theta;
  std::vector<TracePoint> objective_trace;
  double final_objective = 0.0;
  int evaluations = 0;
  Evaluator evaluator;
  std::uint64_t seed = 0;
  bool converged = false;
  /// Exact <H> and Var(H) on the final state.
  double energy = 0.0;
  double variance = 0.0;
  /// Lowest eigenvalue of the sector when it fits the dense guard, NaN otherwise.
  double sector_ground_energy = 0.0;
};

VqeResult vqe_ground(const ChainModel& model, int down_spins, const RootTemplate& tmpl, const Evaluator& evaluator,
                     const std::vector<double>& theta0, const OptimizerConfig& cfg = {}, std::uint64_t seed = 0);

/// Variance minimization; finds whichever eigenstate the start point flows to.
VqeResult vqe_excited(const ChainModel& model, int down_spins, const RootTemplate& tmpl, const Evaluator& evaluator,
                      const std::vector<double>& theta0, const OptimizerConfig& cfg = {}, std::uint64_t seed = 0);

/// Start points for random restarts. Without a center, real parts are drawn
/// uniformly from the canonical strip and imaginary parts from
/// [-imag_bound, imag_bound]; with a center, each parameter is drawn from
/// center +- radius.
struct SamplerSpec {
  std::optional<std::vector<double>> center;
  double radius = 0.3;
  double imag_bound = 1.5;
};

/// Runs `n_restarts` independent VQE runs, drops duplicates (canonical roots
/// within 1e-4) and sorts by final objective.
std::vector<VqeResult> random_restart_driver(const ChainModel& model, int down_spins, const RootTemplate& tmpl,
                                             const Evaluator& evaluator, VqeObjective kind, int n_restarts,
                                             const SamplerSpec& sampler, const OptimizerConfig& cfg = {},
                                             std::uint64_t seed = 0);

}  // namespace bethe_vqe
