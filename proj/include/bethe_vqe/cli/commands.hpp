#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bethe_vqe/cli/config.hpp"
#include "bethe_vqe/cli/manifest.hpp"
#include "bethe_vqe/vqe.hpp"

namespace bethe_vqe::cli {

/// One reproduced table row with every gate evaluated.
struct RowOutcome {
  int length = 0;
  int down_spins = 0;
  double energy_exact = 0.0;   // sector eigenvalue closest to the Bethe energy
  double energy_bethe = 0.0;
  double eigen_residual = 0.0;
  RootVector roots_newton;
  VqeResult vqe;
  double newton_error = 0.0;       // vs printed true roots
  double energy_error = 0.0;       // vs printed energy
  double max_error = 0.0;          // VQE vs Newton
  double statevector_error = 0.0;  // VQE vs printed statevector roots
  double tolerance = 0.0;
  bool newton_ok = false;
  bool energy_ok = false;
  bool vqe_ok = false;
  std::string failure;

  bool passed() const { return failure.empty() && newton_ok && energy_ok && vqe_ok; }
};

RowOutcome run_table_row(const TableSpec& spec, const TableRow& row, const Evaluator& evaluator);
std::vector<RowOutcome> run_table(const TableSpec& spec, const Evaluator& evaluator);

struct SweepPoint {
  Boundary boundary = Boundary::Closed;
  long long shots = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  std::vector<double> errors;
};

/// Least squares of y = a u + b with u = 1/sqrt(x).
struct InverseSqrtFit {
  double a = 0.0;
  double b = 0.0;
  double r_squared = 0.0;
};

std::vector<SweepPoint> run_error_sweep(const SweepModel& model, const std::vector<long long>& shots, int repeats,
                                        std::uint64_t seed);
InverseSqrtFit fit_inverse_sqrt(const std::vector<SweepPoint>& points);
/// Spearman rank correlation of (x, mean error).
double spearman_rho(const std::vector<SweepPoint>& points);

int cmd_solve_bethe(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_vqe(const RunConfig& cfg, RunMode mode, std::ostream& out, std::ostream& err);
int cmd_tables(int table, const RunConfig& cfg, const std::string& manifest_path, std::ostream& out,
               std::ostream& err);
int cmd_error_sweep(const RunConfig& cfg, const std::vector<long long>& shots, int repeats,
                    const std::vector<std::string>& boundaries, const std::string& manifest_path,
                    std::ostream& out, std::ostream& err);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bethe_vqe::cli
