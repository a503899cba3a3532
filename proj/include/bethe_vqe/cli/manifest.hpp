#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bethe_vqe/core.hpp"

namespace bethe_vqe::cli {

enum class RunMode { Ground, Excited };

struct TableRow {
  int length = 0;
  int down_spins = 0;
  /// Printed strings; tolerances follow their decimals.
  std::string energy;
  std::vector<std::string> true_roots;
  std::vector<std::string> statevector_roots;
  std::string template_spec;
  std::vector<double> theta0;
  std::uint64_t seed = 1;
  std::optional<double> simplex_scale;
  std::optional<double> tolerance;
};

struct TableSpec {
  int table = 0;
  std::string title;
  Boundary boundary = Boundary::Closed;
  double delta = 0.0;
  double h = 0.0;
  double h_prime = 0.0;
  RunMode mode = RunMode::Ground;
  double tolerance = 0.0;
  double shots_tolerance = 0.0;
  std::vector<TableRow> rows;

  ChainModel model(int length) const;
  double row_tolerance(const TableRow& row) const { return row.tolerance.value_or(tolerance); }
};

struct SweepModel {
  ChainModel model;
  int down_spins = 0;
  std::string template_spec;
  std::vector<std::string> newton_guess;
  std::vector<double> theta0;
};

struct SweepSpec {
  std::vector<long long> shots;
  int repeats = 10;
  std::uint64_t seed = 1;
  std::vector<SweepModel> models;
};

struct Manifest {
  std::vector<TableSpec> tables;
  SweepSpec sweep;

  const TableSpec& table(int number) const;
};

std::string default_manifest_path();
Manifest load_manifest(const std::string& path);

}  // namespace bethe_vqe::cli
