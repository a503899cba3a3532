#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bethe_vqe/core.hpp"
#include "bethe_vqe/vqe.hpp"

namespace bethe_vqe::cli {

enum class OutputFormat { Json, Csv };

/// Everything a single command needs. Filled from flags and an optional
/// key = value config file.
struct RunConfig {
  Boundary boundary = Boundary::Closed;
  int length = 4;
  int down_spins = 2;
  double delta = 2.0;
  double h = 0.0;
  double h_prime = 0.0;
  std::string template_spec;
  std::string evaluator = "exact";
  std::uint64_t seed = 1;
  int restarts = 1;
  /// Root list for solve-bethe, e.g. "(1.5,-1.5,3.1)" or "3.14+0.9i,2.1".
  std::string guess;
  /// Parameter vector for vqe.
  std::string theta0;
  std::optional<double> simplex_scale;
  std::optional<int> max_iterations;
  std::string out;
  std::optional<OutputFormat> format;

  ChainModel model() const;
  Evaluator parsed_evaluator() const;
  OptimizerConfig optimizer() const;
};

/// "3.14159+0.882174i", "-0.2264i", "1.5", "2-0.5i".
cplx parse_complex(const std::string& text);
/// Comma separated list, optionally wrapped in parentheses or brackets.
std::vector<cplx> parse_complex_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);
std::vector<long long> parse_integer_list(const std::string& text);

/// Half a unit in the last printed decimal place, capped at five decimals.
/// Values printed without a decimal point are treated as exact to five.
double printed_tolerance(const std::string& text);

OutputFormat parse_format(const std::string& name);

}  // namespace bethe_vqe::cli
