#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bethe_vqe/cli/commands.hpp"

namespace bethe_vqe::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bethe roots from Newton solves and variational state preparation"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");
  app.set_config("--config", "", "key = value file with any of the long options; flags override it");

  RunConfig cfg;
  std::string boundary = "closed";
  std::string format;
  std::string mode = "ground";
  std::string manifest = default_manifest_path();
  std::string shots;
  std::vector<std::string> sweep_boundaries{"closed", "open"};
  int table = 1;
  int repeats = 0;
  double simplex_scale = 0.0;
  int max_iterations = 0;

  app.add_option("--boundary", boundary, "closed or open")->capture_default_str();
  app.add_option("--L", cfg.length, "chain length")->capture_default_str();
  app.add_option("--M", cfg.down_spins, "number of down spins (roots)")->capture_default_str();
  app.add_option("--delta", cfg.delta, "anisotropy")->capture_default_str();
  app.add_option("--h", cfg.h, "left boundary field (open)")->capture_default_str();
  app.add_option("--h-prime", cfg.h_prime, "right boundary field (open)")->capture_default_str();
  app.add_option("--template", cfg.template_spec, "comma list of r, p, c");
  app.add_option("--evaluator", cfg.evaluator, "exact or shots:<x>")->capture_default_str();
  app.add_option("--seed", cfg.seed, "base seed")->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "number of VQE starts")->capture_default_str();
  app.add_option("--guess", cfg.guess, "initial roots for solve-bethe");
  app.add_option("--theta0", cfg.theta0, "initial parameters for vqe");
  auto* scale_opt = app.add_option("--simplex-scale", simplex_scale, "initial simplex edge");
  auto* iter_opt = app.add_option("--max-iterations", max_iterations, "optimizer iteration cap");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", format, "json or csv");
  app.add_option("--mode", mode, "vqe objective: ground or excited")->capture_default_str();
  app.add_option("--table", table, "table number for tables")->capture_default_str();
  app.add_option("--manifest", manifest, "table and sweep manifest")->capture_default_str();
  app.add_option("--shots", shots, "comma list of shot counts for error-sweep");
  app.add_option("--repeats", repeats, "runs per shot count for error-sweep");
  app.add_option("--sweep-boundaries", sweep_boundaries, "boundaries swept by error-sweep")->delimiter(',');

  auto* solve = app.add_subcommand("solve-bethe", "Newton solve of the Bethe equations")->fallthrough();
  auto* vqe = app.add_subcommand("vqe", "variational search for Bethe roots")->fallthrough();
  auto* tables = app.add_subcommand("tables", "reproduce a table from the manifest")->fallthrough();
  auto* sweep = app.add_subcommand("error-sweep", "shot-noise error scaling at L=4")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.boundary = parse_boundary(boundary);
    if (!format.empty()) cfg.format = parse_format(format);
    if (scale_opt->count() > 0) cfg.simplex_scale = simplex_scale;
    if (iter_opt->count() > 0) cfg.max_iterations = max_iterations;

    if (*solve) return cmd_solve_bethe(cfg, out, err);
    if (*vqe) {
      if (mode != "ground" && mode != "excited") throw std::invalid_argument("mode must be ground or excited");
      return cmd_vqe(cfg, mode == "ground" ? RunMode::Ground : RunMode::Excited, out, err);
    }
    if (*tables) return cmd_tables(table, cfg, manifest, out, err);
    if (*sweep) {
      return cmd_error_sweep(cfg, shots.empty() ? std::vector<long long>{} : parse_integer_list(shots), repeats,
                             sweep_boundaries, manifest, out, err);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace bethe_vqe::cli
