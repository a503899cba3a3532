#include "bethe_vqe/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bethe_vqe/betheq.hpp"
#include "bethe_vqe/exact.hpp"
#include "bethe_vqe/sim.hpp"

namespace bethe_vqe::cli {

using nlohmann::json;

namespace {

constexpr double kEnergyTolerance = 1e-5;
constexpr double kEigenResidualTolerance = 1e-8;
constexpr double kVarianceTolerance = 1e-6;

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json roots_json(const RootVector& roots) {
  json a = json::array();
  for (auto k : roots.roots) a.push_back(complex_json(k));
  return a;
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string format_root(cplx k) {
  const double re = std::abs(k.real()) < 5e-7 ? 0.0 : k.real();
  char buf[64];
  if (std::abs(k.imag()) < 5e-7)
    std::snprintf(buf, sizeof buf, "%.6f", re);
  else
    std::snprintf(buf, sizeof buf, "%.6f%+.6fi", re, k.imag());
  return buf;
}

std::string format_roots(const RootVector& roots) {
  std::string s;
  for (std::size_t i = 0; i < roots.size(); ++i) s += (i ? ";" : "") + format_root(roots[i]);
  return s;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

std::vector<cplx> parse_all(const std::vector<std::string>& items) {
  std::vector<cplx> out;
  for (const auto& s : items) out.push_back(parse_complex(s));
  return out;
}

// Writes to --out when given, otherwise to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

json result_json(const VqeResult& r) {
  json trace = json::array();
  for (const auto& p : r.objective_trace) trace.push_back({p.iteration, p.value});
  return {{"roots", roots_json(r.roots)},
          {"theta", r.theta},
          {"final_objective", r.final_objective},
          {"energy", r.energy},
          {"variance", r.variance},
          {"sector_ground_energy", nullable(r.sector_ground_energy)},
          {"iterations", r.objective_trace.empty() ? 0 : r.objective_trace.back().iteration},
          {"evaluations", r.evaluations},
          {"converged", r.converged},
          {"evaluator", r.evaluator.to_string()},
          {"seed", r.seed},
          {"objective_trace", trace}};
}

json model_json(const ChainModel& m, int down_spins) {
  json j{{"boundary", to_string(m.boundary)}, {"L", m.length}, {"M", down_spins}, {"delta", m.delta}};
  if (m.boundary == Boundary::Open) {
    j["h"] = m.h;
    j["h_prime"] = m.h_prime;
  }
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// tables

RowOutcome run_table_row(const TableSpec& spec, const TableRow& row, const Evaluator& evaluator) {
  RowOutcome o;
  o.length = row.length;
  o.down_spins = row.down_spins;
  o.tolerance = evaluator.is_exact() ? spec.row_tolerance(row) : spec.shots_tolerance;
  try {
    const ChainModel model = spec.model(row.length);
    const auto truth = parse_all(row.true_roots);

    o.roots_newton = newton_solve(model, row.down_spins, RootVector{truth, model.boundary});
    const auto aligned = align_roots(o.roots_newton, truth);
    o.newton_ok = true;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const double d = std::max(std::abs(aligned[i].real() - truth[i].real()),
                                std::abs(aligned[i].imag() - truth[i].imag()));
      o.newton_error = std::max(o.newton_error, d);
      if (d > printed_tolerance(row.true_roots[i])) o.newton_ok = false;
    }

    const auto hamiltonian = build_hamiltonian(model);
    const auto state = bethe_state(model, o.roots_newton);
    o.eigen_residual = eigen_residual(state, hamiltonian);
    o.energy_bethe = bethe_energy(model, o.roots_newton).real();
    const auto spectrum = eigenvalues(model, row.down_spins);
    o.energy_exact = *std::min_element(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(),
                                       [&](double a, double b) {
                                         return std::abs(a - o.energy_bethe) < std::abs(b - o.energy_bethe);
                                       });
    o.energy_error = std::abs(o.energy_exact - parse_complex(row.energy).real());
    o.energy_ok = o.energy_error <= kEnergyTolerance && o.eigen_residual < kEigenResidualTolerance &&
                  std::abs(o.energy_exact - o.energy_bethe) <= kEnergyTolerance;
    if (spec.mode == RunMode::Ground && std::abs(o.energy_exact - spectrum.eigenvalues.front()) > kEnergyTolerance)
      o.energy_ok = false;

    OptimizerConfig cfg;
    if (row.simplex_scale) cfg.initial_simplex_scale = *row.simplex_scale;
    const auto tmpl = RootTemplate::parse(row.template_spec);
    o.vqe = spec.mode == RunMode::Ground
                ? vqe_ground(model, row.down_spins, tmpl, evaluator, row.theta0, cfg, row.seed)
                : vqe_excited(model, row.down_spins, tmpl, evaluator, row.theta0, cfg, row.seed);
    o.max_error = max_component_error(o.vqe.roots, o.roots_newton.roots);
    o.statevector_error = max_component_error(o.vqe.roots, parse_all(row.statevector_roots));
    o.vqe_ok = o.max_error < o.tolerance;
    if (evaluator.is_exact()) {
      o.vqe_ok = o.vqe_ok && o.statevector_error < o.tolerance;
      if (spec.mode == RunMode::Excited) o.vqe_ok = o.vqe_ok && o.vqe.variance < kVarianceTolerance;
    }
  } catch (const std::exception& e) {
    o.failure = e.what();
  }
  return o;
}

std::vector<RowOutcome> run_table(const TableSpec& spec, const Evaluator& evaluator) {
  std::vector<std::future<RowOutcome>> jobs;
  for (const auto& row : spec.rows)
    jobs.push_back(std::async(std::launch::async, [&spec, &row, &evaluator] {
      return run_table_row(spec, row, evaluator);
    }));
  std::vector<RowOutcome> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

int cmd_tables(int table, const RunConfig& cfg, const std::string& manifest_path, std::ostream& out,
               std::ostream& err) {
  const Manifest manifest = load_manifest(manifest_path);
  const TableSpec& spec = manifest.table(table);
  Evaluator evaluator = Evaluator::parse(cfg.evaluator);
  const auto rows = run_table(spec, evaluator);

  Sink sink(cfg.out, out);
  const auto format = cfg.format.value_or(OutputFormat::Csv);
  if (format == OutputFormat::Csv) {
    sink.get() << "L,M,energy_exact,roots_newton,roots_vqe,max_error\n";
    for (const auto& r : rows)
      sink.get() << r.length << ',' << r.down_spins << ',' << format_double(r.energy_exact) << ','
                 << format_roots(r.roots_newton) << ',' << format_roots(r.vqe.roots) << ','
                 << format_double(r.max_error) << '\n';
  } else {
    json a = json::array();
    for (const auto& r : rows)
      a.push_back({{"L", r.length},
                   {"M", r.down_spins},
                   {"energy_exact", r.energy_exact},
                   {"energy_bethe", r.energy_bethe},
                   {"eigen_residual", r.eigen_residual},
                   {"roots_newton", roots_json(r.roots_newton)},
                   {"roots_vqe", roots_json(r.vqe.roots)},
                   {"vqe_variance", r.vqe.variance},
                   {"newton_error", r.newton_error},
                   {"energy_error", r.energy_error},
                   {"max_error", r.max_error},
                   {"statevector_error", r.statevector_error},
                   {"tolerance", r.tolerance},
                   {"passed", r.passed()}});
    sink.get() << json{{"table", table}, {"evaluator", evaluator.to_string()}, {"rows", a}}.dump(2) << '\n';
  }

  int failed = 0;
  for (const auto& r : rows) {
    if (r.passed()) continue;
    ++failed;
    err << "table " << table << " row L=" << r.length << " M=" << r.down_spins << " failed:";
    if (!r.failure.empty()) err << ' ' << r.failure;
    if (r.failure.empty() && !r.newton_ok) err << " newton error " << r.newton_error;
    if (r.failure.empty() && !r.energy_ok) err << " energy error " << r.energy_error;
    if (r.failure.empty() && !r.vqe_ok)
      err << " vqe error " << r.max_error << " (statevector " << r.statevector_error << ", variance "
          << r.vqe.variance << ", tolerance " << r.tolerance << ")";
    err << '\n';
  }
  return failed == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// error sweep

std::vector<SweepPoint> run_error_sweep(const SweepModel& sm, const std::vector<long long>& shots, int repeats,
                                        std::uint64_t seed) {
  if (shots.empty()) throw std::invalid_argument("shot list is empty");
  if (repeats < 1) throw std::invalid_argument("repeats must be positive");
  const auto truth =
      newton_solve(sm.model, sm.down_spins, RootVector{parse_all(sm.newton_guess), sm.model.boundary});
  const auto tmpl = RootTemplate::parse(sm.template_spec);

  std::vector<SweepPoint> points;
  for (long long x : shots) {
    if (x < 1) throw std::invalid_argument("shots must be positive");
    std::vector<std::future<double>> jobs;
    for (int r = 0; r < repeats; ++r)
      jobs.push_back(std::async(std::launch::async, [&, x, r] {
        const auto res = vqe_ground(sm.model, sm.down_spins, tmpl, Evaluator::sampled(x), sm.theta0, {},
                                    derive_seed(seed, static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(r)));
        return relative_root_error(res.roots, truth.roots);
      }));
    SweepPoint p;
    p.boundary = sm.model.boundary;
    p.shots = x;
    for (auto& j : jobs) p.errors.push_back(j.get());
    const double n = static_cast<double>(p.errors.size());
    p.mean_error = std::accumulate(p.errors.begin(), p.errors.end(), 0.0) / n;
    double ss = 0.0;
    for (double e : p.errors) ss += (e - p.mean_error) * (e - p.mean_error);
    p.std_error = p.errors.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    points.push_back(std::move(p));
  }
  return points;
}

InverseSqrtFit fit_inverse_sqrt(const std::vector<SweepPoint>& points) {
  const double n = static_cast<double>(points.size());
  double mu = 0.0, my = 0.0;
  for (const auto& p : points) {
    mu += 1.0 / std::sqrt(static_cast<double>(p.shots));
    my += p.mean_error;
  }
  mu /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double du = 1.0 / std::sqrt(static_cast<double>(p.shots)) - mu;
    const double dy = p.mean_error - my;
    sxx += du * du;
    sxy += du * dy;
    syy += dy * dy;
  }
  InverseSqrtFit fit;
  if (sxx <= 0.0) {
    fit.b = my;
    fit.r_squared = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  fit.a = sxy / sxx;
  fit.b = my - fit.a * mu;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

double spearman_rho(const std::vector<SweepPoint>& points) {
  auto ranks = [](std::vector<double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
      i = j + 1;
    }
    return r;
  };
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    xs.push_back(static_cast<double>(p.shots));
    ys.push_back(p.mean_error);
  }
  const auto rx = ranks(xs), ry = ranks(ys);
  const double n = static_cast<double>(points.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxx > 0.0 && syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

int cmd_error_sweep(const RunConfig& cfg, const std::vector<long long>& shots, int repeats,
                    const std::vector<std::string>& boundaries, const std::string& manifest_path,
                    std::ostream& out, std::ostream& err) {
  const Manifest manifest = load_manifest(manifest_path);
  const auto& shot_list = shots.empty() ? manifest.sweep.shots : shots;
  const int n_repeats = repeats > 0 ? repeats : manifest.sweep.repeats;

  std::vector<const SweepModel*> models;
  for (const auto& name : boundaries) {
    const Boundary b = parse_boundary(name);
    const SweepModel* found = nullptr;
    for (const auto& m : manifest.sweep.models)
      if (m.model.boundary == b && m.model.length == cfg.length) found = &m;
    if (!found)
      throw std::invalid_argument("no sweep model for " + name + " L=" + std::to_string(cfg.length));
    models.push_back(found);
  }

  const bool degenerate = [&] {
    std::vector<long long> s(shot_list);
    std::sort(s.begin(), s.end());
    return std::unique(s.begin(), s.end()) - s.begin() < 2;
  }();
  if (degenerate) err << "warning: fewer than two distinct shot counts, skipping the fit\n";

  Sink sink(cfg.out, out);
  const auto format = cfg.format.value_or(OutputFormat::Csv);
  json doc{{"seed", cfg.seed}, {"repeats", n_repeats}, {"sweeps", json::array()}};
  std::ostringstream fits;
  if (format == OutputFormat::Csv) sink.get() << "boundary,x,mean_error,std_error\n";
  for (const auto* sm : models) {
    const auto points = run_error_sweep(*sm, shot_list, n_repeats, cfg.seed);
    json pts = json::array();
    for (const auto& p : points) {
      if (format == OutputFormat::Csv)
        sink.get() << to_string(p.boundary) << ',' << p.shots << ',' << format_double(p.mean_error) << ','
                   << format_double(p.std_error) << '\n';
      pts.push_back({{"x", p.shots}, {"mean_error", p.mean_error}, {"std_error", p.std_error}, {"errors", p.errors}});
    }
    json entry{{"boundary", to_string(sm->model.boundary)}, {"points", pts}};
    if (!degenerate) {
      const auto fit = fit_inverse_sqrt(points);
      const double rho = spearman_rho(points);
      fits << "# fit " << to_string(sm->model.boundary) << " a=" << format_double(fit.a)
           << " b=" << format_double(fit.b) << " r2=" << format_double(fit.r_squared)
           << " spearman=" << format_double(rho) << '\n';
      entry["fit"] = {{"a", fit.a}, {"b", fit.b}, {"r_squared", fit.r_squared}, {"spearman", rho}};
    }
    doc["sweeps"].push_back(entry);
  }
  if (format == OutputFormat::Csv)
    sink.get() << fits.str();
  else
    sink.get() << doc.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// solve-bethe and vqe

int cmd_solve_bethe(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.guess.empty()) throw std::invalid_argument("solve-bethe needs --guess");
  const ChainModel model = cfg.model();
  const auto guess = parse_complex_list(cfg.guess);
  if (static_cast<int>(guess.size()) != cfg.down_spins)
    throw DimensionMismatch("guess has " + std::to_string(guess.size()) + " roots but M=" +
                            std::to_string(cfg.down_spins));

  RootVector roots;
  try {
    roots = newton_solve(model, cfg.down_spins, RootVector{guess, model.boundary});
  } catch (const Error& e) {
    err << "solve-bethe failed: " << e.what() << '\n';
    return 1;
  }
  const auto hamiltonian = build_hamiltonian(model);
  const auto state = bethe_state(model, roots);
  const cplx energy = bethe_energy(model, roots);

  Sink sink(cfg.out, out);
  if (cfg.format.value_or(OutputFormat::Json) == OutputFormat::Csv) {
    sink.get() << "L,M,roots,residual,energy,eigen_residual\n"
               << model.length << ',' << cfg.down_spins << ',' << format_roots(roots) << ','
               << format_double(residual(model, roots).norm()) << ',' << format_double(energy.real()) << ','
               << format_double(eigen_residual(state, hamiltonian)) << '\n';
  } else {
    json j = model_json(model, cfg.down_spins);
    j["roots"] = roots_json(roots);
    j["residual_norm"] = residual(model, roots).norm();
    j["scaled_residual_norm"] = scaled_residual(model, roots).norm();
    j["energy"] = energy.real();
    j["eigen_residual"] = eigen_residual(state, hamiltonian);
    sink.get() << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_vqe(const RunConfig& cfg, RunMode mode, std::ostream& out, std::ostream& err) {
  if (cfg.template_spec.empty()) throw std::invalid_argument("vqe needs --template");
  const ChainModel model = cfg.model();
  const auto tmpl = RootTemplate::parse(cfg.template_spec);
  if (tmpl.root_count() != cfg.down_spins) throw TemplateMismatch("template root count differs from M");
  const Evaluator evaluator = cfg.parsed_evaluator();
  const OptimizerConfig opt = cfg.optimizer();
  const std::vector<double> theta0 = cfg.theta0.empty() ? std::vector<double>{} : parse_real_list(cfg.theta0);
  if (!theta0.empty() && static_cast<int>(theta0.size()) != tmpl.parameter_count())
    throw TemplateMismatch("theta0 has " + std::to_string(theta0.size()) + " entries, template needs " +
                           std::to_string(tmpl.parameter_count()));

  const auto start = std::chrono::steady_clock::now();
  std::vector<VqeResult> results;
  try {
    if (cfg.restarts <= 1 && !theta0.empty()) {
      results.push_back(mode == RunMode::Ground ? vqe_ground(model, cfg.down_spins, tmpl, evaluator, theta0, opt, cfg.seed)
                                                : vqe_excited(model, cfg.down_spins, tmpl, evaluator, theta0, opt, cfg.seed));
    } else {
      SamplerSpec sampler;
      if (!theta0.empty()) sampler.center = theta0;
      results = random_restart_driver(model, cfg.down_spins, tmpl, evaluator,
                                      mode == RunMode::Ground ? VqeObjective::Energy : VqeObjective::Variance,
                                      std::max(cfg.restarts, 1), sampler, opt, cfg.seed);
    }
  } catch (const Error& e) {
    err << "vqe failed: " << e.what() << '\n';
    return 1;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Sink sink(cfg.out, out);
  if (cfg.format.value_or(OutputFormat::Json) == OutputFormat::Csv) {
    sink.get() << "rank,roots,final_objective,energy,variance,converged\n";
    for (std::size_t i = 0; i < results.size(); ++i)
      sink.get() << i << ',' << format_roots(results[i].roots) << ',' << format_double(results[i].final_objective)
                 << ',' << format_double(results[i].energy) << ',' << format_double(results[i].variance) << ','
                 << (results[i].converged ? "true" : "false") << '\n';
  } else {
    json j = model_json(model, cfg.down_spins);
    j["mode"] = mode == RunMode::Ground ? "ground" : "excited";
    j["template"] = tmpl.to_string();
    j["result"] = result_json(results.front());
    if (results.size() > 1) {
      json others = json::array();
      for (std::size_t i = 1; i < results.size(); ++i) others.push_back(result_json(results[i]));
      j["other_solutions"] = others;
    }
    j["restarts"] = std::max(cfg.restarts, 1);
    j["wall_time_s"] = wall;
    sink.get() << j.dump(2) << '\n';
  }
  return 0;
}

}  // namespace bethe_vqe::cli
