#include "bethe_vqe/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "bethe_vqe/bethe.hpp"
#include "bethe_vqe/betheq.hpp"
#include "bethe_vqe/exact.hpp"
#include "bethe_vqe/model.hpp"

namespace bethe_vqe {

// ---------------------------------------------------------------------------
// Templates

RootTemplate RootTemplate::parse(const std::string& spec) {
  RootTemplate t;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::erase_if(item, [](unsigned char c) { return std::isspace(c); });
    if (item == "r") {
      t.entries.push_back(RootKind::Real);
    } else if (item == "p") {
      t.entries.push_back(RootKind::ConjugatePair);
    } else if (item == "c") {
      t.entries.push_back(RootKind::FreeComplex);
    } else {
      throw TemplateMismatch("unknown template entry '" + item + "' (expected r, p or c)");
    }
  }
  if (t.entries.empty()) throw TemplateMismatch("empty root template");
  return t;
}

std::string RootTemplate::to_string() const {
  std::string s;
  for (auto e : entries) {
    if (!s.empty()) s += ',';
    s += e == RootKind::Real ? 'r' : e == RootKind::ConjugatePair ? 'p' : 'c';
  }
  return s;
}

int RootTemplate::root_count() const {
  int m = 0;
  for (auto e : entries) m += e == RootKind::ConjugatePair ? 2 : 1;
  return m;
}

int RootTemplate::parameter_count() const {
  int p = 0;
  for (auto e : entries) p += e == RootKind::Real ? 1 : 2;
  return p;
}

std::vector<double> pack(const RootVector& roots, const RootTemplate& tmpl) {
  if (static_cast<int>(roots.size()) != tmpl.root_count()) throw TemplateMismatch("root count does not match template");
  std::vector<double> theta;
  std::size_t j = 0;
  for (auto e : tmpl.entries) {
    const cplx k = roots[j];
    switch (e) {
      case RootKind::Real:
        if (k.imag() != 0.0) throw TemplateMismatch("template expects a real root");
        theta.push_back(k.real());
        j += 1;
        break;
      case RootKind::ConjugatePair:
        if (roots[j + 1] != std::conj(k)) throw TemplateMismatch("template expects a conjugate pair");
        theta.push_back(k.real());
        theta.push_back(k.imag());
        j += 2;
        break;
      case RootKind::FreeComplex:
        theta.push_back(k.real());
        theta.push_back(k.imag());
        j += 1;
        break;
    }
  }
  return theta;
}

RootVector unpack(std::span<const double> theta, const RootTemplate& tmpl, Boundary boundary) {
  if (static_cast<int>(theta.size()) != tmpl.parameter_count())
    throw TemplateMismatch("parameter count does not match template");
  RootVector roots{{}, boundary};
  std::size_t i = 0;
  for (auto e : tmpl.entries) {
    switch (e) {
      case RootKind::Real:
        roots.roots.emplace_back(theta[i], 0.0);
        i += 1;
        break;
      case RootKind::ConjugatePair:
        roots.roots.emplace_back(theta[i], theta[i + 1]);
        roots.roots.emplace_back(theta[i], -theta[i + 1]);
        i += 2;
        break;
      case RootKind::FreeComplex:
        roots.roots.emplace_back(theta[i], theta[i + 1]);
        i += 2;
        break;
    }
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Nelder-Mead

MinimizeResult minimize(const Objective& objective, std::vector<double> theta0, const OptimizerConfig& cfg) {
  if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (theta0.empty()) throw std::invalid_argument("empty parameter vector");
  const std::size_t n = theta0.size();

  struct Vertex {
    std::vector<double> x;
    double f;
    int samples = 1;
  };
  MinimizeResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double f = objective(x);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({theta0, eval(theta0)});
  for (std::size_t i = 0; i < n; ++i) {
    auto x = theta0;
    x[i] += cfg.initial_simplex_scale;
    simplex.push_back({x, eval(x)});
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::stable_sort(simplex.begin(), simplex.end(), by_value);
  result.trace.push_back({0, simplex.front().f});

  auto combine = [n](const std::vector<double>& c, const std::vector<double>& x, double t) {
    // c + t (x - c)
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = c[i] + t * (x[i] - c[i]);
    return y;
  };

  auto rebuild = [&](double scale) {
    const auto anchor = simplex.front().x;
    for (std::size_t v = 1; v <= n; ++v) {
      simplex[v].x = anchor;
      simplex[v].x[v - 1] += scale;
      simplex[v].f = eval(simplex[v].x);
      simplex[v].samples = 1;
    }
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
  };

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    if (cfg.resample) {
      for (auto& v : simplex) {
        v.f = (v.f * v.samples + eval(v.x)) / (v.samples + 1);
        ++v.samples;
      }
      std::stable_sort(simplex.begin(), simplex.end(), by_value);
    }
    const Vertex& best = simplex.front();
    double diameter = 0.0;
    for (std::size_t v = 1; v <= n; ++v)
      for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, std::abs(simplex[v].x[i] - best.x[i]));
    if (diameter < cfg.xtol) {
      if (std::abs(simplex.back().f - best.f) < cfg.ftol) {
        result.converged = true;
        if (result.trace.back().value != best.f) result.trace.push_back({iter, best.f});
        break;
      }
      if (cfg.restart_on_collapse) {
        rebuild(cfg.initial_simplex_scale);
        result.trace.push_back({iter, simplex.front().f});
        continue;
      }
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);

    Vertex& worst = simplex.back();
    const double second_worst = simplex[n - 1].f;
    const auto xr = combine(centroid, worst.x, -1.0);
    const double fr = eval(xr);

    bool shrink = false;
    if (fr < best.f) {
      const auto xe = combine(centroid, worst.x, -2.0);
      const double fe = eval(xe);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < second_worst) {
      worst = {xr, fr};
    } else if (fr < worst.f) {
      const auto xc = combine(centroid, worst.x, -0.5);
      const double fc = eval(xc);
      if (fc <= fr) {
        worst = {xc, fc};
      } else {
        shrink = true;
      }
    } else {
      const auto xc = combine(centroid, worst.x, 0.5);
      const double fc = eval(xc);
      if (fc < worst.f) {
        worst = {xc, fc};
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      const auto anchor = simplex.front().x;
      for (std::size_t v = 1; v <= n; ++v) {
        simplex[v].x = combine(anchor, simplex[v].x, 0.5);
        simplex[v].f = eval(simplex[v].x);
        simplex[v].samples = 1;
      }
    }
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    result.trace.push_back({iter, simplex.front().f});
  }

  result.theta = simplex.front().x;
  result.value = simplex.front().f;
  return result;
}

// ---------------------------------------------------------------------------
// Evaluators and objectives

Evaluator Evaluator::parse(const std::string& spec) {
  if (spec == "exact") return exact();
  if (spec.rfind("shots:", 0) == 0) {
    const long long x = std::stoll(spec.substr(6));
    if (x < 1) throw std::invalid_argument("shots must be positive");
    return sampled(x);
  }
  throw std::invalid_argument("evaluator must be 'exact' or 'shots:<x>'");
}

std::string Evaluator::to_string() const {
  return is_exact() ? "exact" : "shots:" + std::to_string(shots->shots_per_string);
}

Objective make_objective(const ChainModel& model, const RootTemplate& tmpl, const Evaluator& evaluator,
                         VqeObjective kind, std::uint64_t seed) {
  model.validate();
  auto hamiltonian = std::make_shared<const PauliHamiltonian>(build_hamiltonian(model));
  std::shared_ptr<const PauliHamiltonian> squared;
  if (kind == VqeObjective::Variance && !evaluator.is_exact())
    squared = std::make_shared<const PauliHamiltonian>(square_hamiltonian(*hamiltonian));
  auto calls = std::make_shared<std::uint64_t>(0);

  return [=](std::span<const double> theta) -> double {
    const std::uint64_t call = (*calls)++;
    QuantumState state;
    try {
      state = bethe_state(model, unpack(theta, tmpl, model.boundary));
    } catch (const NullStateError&) {
      return kNullStatePenalty;
    }
    if (evaluator.is_exact())
      return kind == VqeObjective::Energy ? expval_exact(state, *hamiltonian) : variance_exact(state, *hamiltonian);
    ShotConfig cfg = *evaluator.shots;
    cfg.seed = derive_seed(seed, 0x5eed, call);
    return kind == VqeObjective::Energy ? expval_shots(state, *hamiltonian, cfg).value
                                        : variance_shots(state, *hamiltonian, *squared, cfg).value;
  };
}

namespace {

VqeResult run_vqe(const ChainModel& model, int down_spins, const RootTemplate& tmpl, const Evaluator& evaluator,
                  VqeObjective kind, const std::vector<double>& theta0, const OptimizerConfig& cfg,
                  std::uint64_t seed) {
  if (tmpl.root_count() != down_spins) throw TemplateMismatch("template root count differs from M");
  if (static_cast<int>(theta0.size()) != tmpl.parameter_count())
    throw TemplateMismatch("initial parameters do not match template");

  const auto objective = make_objective(model, tmpl, evaluator, kind, seed);
  OptimizerConfig opt_cfg = cfg;
  if (!evaluator.is_exact()) {
    opt_cfg.resample = true;
    opt_cfg.restart_on_collapse = true;
  }
  auto opt = minimize(objective, theta0, opt_cfg);
  if (opt.value >= kNullStatePenalty) throw EvaluationFailure("every trial state was null");

  VqeResult result;
  result.theta = opt.theta;
  result.roots = canonicalize(unpack(opt.theta, tmpl, model.boundary));
  result.objective_trace = std::move(opt.trace);
  result.final_objective = opt.value;
  result.evaluations = opt.evaluations;
  result.evaluator = evaluator;
  result.seed = seed;
  result.converged = opt.converged;

  const auto hamiltonian = build_hamiltonian(model);
  const auto state = bethe_state(model, unpack(opt.theta, tmpl, model.boundary));
  result.energy = expval_exact(state, hamiltonian);
  result.variance = variance_exact(state, hamiltonian);
  result.sector_ground_energy = binomial(model.length, down_spins) <= kSectorDimensionGuard
                                    ? sector_ground_energy(model, down_spins)
                                    : std::numeric_limits<double>::quiet_NaN();
  return result;
}

}  // namespace

VqeResult vqe_ground(const ChainModel& model, int down_spins, const RootTemplate& tmpl, const Evaluator& evaluator,
                     const std::vector<double>& theta0, const OptimizerConfig& cfg, std::uint64_t seed) {
  return run_vqe(model, down_spins, tmpl, evaluator, VqeObjective::Energy, theta0, cfg, seed);
}

VqeResult vqe_excited(const ChainModel& model, int down_spins, const RootTemplate& tmpl, const Evaluator& evaluator,
                      const std::vector<double>& theta0, const OptimizerConfig& cfg, std::uint64_t seed) {
  return run_vqe(model, down_spins, tmpl, evaluator, VqeObjective::Variance, theta0, cfg, seed);
}

std::vector<VqeResult> random_restart_driver(const ChainModel& model, int down_spins, const RootTemplate& tmpl,
                                             const Evaluator& evaluator, VqeObjective kind, int n_restarts,
                                             const SamplerSpec& sampler, const OptimizerConfig& cfg,
                                             std::uint64_t seed) {
  if (n_restarts < 1) throw std::invalid_argument("need at least one restart");
  if (sampler.center && static_cast<int>(sampler.center->size()) != tmpl.parameter_count())
    throw TemplateMismatch("sampler center does not match template");

  SplitMix64 rng(derive_seed(seed, 0x5a3b1e));
  const double lo = model.boundary == Boundary::Closed ? -std::numbers::pi : 0.0;
  std::uniform_real_distribution<double> re_dist(lo, std::numbers::pi);
  std::uniform_real_distribution<double> im_dist(-sampler.imag_bound, sampler.imag_bound);
  std::uniform_real_distribution<double> offset(-sampler.radius, sampler.radius);

  std::vector<std::vector<double>> starts;
  for (int r = 0; r < n_restarts; ++r) {
    std::vector<double> theta;
    if (sampler.center) {
      for (double c : *sampler.center) theta.push_back(c + offset(rng));
    } else {
      for (auto e : tmpl.entries) {
        theta.push_back(re_dist(rng));
        if (e != RootKind::Real) theta.push_back(im_dist(rng));
      }
    }
    starts.push_back(std::move(theta));
  }

  // Runs are independent; results are collected in restart order.
  std::vector<std::future<std::optional<VqeResult>>> runs;
  for (int r = 0; r < n_restarts; ++r) {
    runs.push_back(std::async(std::launch::async, [&, r]() -> std::optional<VqeResult> {
      try {
        return run_vqe(model, down_spins, tmpl, evaluator, kind, starts[static_cast<std::size_t>(r)], cfg,
                       derive_seed(seed, 1, static_cast<std::uint64_t>(r)));
      } catch (const EvaluationFailure&) {
        return std::nullopt;
      }
    }));
  }
  std::vector<VqeResult> unique;
  for (auto& run : runs) {
    auto result = run.get();
    if (!result) continue;
    const bool duplicate = std::any_of(unique.begin(), unique.end(), [&](const VqeResult& u) {
      return max_component_error(result->roots, u.roots.roots) < 1e-4;
    });
    if (!duplicate) unique.push_back(std::move(*result));
  }
  std::stable_sort(unique.begin(), unique.end(),
                   [](const VqeResult& a, const VqeResult& b) { return a.final_objective < b.final_objective; });
  return unique;
}

}  // namespace bethe_vqe
