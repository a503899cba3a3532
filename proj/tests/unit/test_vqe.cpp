#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bethe_vqe/betheq.hpp"
#include "bethe_vqe/exact.hpp"
#include "bethe_vqe/vqe.hpp"

using namespace bethe_vqe;
using std::numbers::pi;

namespace {

ChainModel open_model(int length) { return ChainModel::open(length, 0.5, 3.0, 0.3); }

}  // namespace

TEST_CASE("templates") {
  auto t = RootTemplate::parse("c, r,p");
  CHECK(t.root_count() == 4);
  CHECK(t.parameter_count() == 5);
  CHECK(t.to_string() == "c,r,p");
  CHECK_THROWS_AS(RootTemplate::parse("r,q"), TemplateMismatch);
  CHECK_THROWS_AS(RootTemplate::parse(""), TemplateMismatch);
}

TEST_CASE("pack and unpack") {
  auto t = RootTemplate::parse("p,r");
  const std::vector<double> theta{0.25, 1.4, 1.6};
  auto roots = unpack(theta, t, Boundary::Closed);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == cplx(0.25, 1.4));
  CHECK(roots[1] == cplx(0.25, -1.4));
  CHECK(roots[2] == cplx(1.6));
  CHECK(pack(roots, t) == theta);

  auto c = RootTemplate::parse("c,r");
  CHECK(pack(unpack(std::vector<double>{3.1, 0.9, 2.1}, c, Boundary::Open), c) == std::vector<double>{3.1, 0.9, 2.1});
  CHECK_THROWS_AS(unpack(std::vector<double>{1.0}, c, Boundary::Open), TemplateMismatch);
  CHECK_THROWS_AS(pack({{cplx(1, 1), 2.0}, Boundary::Closed}, RootTemplate::parse("r,r")), TemplateMismatch);
  CHECK_THROWS_AS(pack({{cplx(1, 1), cplx(1, 0.5)}, Boundary::Closed}, RootTemplate::parse("p")), TemplateMismatch);
  CHECK_THROWS_AS(pack({{1.0}, Boundary::Closed}, RootTemplate::parse("r,r")), TemplateMismatch);
}

TEST_CASE("nelder-mead on quadratic bowls") {
  auto one = minimize([](std::span<const double> x) { return (x[0] - 2) * (x[0] - 2); }, {0.0});
  CHECK(one.converged);
  CHECK(std::abs(one.theta[0] - 2) < 1e-5);

  const std::vector<double> c{1.0, -2.0, 0.5, 3.0};
  auto four = minimize(
      [&](std::span<const double> x) {
        double s = 0;
        for (std::size_t i = 0; i < c.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
        return s;
      },
      {0, 0, 0, 0});
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(four.theta[i] - c[i]) < 1e-4);

  // trace is the running best, ending at the returned value
  for (std::size_t i = 1; i < four.trace.size(); ++i) CHECK(four.trace[i].value <= four.trace[i - 1].value);
  CHECK(four.trace.back().value == four.value);

  OptimizerConfig capped;
  capped.max_iterations = 3;
  auto stopped = minimize([](std::span<const double> x) { return x[0] * x[0]; }, {5.0}, capped);
  CHECK_FALSE(stopped.converged);
  CHECK_THROWS_AS(minimize([](std::span<const double>) { return 0.0; }, {}), std::invalid_argument);
}

TEST_CASE("energy objective") {
  auto model = ChainModel::closed(2, 2.0);
  auto tmpl = RootTemplate::parse("r");
  auto f = make_objective(model, tmpl, Evaluator::exact(), VqeObjective::Energy, 0);
  auto r = minimize(f, {2.8});
  CHECK(r.theta[0] == doctest::Approx(pi).epsilon(1e-5));
  CHECK(r.value == doctest::Approx(-2.0).epsilon(1e-9));
  // repeated roots are penalized, not thrown
  auto f2 = make_objective(ChainModel::closed(4, 2.0), RootTemplate::parse("r,r"), Evaluator::exact(),
                           VqeObjective::Energy, 0);
  CHECK(f2(std::vector<double>{1.0, 1.0}) == kNullStatePenalty);
}

TEST_CASE("ground-state vqe") {
  auto closed = vqe_ground(ChainModel::closed(4, 2.0), 2, RootTemplate::parse("r,r"), Evaluator::exact(), {1.9, -1.9});
  CHECK(max_component_error(closed.roots, {1.9455, -1.9455}) < 1e-3);
  CHECK(closed.energy == doctest::Approx(-2.73205).epsilon(1e-5));
  CHECK(closed.sector_ground_energy == doctest::Approx(-2.73205).epsilon(1e-5));

  auto model = open_model(6);
  auto open = vqe_ground(model, 3, RootTemplate::parse("c,r,r"), Evaluator::exact(), {3.0, 0.8, 1.7, 2.4});
  auto truth = newton_solve(model, 3, {{cplx(3.14159, 0.916239), 1.82675, 2.47141}, Boundary::Open});
  CHECK(max_component_error(open.roots, truth.roots) < 1e-3);
  // the printed statevector column is itself ~3e-3 off the true roots
  CHECK(max_component_error(open.roots, {cplx(3.1419, 0.9131), 1.8266, 2.4712}) < 2e-2);

  CHECK_THROWS_AS(vqe_ground(model, 2, RootTemplate::parse("c,r,r"), Evaluator::exact(), {3.0, 0.8, 1.7, 2.4}),
                  TemplateMismatch);
  CHECK_THROWS_AS(vqe_ground(model, 3, RootTemplate::parse("c,r,r"), Evaluator::exact(), {3.0, 0.8}),
                  TemplateMismatch);
}

TEST_CASE("shot-based ground-state vqe") {
  auto r = vqe_ground(ChainModel::closed(2, 2.0), 1, RootTemplate::parse("r"), Evaluator::sampled(10000), {2.8}, {},
                      7);
  CHECK(std::abs(r.roots[0].real() - pi) < 0.05);
  CHECK(r.evaluator.to_string() == "shots:10000");
}

TEST_CASE("excited-state vqe") {
  auto pair = vqe_excited(ChainModel::closed(4, 2.0), 2, RootTemplate::parse("p"), Evaluator::exact(), {0.0, 0.8});
  CHECK(max_component_error(pair.roots, {cplx(0, 0.8314), cplx(0, -0.8314)}) < 1e-3);
  CHECK(pair.energy == doctest::Approx(0.732051).epsilon(1e-5));
  CHECK(pair.variance < 1e-8);

  auto single = vqe_excited(ChainModel::closed(3, 2.0), 1, RootTemplate::parse("r"), Evaluator::exact(), {2.0});
  CHECK(std::abs(single.roots[0].real() - 2.0943) < 1e-3);
  CHECK(single.energy == doctest::Approx(-1.0).epsilon(1e-6));

  auto open = vqe_excited(open_model(4), 3, RootTemplate::parse("c,r,c"), Evaluator::exact(),
                          {3.05, 0.85, 0.9, 0.05, 0.3});
  CHECK(max_component_error(open.roots, {cplx(3.1416, 0.9174), 0.9382, cplx(0, 0.2474)}) < 2e-2);
  CHECK(open.energy == doctest::Approx(-0.128194).epsilon(1e-5));
}

TEST_CASE("random restarts") {
  auto model = ChainModel::closed(2, 2.0);
  auto found = random_restart_driver(model, 1, RootTemplate::parse("r"), Evaluator::exact(), VqeObjective::Variance,
                                     20, {}, {}, 3);
  bool has_pi = false, has_zero = false;
  for (const auto& r : found) {
    if (r.variance > 1e-8) continue;
    if (std::abs(std::abs(r.roots[0].real()) - pi) < 1e-4) has_pi = r.energy == doctest::Approx(-2.0);
    if (std::abs(r.roots[0].real()) < 1e-4) has_zero = std::abs(r.energy) < 1e-8;
  }
  CHECK(has_pi);
  CHECK(has_zero);
  for (std::size_t i = 1; i < found.size(); ++i) CHECK(found[i - 1].final_objective <= found[i].final_objective);

  auto ground = random_restart_driver(ChainModel::closed(4, 2.0), 2, RootTemplate::parse("r,r"), Evaluator::exact(),
                                      VqeObjective::Energy, 8, {}, {}, 5);
  REQUIRE_FALSE(ground.empty());
  double lowest = ground.front().final_objective;
  for (const auto& r : ground) lowest = std::min(lowest, r.final_objective);
  CHECK(ground.front().final_objective <= lowest + 1e-6);

  SamplerSpec near;
  near.center = std::vector<double>{1.3, 2.7};
  near.radius = 0.1;
  auto excited = random_restart_driver(ChainModel::closed(6, 2.0), 2, RootTemplate::parse("r,r"), Evaluator::exact(),
                                       VqeObjective::Variance, 4, near, {}, 1);
  REQUIRE_FALSE(excited.empty());
  CHECK(max_component_error(excited.front().roots, {1.3776, 2.8109}) < 1e-3);

  CHECK_THROWS_AS(random_restart_driver(model, 1, RootTemplate::parse("r"), Evaluator::exact(),
                                        VqeObjective::Energy, 0, {}),
                  std::invalid_argument);
}

TEST_CASE("variational bound and variance sign") {
  for (const auto& [model, spec] : {std::pair{ChainModel::closed(4, 2.0), "r,r"}, std::pair{open_model(4), "c,r"}}) {
    auto tmpl = RootTemplate::parse(spec);
    const double e0 = sector_ground_energy(model, 2);
    auto energy = make_objective(model, tmpl, Evaluator::exact(), VqeObjective::Energy, 0);
    auto variance = make_objective(model, tmpl, Evaluator::exact(), VqeObjective::Variance, 0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> theta(tmpl.parameter_count());
      for (auto& x : theta) x = u(rng);
      if (spec[0] == 'c') theta[1] = 0.5 * theta[1];
      CHECK(energy(theta) >= e0 - 1e-9);
      CHECK(variance(theta) >= -1e-9);
    }
  }
}

TEST_CASE("fixed point at the true roots") {
  struct Case {
    ChainModel model;
    int m;
    const char* tmpl;
    std::vector<cplx> roots;
  };
  for (const auto& c : {Case{ChainModel::closed(4, 2.0), 2, "r,r", {1.94553, -1.94553}},
                        Case{ChainModel::closed(6, 2.0), 3, "r,r,r", {1.49862, -1.49862, 3.14159}},
                        Case{open_model(4), 2, "c,r", {cplx(3.14159, 0.91503), 2.11689}}}) {
    auto truth = newton_solve(c.model, c.m, {c.roots, c.model.boundary});
    auto tmpl = RootTemplate::parse(c.tmpl);
    auto aligned = align_roots(truth, c.roots);
    for (std::size_t j = 0; j < aligned.size(); ++j)
      if (tmpl.entries[j] == RootKind::Real) aligned[j] = aligned[j].real();
    auto theta0 = pack({aligned, c.model.boundary}, tmpl);
    auto r = vqe_ground(c.model, c.m, tmpl, Evaluator::exact(), theta0);
    CHECK(max_component_error(r.roots, truth.roots) < 1e-5);
    CHECK(r.final_objective == doctest::Approx(r.sector_ground_energy).epsilon(1e-8));
  }
}

TEST_CASE("reported roots do not depend on the gauge of theta0") {
  auto model = ChainModel::closed(4, 2.0);
  auto tmpl = RootTemplate::parse("r,r");
  auto base = vqe_ground(model, 2, tmpl, Evaluator::exact(), {1.8, -1.8});
  auto shifted = vqe_ground(model, 2, tmpl, Evaluator::exact(), {1.8 + 2 * pi, -1.8});
  auto swapped = vqe_ground(model, 2, tmpl, Evaluator::exact(), {-1.8, 1.8});
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(std::abs(base.roots[j] - shifted.roots[j]) < 1e-10);
    CHECK(std::abs(base.roots[j] - swapped.roots[j]) < 1e-10);
  }
}

TEST_CASE("determinism") {
  auto model = open_model(4);
  auto tmpl = RootTemplate::parse("c,r");
  auto a = vqe_ground(model, 2, tmpl, Evaluator::sampled(500), {3.0, 0.8, 2.0}, {}, 11);
  auto b = vqe_ground(model, 2, tmpl, Evaluator::sampled(500), {3.0, 0.8, 2.0}, {}, 11);
  REQUIRE(a.objective_trace.size() == b.objective_trace.size());
  for (std::size_t i = 0; i < a.objective_trace.size(); ++i) {
    CHECK(a.objective_trace[i].iteration == b.objective_trace[i].iteration);
    CHECK(a.objective_trace[i].value == b.objective_trace[i].value);
  }
  CHECK(a.theta == b.theta);
  CHECK(a.evaluations == b.evaluations);
}
