#include <doctest.h>

#include <numbers>

#include "bethe_vqe/betheq.hpp"

using namespace bethe_vqe;
using std::numbers::pi;

namespace {

ChainModel open_model(int length) { return ChainModel::open(length, 0.5, 3.0, 0.3); }

RootVector closed_roots(std::vector<cplx> k) { return {std::move(k), Boundary::Closed}; }
RootVector open_roots(std::vector<cplx> k) { return {std::move(k), Boundary::Open}; }

}  // namespace

TEST_CASE("closed residuals") {
  for (int length : {2, 3, 5, 8})
    for (double delta : {0.0, 0.5, 2.0})
      CHECK(residual_closed(closed_roots({2 * pi / length}), length, delta).norm() < 1e-13);
  // printed five-decimal roots sit close to, but not on, the solution
  CHECK(residual_closed(closed_roots({1.94553, -1.94553}), 4, 2.0).norm() < 1e-3);
  CHECK(residual_closed(closed_roots({1.49862, -1.49862, 3.14159}), 6, 2.0).norm() < 1e-3);
  auto solved = newton_solve(ChainModel::closed(6, 2.0), 3, closed_roots({1.49862, -1.49862, 3.14159}));
  CHECK(residual_closed(solved, 6, 2.0).norm() < 1e-10);
  CHECK(residual_closed(closed_roots({1.0, -0.3}), 4, 2.0).norm() > 1e-2);
}

TEST_CASE("open residuals") {
  CHECK(residual_open(open_roots({cplx(3.14159, 0.882174)}), open_model(2)).norm() < 1e-4);
  CHECK(residual_open(open_roots({cplx(3.14159, 0.91503), 2.11689}), open_model(4)).norm() < 1e-2);
  CHECK(scaled_residual(open_model(4), open_roots({cplx(3.14159, 0.91503), 2.11689})).norm() < 1e-2);
  auto solved = newton_solve(open_model(4), 2, open_roots({cplx(3.14159, 0.91503), 2.11689}));
  CHECK(scaled_residual(open_model(4), solved).norm() < 1e-10);
  for (cplx k : {cplx(0.7), cplx(1.3, 0.4), cplx(2.9, -0.2)}) {
    const double a = residual_open(open_roots({k}), open_model(4)).norm();
    const double b = residual_open(open_roots({-k}), open_model(4)).norm();
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("residual gauge invariance") {
  auto closed = ChainModel::closed(6, 2.0);
  const auto kc = closed_roots({0.4, cplx(1.1, 0.3), -2.0});
  auto shifted = kc;
  shifted[0] += 2 * pi;
  shifted[2] -= 4 * pi;
  CHECK(residual(closed, shifted).norm() == doctest::Approx(residual(closed, kc).norm()).epsilon(1e-10));
  CHECK(residual(closed, canonicalize(shifted)).norm() ==
        doctest::Approx(residual(closed, kc).norm()).epsilon(1e-10));

  auto open = open_model(5);
  const auto ko = open_roots({cplx(3.0, 0.8), 0.6, cplx(1.2, 0.2)});
  auto reflected = ko;
  reflected[1] = -reflected[1] + 2 * pi;
  CHECK(residual(open, canonicalize(reflected)).norm() == doctest::Approx(residual(open, ko).norm()).epsilon(1e-10));
}

TEST_CASE("newton") {
  auto r1 = newton_solve(ChainModel::closed(2, 2.0), 1, closed_roots({3.0}));
  CHECK(r1[0].real() == doctest::Approx(pi).epsilon(1e-10));

  auto r2 = newton_solve(ChainModel::closed(4, 2.0), 2, closed_roots({1.9, -1.9}));
  CHECK(r2[0].real() == doctest::Approx(-1.94553).epsilon(1e-6));
  CHECK(r2[1].real() == doctest::Approx(1.94553).epsilon(1e-6));

  auto r3 = newton_solve(ChainModel::closed(6, 2.0), 3, closed_roots({1.5, -1.5, 3.1}));
  CHECK(max_component_error(r3, {1.49862, -1.49862, 3.14159}) < 5e-6);

  auto r5 = newton_solve(open_model(5), 3, open_roots({cplx(3.1, 0.9), 1.5, 2.3}));
  CHECK(max_component_error(r5, {cplx(3.14159, 0.916011), 1.49569, 2.31576}) < 5e-6);

  CHECK_THROWS_AS(newton_solve(ChainModel::closed(4, 2.0), 2, closed_roots({1.0, 1.0})), RepeatedRoots);
  CHECK_THROWS_AS(newton_solve(ChainModel::closed(4, 2.0), 3, closed_roots({1.0, 1.0})), std::invalid_argument);
}

TEST_CASE("log iteration agrees with newton") {
  struct Case {
    int length;
    std::vector<double> numbers;
    std::vector<cplx> printed;
  };
  for (const auto& c : {Case{2, {1}, {pi}}, Case{4, {1, -1}, {1.94553, -1.94553}},
                        Case{6, {1, -1, 3}, {1.49862, -1.49862, 3.14159}}}) {
    const int m = static_cast<int>(c.numbers.size());
    auto log_roots = iterate_log_closed(c.length, m, 2.0, c.numbers);
    auto newton = newton_solve(ChainModel::closed(c.length, 2.0), m, RootVector{c.printed, Boundary::Closed});
    CHECK(max_component_error(log_roots, newton.roots) < 1e-10);
    CHECK(max_component_error(log_roots, c.printed) < 5e-6);
  }
  CHECK_THROWS_AS(iterate_log_closed(4, 2, 2.0, {1}), std::invalid_argument);
}

TEST_CASE("canonicalize") {
  auto c = canonicalize(closed_roots({3 * pi + 0.1}));
  CHECK(c[0].real() == doctest::Approx(-pi + 0.1));
  CHECK(canonicalize(open_roots({-1.5}))[0].real() == doctest::Approx(1.5));
  auto sorted = canonicalize(closed_roots({2.0, -2.0, 0.5}));
  CHECK(sorted[0].real() == -2.0);
  CHECK(sorted[1].real() == 0.5);
  CHECK(sorted[2].real() == 2.0);

  // -pi maps to pi
  CHECK(canonicalize(closed_roots({-pi}))[0].real() == doctest::Approx(pi));
  // open edges prefer Im >= 0
  auto zero_edge = canonicalize(open_roots({cplx(0, -0.2264)}));
  CHECK(zero_edge[0].imag() == doctest::Approx(0.2264));
  auto pi_edge = canonicalize(open_roots({cplx(pi, -0.9)}));
  CHECK(pi_edge[0].real() == doctest::Approx(pi));
  CHECK(pi_edge[0].imag() == doctest::Approx(0.9));
  // negative zero is cleaned up
  CHECK(!std::signbit(canonicalize(open_roots({cplx(-0.0, 0.3)}))[0].real()));
  // conjugate pair with equal real parts ordered by imaginary part
  auto pair = canonicalize(closed_roots({cplx(1e-17, 0.8), cplx(-1e-17, -0.8)}));
  CHECK(pair[0].imag() < 0);
}

TEST_CASE("classify") {
  CHECK(classify(closed_roots({pi, pi}), ChainModel::closed(4, 2.0)).repeated_roots);
  CHECK(classify(open_roots({1.0, -1.0}), open_model(4)).repeated_roots);
  CHECK_FALSE(classify(closed_roots({1.0, -1.0}), ChainModel::closed(4, 2.0)).repeated_roots);
  auto t3 = classify(closed_roots({cplx(0.244998, 1.41247), cplx(0.244998, -1.41247), 1.6044}),
                     ChainModel::closed(6, 2.0));
  CHECK_FALSE(t3.repeated_roots);
  CHECK(classify(canonicalize(closed_roots({0.3, 2.0})), ChainModel::closed(4, 2.0)).is_canonical);
  CHECK_FALSE(classify(closed_roots({4.0, 2.0}), ChainModel::closed(4, 2.0)).is_canonical);
}

TEST_CASE("root comparison") {
  CHECK(std::abs(nearest_equivalent(cplx(-3.1), cplx(3.1), Boundary::Closed) - cplx(-3.1 + 2 * pi)) < 1e-15);
  CHECK(std::abs(nearest_equivalent(cplx(-1.2, 0.1), cplx(1.2, -0.1), Boundary::Open) - cplx(1.2, -0.1)) < 1e-15);
  const RootVector found{{cplx(2.0), cplx(-1.0)}, Boundary::Closed};
  CHECK(max_component_error(found, {-1.0, 2.0 + 2 * pi}) < 1e-14);
  const RootVector off{{cplx(1.0), cplx(-1.0)}, Boundary::Closed};
  CHECK(relative_root_error(off, {1.1, -1.0}) == doctest::Approx(0.1 / std::sqrt(1.21 + 1.0)));
  CHECK_THROWS_AS(max_component_error(off, {1.0}), DimensionMismatch);
}
