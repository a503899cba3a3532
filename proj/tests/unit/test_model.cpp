#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "bethe_vqe/model.hpp"

using namespace bethe_vqe;

namespace {

Eigen::VectorXd dense_spectrum(const PauliHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense_matrix(h));
  return es.eigenvalues();
}

Eigen::MatrixXcd sz_matrix(int length) {
  const int dim = 1 << length;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) m(b, b) = 0.5 * (length - 2.0 * __builtin_popcount(b));
  return m;
}

}  // namespace

TEST_CASE("pauli string action and products") {
  auto xy = PauliString::from_string("XY");
  auto [target, phase] = xy.act(0b00);
  CHECK(target == 0b11);
  // X|0> = |1>, Y|0> = i|1>
  CHECK(std::abs(phase - cplx(0, 1)) < 1e-15);

  auto [p, s] = multiply(PauliString::from_string("X"), PauliString::from_string("Y"));
  CHECK(s.to_string() == "Z");
  CHECK(std::abs(p - cplx(0, 1)) < 1e-15);
  auto [p2, s2] = multiply(PauliString::from_string("ZX"), PauliString::from_string("ZX"));
  CHECK(s2.is_identity());
  CHECK(std::abs(p2 - 1.0) < 1e-15);
}

TEST_CASE("closed builder") {
  SUBCASE("L=2 double bond merges to three strings") {
    auto h = build_closed_hamiltonian(2, 2.0);
    CHECK(h.size() == 3);
    for (const auto& t : h.terms()) {
      const double expected = t.string.to_string() == "ZZ" ? 1.0 : 0.5;
      CHECK(t.coefficient.real() == doctest::Approx(expected));
      CHECK(t.coefficient.imag() == 0.0);
    }
    CHECK(dense_spectrum(h)(0) == doctest::Approx(-2.0).epsilon(1e-12));
  }
  SUBCASE("L=4 Delta=0 has no ZZ") {
    auto h = build_closed_hamiltonian(4, 0.0);
    h.prune(kPauliPruneThreshold);
    int zz = 0;
    for (const auto& t : h.terms())
      if (t.string.to_string().find('Z') != std::string::npos && std::abs(t.coefficient) > 0) ++zz;
    CHECK(zz == 0);
    CHECK(h.size() == 8);
  }
  SUBCASE("L=4 Delta=2 ground energy") {
    CHECK(build_closed_hamiltonian(4, 2.0).size() == 12);
    CHECK(dense_spectrum(build_closed_hamiltonian(4, 2.0))(0) == doctest::Approx(-2.73205).epsilon(1e-6));
  }
  CHECK_THROWS_AS(build_closed_hamiltonian(1, 1.0), std::invalid_argument);
}

TEST_CASE("open builder") {
  CHECK(build_open_hamiltonian(4, 0.5, 3.0, 0.3).size() == 3 * 3 + 2);
  CHECK(dense_spectrum(build_open_hamiltonian(2, 0.5, 3.0, 0.3))(0) == doctest::Approx(-0.965015).epsilon(1e-6));
  CHECK(dense_spectrum(build_open_hamiltonian(3, 0.5, 3.0, 0.3))(0) == doctest::Approx(-1.49506).epsilon(1e-6));

  auto free = dense_spectrum(build_open_hamiltonian(2, 0.0, 0.0, 0.0));
  CHECK(free(0) == doctest::Approx(-0.5));
  CHECK(free(1) == doctest::Approx(0.0));
  CHECK(free(2) == doctest::Approx(0.0));
  CHECK(free(3) == doctest::Approx(0.5));
  CHECK_THROWS_AS(build_open_hamiltonian(1, 0.5, 0, 0), std::invalid_argument);
}

TEST_CASE("dense matrix") {
  PauliHamiltonian z(1);
  z.add(1.0, "Z");
  auto m = to_dense_matrix(z);
  CHECK(m(0, 0) == cplx(1));
  CHECK(m(1, 1) == cplx(-1));
  CHECK(m(0, 1) == cplx(0));

  auto closed = to_dense_matrix(build_closed_hamiltonian(2, 2.0));
  CHECK(std::abs(closed.trace()) < 1e-14);
  CHECK((closed - closed.adjoint()).norm() == 0.0);

  // site 1 is the most significant bit: Z_1 on |10> (index 2) gives -1
  PauliHamiltonian z1(2);
  z1.add(1.0, "ZI");
  CHECK(to_dense_matrix(z1)(2, 2) == cplx(-1));
  CHECK(to_dense_matrix(z1)(1, 1) == cplx(1));

  // dense columns agree with the string action on every basis vector
  auto open = build_open_hamiltonian(2, 0.5, 3.0, 0.3);
  auto dense = to_dense_matrix(open);
  for (int b = 0; b < 4; ++b) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(4);
    e(b) = 1.0;
    CHECK((apply_hamiltonian(open, e) - dense.col(b)).norm() < 1e-15);
  }
  // hand values: |00> has Delta/4 + (h + h')/4
  CHECK(dense(0, 0).real() == doctest::Approx(0.125 + 0.825));
  CHECK(dense(1, 2).real() == doctest::Approx(0.5));

  PauliHamiltonian big(kDenseLengthGuard + 1);
  CHECK_THROWS(to_dense_matrix(big));
}

TEST_CASE("squaring") {
  PauliHamiltonian xx(2);
  xx.add(1.0, "XX");
  auto sq = square_hamiltonian(xx);
  REQUIRE(sq.size() == 1);
  CHECK(sq.terms()[0].string.is_identity());
  CHECK(sq.terms()[0].coefficient == cplx(1));

  PauliHamiltonian scalar(3);
  scalar.add(2.5, "III");
  CHECK(square_hamiltonian(scalar).terms()[0].coefficient.real() == doctest::Approx(6.25));

  for (int length = 2; length <= 6; ++length) {
    for (auto h : {build_closed_hamiltonian(length, 2.0), build_open_hamiltonian(length, 0.5, 3.0, 0.3)}) {
      auto dense = to_dense_matrix(h);
      auto sq = square_hamiltonian(h);
      CHECK((to_dense_matrix(sq) - dense * dense).cwiseAbs().maxCoeff() < 1e-10);
      for (const auto& t : sq.terms()) CHECK(t.coefficient.imag() == 0.0);
    }
  }
}

TEST_CASE("symmetries") {
  for (int length = 2; length <= 6; ++length) {
    auto closed = to_dense_matrix(build_closed_hamiltonian(length, 2.0));
    auto open = to_dense_matrix(build_open_hamiltonian(length, 0.5, 3.0, 0.3));
    CHECK(closed == closed.adjoint());
    CHECK(open == open.adjoint());
    auto sz = sz_matrix(length);
    CHECK((closed * sz - sz * closed).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((open * sz - sz * open).cwiseAbs().maxCoeff() < 1e-12);

    PauliHamiltonian c(length);
    c.add(1.0, std::string(length, 'X'));
    auto cm = to_dense_matrix(c);
    CHECK((cm * closed * cm - closed).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sector basis") {
  CHECK(sector_basis(2, 1) == std::vector<std::uint64_t>{1, 2});
  CHECK(sector_basis(4, 2).size() == 6);
  auto b = sector_basis(6, 3);
  CHECK(b.size() == 20);
  for (auto w : b) CHECK(__builtin_popcountll(w) == 3);
  CHECK(std::is_sorted(b.begin(), b.end()));
  CHECK(sector_basis(3, 0) == std::vector<std::uint64_t>{0});
  CHECK_THROWS_AS(sector_basis(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(sector_basis(3, -1), std::invalid_argument);
  CHECK(binomial(6, 3) == 20);
}
