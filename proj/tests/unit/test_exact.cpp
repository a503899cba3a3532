#include <doctest.h>

#include <algorithm>

#include "bethe_vqe/exact.hpp"

using namespace bethe_vqe;

TEST_CASE("sector matrices") {
  auto m = sector_matrix(ChainModel::closed(2, 2.0), 1);
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0).real() == doctest::Approx(-1.0));
  CHECK(m(0, 1).real() == doctest::Approx(1.0));
  CHECK(sector_matrix(ChainModel::closed(4, 2.0), 0).rows() == 1);
  CHECK(sector_matrix(ChainModel::closed(6, 2.0), 3).rows() == 20);
  auto open = sector_matrix(ChainModel::open(4, 0.5, 3.0, 0.3), 2);
  CHECK((open - open.adjoint()).norm() < 1e-14);
}

TEST_CASE("sector eigenvalues") {
  auto s = eigenvalues(ChainModel::closed(2, 2.0), 1);
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(s.eigenvalues[0] == doctest::Approx(-2.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sector_ground_energy(ChainModel::closed(4, 2.0), 2) == doctest::Approx(-2.73205).epsilon(1e-5));
  CHECK(sector_ground_energy(ChainModel::closed(6, 2.0), 3) == doctest::Approx(-3.85577).epsilon(1e-5));
  CHECK(sector_ground_energy(ChainModel::open(4, 0.5, 3.0, 0.3), 2) == doctest::Approx(-1.76803).epsilon(1e-5));
  CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  CHECK_FALSE(s.eigenvectors.has_value());
  CHECK(eigenvalues(ChainModel::closed(4, 2.0), 2, true).eigenvectors->cols() == 6);
  CHECK_THROWS_AS(eigenvalues(ChainModel::closed(4, 2.0), 5), std::invalid_argument);
}

TEST_CASE("eigen residual") {
  auto model = ChainModel::closed(4, 2.0);
  auto h = build_hamiltonian(model);
  CHECK(eigen_residual(reference_state(4, 0), h) < 1e-14);
  CHECK(eigen_residual(bethe_state(model, {{1.0, -0.3}, Boundary::Closed}), h) > 1e-2);
}

TEST_CASE("up-down duality of the closed spectrum") {
  for (int length : {4, 5, 6})
    for (int m = 0; m <= length; ++m) {
      auto a = eigenvalues(ChainModel::closed(length, 2.0), m).eigenvalues;
      auto b = eigenvalues(ChainModel::closed(length, 2.0), length - m).eigenvalues;
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
    }
}

TEST_CASE("sectors cover the dense spectrum") {
  for (const auto& model : {ChainModel::closed(5, 2.0), ChainModel::open(5, 0.5, 3.0, 0.3)}) {
    std::vector<double> all;
    for (int m = 0; m <= model.length; ++m) {
      auto e = eigenvalues(model, m).eigenvalues;
      all.insert(all.end(), e.begin(), e.end());
    }
    std::sort(all.begin(), all.end());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_dense_matrix(build_hamiltonian(model)));
    REQUIRE(all.size() == static_cast<std::size_t>(solver.eigenvalues().size()));
    for (std::size_t i = 0; i < all.size(); ++i)
      CHECK(all[i] == doctest::Approx(solver.eigenvalues()(i)).epsilon(1e-10));
  }
}

TEST_CASE("sector dimension guard") {
  CHECK_THROWS(sector_matrix(ChainModel::closed(16, 2.0), 8));
}
