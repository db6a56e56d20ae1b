#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "rhlab/acceptance.hpp"

using namespace rhlab;

TEST_CASE("curvature collapses to the identity term when alpha = 0") {
  const HypersurfaceModel mod = geodesic_sphere(M_PI / 4.0, 2);
  Vector e1 = Vector::Zero(3);
  e1(1) = 1.0;
  const Vector out = gauss_curvature(mod, e1, mod.frame.xi, mod.frame.xi);
  CHECK((out - e1).norm() <= 1e-12);
}

TEST_CASE("holomorphic plane curvature is 4 + lambda^2") {
  // Frozen from expanding the seven-term formula by hand: at r = pi/4,
  // lambda = 1, the (e1, phi e1) plane returns 5 e1.
  const HypersurfaceModel mod = geodesic_sphere(M_PI / 4.0, 2);
  Vector e1 = Vector::Zero(3), pe1 = Vector::Zero(3);
  e1(1) = 1.0;
  pe1(2) = 1.0;
  const Vector out = gauss_curvature(mod, e1, pe1, pe1);
  CHECK((out - 5.0 * e1).norm() <= 1e-12);

  // Same computation at other radii against 4 + lambda^2.
  for (double r : {M_PI / 6.0, 0.9, 1.2}) {
    const HypersurfaceModel sphere = geodesic_sphere(r, 2);
    const double lam = cot(r);
    const Vector v = gauss_curvature(sphere, e1, pe1, pe1);
    CHECK((v - (4.0 + lam * lam) * e1).norm() <= 1e-12);
  }
}

TEST_CASE("R(X,X)Z vanishes by antisymmetry") {
  const HypersurfaceModel mod = tube_a2(0.7, 1, 3);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    const Vector x = oracle::random_vector(mod.frame.dim, rng);
    const Vector z = oracle::random_vector(mod.frame.dim, rng);
    CHECK(gauss_curvature(mod, x, x, z).norm() <= 1e-12);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const HypersurfaceModel mod = geodesic_sphere(0.6, 2);
  const Vector bad = Vector::Zero(5);
  CHECK_THROWS_AS(gauss_curvature(mod, bad, mod.frame.xi, mod.frame.xi),
                  std::invalid_argument);
}

TEST_CASE("sphere Jacobi spectrum is {0, cot^2 r}") {
  for (double r : {M_PI / 6.0, M_PI / 4.0, M_PI / 3.0, 0.8}) {
    const JacobiOperator op = structure_jacobi(geodesic_sphere(r, 3));
    const double expected = cot(r) * cot(r);
    CHECK(std::abs(op.eigenpairs.front().first) <= 1e-12);
    for (std::size_t i = 1; i < op.eigenpairs.size(); ++i) {
      CHECK(std::abs(op.eigenpairs[i].first - expected) <= 1e-12);
    }
  }
}

TEST_CASE("tube Jacobi spectrum at arccot 2 is {0, 0.25, 4}") {
  const JacobiOperator op = structure_jacobi(tube_a2(std::atan2(1.0, 2.0), 1, 3));
  REQUIRE(op.eigenpairs.size() == 5);
  CHECK(std::abs(op.eigenpairs[0].first) <= 1e-12);
  CHECK(std::abs(op.eigenpairs[1].first - 0.25) <= 1e-12);
  CHECK(std::abs(op.eigenpairs[2].first - 0.25) <= 1e-12);
  CHECK(std::abs(op.eigenpairs[3].first - 4.0) <= 1e-12);
  CHECK(std::abs(op.eigenpairs[4].first - 4.0) <= 1e-12);
}

TEST_CASE("Jacobi operator kills xi and stays symmetric") {
  for (const auto& mod : acceptance_zoo()) {
    const Matrix rxi = structure_jacobi(mod).matrix;
    CHECK((rxi * mod.frame.xi).norm() <= 1e-12);
    CHECK((rxi - rxi.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("non-Hopf forced block kills R_xi phiU") {
  const HypersurfaceModel mod = nonhopf_model(3, 2.0, 1.0, {{0.5, true}});
  const Matrix rxi = structure_jacobi(mod).matrix;
  CHECK(rxi.col(2).norm() <= 1e-14);  // phiU = e_2
}

TEST_CASE("closed form agrees with the curvature-tensor route on the zoo") {
  double worst = 0.0;
  for (const auto& mod : acceptance_zoo()) {
    const Matrix rxi = structure_jacobi(mod).matrix;
    for (int j = 0; j < mod.frame.dim; ++j) {
      const Vector y = mod.frame.basis.col(j);
      worst = std::max(worst, (rxi * y - oracle::r_xi_apply(mod, y)).norm());
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("curvature symmetries on random vectors") {
  std::mt19937_64 rng(17);
  for (const auto& mod : acceptance_zoo()) {
    for (int trial = 0; trial < 4; ++trial) {
      const Vector x = oracle::random_vector(mod.frame.dim, rng);
      const Vector y = oracle::random_vector(mod.frame.dim, rng);
      const Vector z = oracle::random_vector(mod.frame.dim, rng);
      const Vector w = oracle::random_vector(mod.frame.dim, rng);
      CHECK((gauss_curvature(mod, x, y, z) + gauss_curvature(mod, y, x, z)).norm() <=
            1e-10);
      CHECK(std::abs(gauss_curvature(mod, x, y, z).dot(w) +
                     gauss_curvature(mod, x, y, w).dot(z)) <= 1e-10);
      CHECK((gauss_curvature(mod, x, y, z) + gauss_curvature(mod, y, z, x) +
             gauss_curvature(mod, z, x, y))
                .norm() <= 1e-10);
    }
  }
}

TEST_CASE("Hopf planes carry R_xi eigenvalues 1 + alpha lambda") {
  const double alpha = 1.0;
  const HypersurfaceModel mod = hopf_model(3, alpha, {{0.0, 1}, {1.0, 1}});
  const Matrix rxi = structure_jacobi(mod).matrix;
  for (int i = 1; i < mod.frame.dim; ++i) {
    const double lam = mod.A(i, i);
    CHECK(std::abs(rxi(i, i) - (1.0 + alpha * lam)) <= 1e-12);
  }
}

TEST_CASE("eigenpairs are ascending with a fixed sign convention") {
  const JacobiOperator op = structure_jacobi(tube_a2(0.9, 1, 3));
  for (std::size_t i = 1; i < op.eigenpairs.size(); ++i) {
    CHECK(op.eigenpairs[i - 1].first <= op.eigenpairs[i].first + 1e-15);
  }
  for (const auto& [value, vec] : op.eigenpairs) {
    (void)value;
    for (int c = 0; c < vec.size(); ++c) {
      if (std::abs(vec(c)) > 1e-12) {
        CHECK(vec(c) > 0.0);
        break;
      }
    }
  }
}
