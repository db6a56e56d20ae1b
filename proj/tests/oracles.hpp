// Test-only oracles, kept independent of the implementation paths they
// check: the Cho/torsion operators are assembled term by term from their
// defining formulas, and the structure Jacobi action is routed through the
// full curvature tensor instead of the cached closed form.
#pragma once

#include <random>

#include "rhlab/curvature.hpp"

namespace oracle {

using rhlab::Matrix;
using rhlab::Vector;

inline Vector cho(const rhlab::HypersurfaceModel& mod, double k, const Vector& X,
                  const Vector& Y) {
  const Vector phiAX = mod.frame.phi * (mod.A * X);
  const double eta_y = mod.frame.xi.dot(Y);
  const double eta_x = mod.frame.xi.dot(X);
  return phiAX.dot(Y) * mod.frame.xi - eta_y * phiAX - k * eta_x * (mod.frame.phi * Y);
}

inline Vector torsion(const rhlab::HypersurfaceModel& mod, double k, const Vector& X,
                      const Vector& Y) {
  return cho(mod, k, X, Y) - cho(mod, k, Y, X);
}

inline Vector r_xi_apply(const rhlab::HypersurfaceModel& mod, const Vector& Y) {
  return rhlab::gauss_curvature(mod, Y, mod.frame.xi, mod.frame.xi);
}

inline Vector rxit(const rhlab::HypersurfaceModel& mod, double k, const Vector& X,
                   const Vector& Y) {
  return torsion(mod, k, X, r_xi_apply(mod, Y)) -
         r_xi_apply(mod, torsion(mod, k, X, Y));
}

struct Residuals {
  double sym = 0.0, skew = 0.0, vanish = 0.0;
  int sym_i = 0, sym_j = 0, skew_i = 0, skew_j = 0;
};

inline Residuals residuals(const rhlab::HypersurfaceModel& mod, double k) {
  const int dim = mod.frame.dim;
  Residuals res;
  std::vector<std::vector<Vector>> v(dim, std::vector<Vector>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      v[i][j] = rxit(mod, k, mod.frame.basis.col(i), mod.frame.basis.col(j));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double s = (v[i][j] - v[j][i]).norm();
      const double a = (v[i][j] + v[j][i]).norm();
      if (s > res.sym) {
        res.sym = s;
        res.sym_i = i;
        res.sym_j = j;
      }
      if (a > res.skew) {
        res.skew = a;
        res.skew_i = i;
        res.skew_j = j;
      }
      res.vanish = std::max(res.vanish, v[i][j].norm());
    }
  }
  return res;
}

inline Vector random_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
  return v;
}

inline Matrix random_orthonormal(int dim, std::mt19937_64& rng) {
  Matrix a(dim, dim);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = gauss(rng);
  return Eigen::HouseholderQR<Matrix>(a).householderQ();
}

}  // namespace oracle
