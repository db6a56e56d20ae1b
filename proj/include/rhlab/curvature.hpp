#pragma once

#include <utility>
#include <vector>

#include "rhlab/models.hpp"

namespace rhlab {

/// Structure Jacobi operator R_xi with its eigen-decomposition. Eigenpairs
/// are sorted by ascending eigenvalue; each eigenvector is normalized so its
/// first coordinate above 1e-12 in magnitude is positive.
struct JacobiOperator {
  Matrix matrix;
  std::vector<std::pair<double, Vector>> eigenpairs;
};

/// Curvature tensor R(X,Y)Z of the hypersurface, from the Gauss equation of
/// an ambient space of constant holomorphic sectional curvature 4.
inline Vector gauss_curvature(const HypersurfaceModel& mod, const Vector& X,
                              const Vector& Y, const Vector& Z) {
  const int dim = mod.frame.dim;
  if (X.size() != dim || Y.size() != dim || Z.size() != dim) {
    throw std::invalid_argument("gauss_curvature: vector dimension mismatch");
  }
  const Matrix& phi = mod.frame.phi;
  const Matrix& A = mod.A;
  const Vector phiX = phi * X, phiY = phi * Y, phiZ = phi * Z;
  const Vector AX = A * X, AY = A * Y;

  return Y.dot(Z) * X - X.dot(Z) * Y + phiY.dot(Z) * phiX - phiX.dot(Z) * phiY -
         2.0 * phiX.dot(Y) * phiZ + AY.dot(Z) * AX - AX.dot(Z) * AY;
}

/// Closed form of the structure Jacobi operator,
///   R_xi X = X - eta(X) xi + g(A xi, xi) A X - g(A xi, X) A xi,
/// which agrees with gauss_curvature(., xi, xi) column by column.
inline Matrix structure_jacobi_matrix(const HypersurfaceModel& mod) {
  const int dim = mod.frame.dim;
  const Vector& xi = mod.frame.xi;
  const Vector axi = mod.A * xi;
  const double alpha = axi.dot(xi);
  return Matrix::Identity(dim, dim) - xi * xi.transpose() + alpha * mod.A -
         axi * axi.transpose();
}

inline JacobiOperator structure_jacobi(const HypersurfaceModel& mod) {
  JacobiOperator op;
  op.matrix = structure_jacobi_matrix(mod);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.matrix);
  for (int i = 0; i < op.matrix.rows(); ++i) {
    Vector v = solver.eigenvectors().col(i);
    for (int c = 0; c < v.size(); ++c) {
      if (std::abs(v(c)) > 1e-12) {
        if (v(c) < 0.0) v = -v;
        break;
      }
    }
    op.eigenpairs.emplace_back(solver.eigenvalues()(i), std::move(v));
  }
  return op;
}

}  // namespace rhlab
