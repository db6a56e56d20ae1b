#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace rhlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Absolute tolerance for the pointwise identity checks (dim <= ~31,
/// entries O(1)-O(1e2), so double precision leaves plenty of margin).
inline constexpr double kIdentityTol = 1e-10;

/// Orthonormal frame at one point of a real hypersurface of CP^m carrying
/// the almost contact metric structure (phi, xi, eta, g).
///
/// Basis layout is fixed: e_0 = xi, followed by the phi-invariant planes
/// (e_1, e_2 = phi e_1), (e_3, e_4 = phi e_3), ... spanning the holomorphic
/// distribution D = xi-perp. The frame is immutable after construction and
/// safe to share across threads.
struct AlmostContactFrame {
  int m = 0;     ///< complex dimension of the ambient space
  int dim = 0;   ///< tangent dimension, 2m - 1
  Matrix basis;  ///< columns e_0..e_{dim-1}; identity for the adapted frame
  Matrix phi;    ///< structure tensor in basis coordinates
  Vector xi;     ///< Reeb vector
  Vector eta;    ///< coordinates of the covector eta = g(., xi)
  Matrix g;      ///< metric; identity in an orthonormal frame

  int plane_count() const { return m - 1; }

  /// Index pair (a, b) of the i-th phi-invariant plane in D; phi e_a = e_b.
  std::pair<int, int> plane(int i) const { return {2 * i + 1, 2 * i + 2}; }
};

/// Max deviations of the four structure identities, measured over the
/// frame's own basis vectors. All four are exactly zero for adapted_frame().
struct ContactResiduals {
  double phi_square = 0.0;  ///< max |phi^2 X + X - eta(X) xi|
  double eta_xi = 0.0;      ///< |eta(xi) - 1|
  double metric = 0.0;      ///< max |g(phi X, phi Y) - g(X,Y) + eta(X)eta(Y)|
  double phi_xi = 0.0;      ///< max |phi xi|

  double max() const {
    return std::max(std::max(phi_square, eta_xi), std::max(metric, phi_xi));
  }
};

/// Builds the adapted frame in dimension 2m-1 with integer entries.
/// Throws std::domain_error for m < 2.
inline AlmostContactFrame adapted_frame(int m) {
  if (m < 2) {
    throw std::domain_error("adapted_frame: ambient complex dimension must be >= 2");
  }
  AlmostContactFrame f;
  f.m = m;
  f.dim = 2 * m - 1;
  f.basis = Matrix::Identity(f.dim, f.dim);
  f.g = Matrix::Identity(f.dim, f.dim);
  f.xi = Vector::Zero(f.dim);
  f.xi(0) = 1.0;
  f.eta = f.xi;
  f.phi = Matrix::Zero(f.dim, f.dim);
  for (int i = 0; i < f.plane_count(); ++i) {
    const auto [a, b] = f.plane(i);
    f.phi(b, a) = 1.0;   // phi e_a = e_b
    f.phi(a, b) = -1.0;  // phi e_b = -e_a
  }
  return f;
}

/// Evaluates the structure identities on the stored basis. eta is recomputed
/// as g(., xi) so deliberately corrupted frames report honest residuals.
inline ContactResiduals contact_residuals(const AlmostContactFrame& f) {
  ContactResiduals res;
  const auto eta_of = [&](const Vector& v) { return f.xi.dot(f.g * v); };

  res.eta_xi = std::abs(eta_of(f.xi) - 1.0);
  res.phi_xi = (f.phi * f.xi).cwiseAbs().maxCoeff();

  for (int i = 0; i < f.basis.cols(); ++i) {
    const Vector x = f.basis.col(i);
    const Vector v = f.phi * (f.phi * x) + x - eta_of(x) * f.xi;
    res.phi_square = std::max(res.phi_square, v.cwiseAbs().maxCoeff());
    for (int j = 0; j < f.basis.cols(); ++j) {
      const Vector y = f.basis.col(j);
      const double d = (f.phi * x).dot(f.g * (f.phi * y)) - x.dot(f.g * y) +
                       eta_of(x) * eta_of(y);
      res.metric = std::max(res.metric, std::abs(d));
    }
  }
  return res;
}

}  // namespace rhlab
