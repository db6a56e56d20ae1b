#pragma once

#include <algorithm>
#include <vector>

#include "rhlab/curvature.hpp"

namespace rhlab {

/// The k-th generalized Tanaka-Webster apparatus at a point: Cho operators,
/// torsion operators, and the commutator tensor
///   R_xiT(X,Y) = [T_X, R_xi] Y = T_X R_xi Y - R_xi T_X Y.
/// k is fixed per family, matching the "for some nonnull k" quantifier of the
/// conditions under study, and lets phi*A and R_xi be cached once.
class TorsionFamily {
 public:
  TorsionFamily(HypersurfaceModel model, double k)
      : model_(std::move(model)), k_(k) {
    if (std::abs(k) < 0.01) {
      throw std::domain_error("TorsionFamily: |k| >= 0.01 required (k = 0 is excluded)");
    }
    phi_a_ = model_.frame.phi * model_.A;
    r_xi_ = structure_jacobi_matrix(model_);
  }

  const HypersurfaceModel& model() const { return model_; }
  double k() const { return k_; }
  const Matrix& phi_a() const { return phi_a_; }
  const Matrix& r_xi() const { return r_xi_; }

 private:
  HypersurfaceModel model_;
  double k_;
  Matrix phi_a_;  // cached phi * A
  Matrix r_xi_;   // cached structure Jacobi matrix
};

/// Matrix of Y -> F_X Y = g(phi A X, Y) xi - eta(Y) phi A X - k eta(X) phi Y.
inline Matrix cho_operator(const TorsionFamily& tf, const Vector& X) {
  const Vector& xi = tf.model().frame.xi;
  const Vector w = tf.phi_a() * X;
  return xi * w.transpose() - w * xi.transpose() -
         tf.k() * xi.dot(X) * tf.model().frame.phi;
}

/// Matrix of Y -> T_X Y = F_X Y - F_Y X, antisymmetric in (X, Y).
inline Matrix torsion_operator(const TorsionFamily& tf, const Vector& X) {
  const auto& frame = tf.model().frame;
  const Vector& xi = frame.xi;
  const Vector w = tf.phi_a() * X;
  const Vector phiX = frame.phi * X;
  const Vector AphiX = tf.model().A * phiX;
  const double etaX = xi.dot(X);
  // F_Y X as a matrix in Y: g(phi A Y, X) xi - eta(X) phi A Y - k eta(Y) phi X,
  // with g(phi A Y, X) = -g(Y, A phi X).
  return (xi * w.transpose() - w * xi.transpose() - tf.k() * etaX * frame.phi) -
         (-xi * AphiX.transpose() - etaX * tf.phi_a() -
          tf.k() * phiX * xi.transpose());
}

/// R_xiT(X, Y) = T_X R_xi Y - R_xi T_X Y.
inline Vector rxit(const TorsionFamily& tf, const Vector& X, const Vector& Y) {
  const Matrix t = torsion_operator(tf, X);
  return t * (tf.r_xi() * Y) - tf.r_xi() * (t * Y);
}

struct WitnessPair {
  int i = 0;
  int j = 0;
};

/// Sup-norm residuals of the three conditions on R_xiT over ordered basis
/// pairs, with the lexicographically first argmax pair for each and the full
/// per-pair norm tables. sym measures failure of R_xiT(X,Y) = R_xiT(Y,X),
/// skew of R_xiT(X,Y) = -R_xiT(Y,X), vanish of R_xiT = 0; by the triangle
/// inequality vanish >= max(sym, skew) / 2.
struct ResidualReport {
  double sym_residual = 0.0;
  double skew_residual = 0.0;
  double vanish_residual = 0.0;
  WitnessPair sym_witness, skew_witness, vanish_witness;
  Matrix sym_table, skew_table, vanish_table;
  Matrix basis;  ///< orthonormal basis the scan was evaluated in
};

/// Evaluates the residuals over the columns of `basis` (must be orthonormal;
/// defaults to the adapted frame). A basis sup is a sound proxy for the
/// sup over the sphere: bilinearity bounds the gap by a factor of dim.
inline ResidualReport condition_residuals(const TorsionFamily& tf,
                                          const Matrix& basis) {
  const int dim = tf.model().frame.dim;
  ResidualReport rep;
  rep.basis = basis;
  rep.sym_table = Matrix::Zero(dim, dim);
  rep.skew_table = Matrix::Zero(dim, dim);
  rep.vanish_table = Matrix::Zero(dim, dim);

  std::vector<Matrix> comm(dim);  // [T_{b_i}, R_xi]
  for (int i = 0; i < dim; ++i) {
    const Matrix t = torsion_operator(tf, basis.col(i));
    comm[i] = t * tf.r_xi() - tf.r_xi() * t;
  }

  std::vector<std::vector<Vector>> v(dim, std::vector<Vector>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) v[i][j] = comm[i] * basis.col(j);

  const auto consider = [](double cand, int i, int j, double& best, WitnessPair& w) {
    if (cand > best) {
      best = cand;
      w = WitnessPair{i, j};
    }
  };
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double s = (v[i][j] - v[j][i]).norm();
      const double a = (v[i][j] + v[j][i]).norm();
      const double z = v[i][j].norm();
      rep.sym_table(i, j) = s;
      rep.skew_table(i, j) = a;
      rep.vanish_table(i, j) = z;
      consider(s, i, j, rep.sym_residual, rep.sym_witness);
      consider(a, i, j, rep.skew_residual, rep.skew_witness);
      consider(z, i, j, rep.vanish_residual, rep.vanish_witness);
    }
  }
  return rep;
}

inline ResidualReport condition_residuals(const TorsionFamily& tf) {
  return condition_residuals(tf, tf.model().frame.basis);
}

struct PredictorInapplicable : std::domain_error {
  PredictorInapplicable()
      : std::domain_error("typeA_residual_predictor: model is not of type (A)") {}
};

struct ResidualPrediction {
  double sym = 0.0;
  double skew = 0.0;
  double vanish = 0.0;
};

/// Closed-form residuals for type (A) models (phi A = A phi). Each principal
/// curvature lambda on D contributes |(lambda-k)(1+alpha*lambda)| through the
/// (xi, Y) pairs and |2*lambda|*|2+2*alpha*lambda| (sym) resp.
/// 2|lambda(1+alpha*lambda)| (vanish) through the in-plane (Y, phi Y) pairs.
inline ResidualPrediction typeA_residual_predictor(const TorsionFamily& tf,
                                                   double tol = kIdentityTol) {
  const auto& mod = tf.model();
  if (!classify_type_a(mod, tol).first) throw PredictorInapplicable();

  const double alpha = mod.params.alpha;
  const double k = tf.k();
  ResidualPrediction pred;
  for (const auto& entry : mod.params.spectrum) {
    if (std::find(entry.indices.begin(), entry.indices.end(), 0) !=
        entry.indices.end()) {
      continue;  // xi eigenvalue; only D curvatures enter
    }
    const double lam = entry.value;
    const double mixed = std::abs((lam - k) * (1.0 + alpha * lam));
    pred.skew = std::max(pred.skew, mixed);
    pred.sym = std::max(pred.sym,
                        std::max(mixed, std::abs(2.0 * lam) *
                                            std::abs(2.0 + 2.0 * alpha * lam)));
    pred.vanish = std::max(
        pred.vanish, std::max(mixed, 2.0 * std::abs(lam * (1.0 + alpha * lam))));
  }
  return pred;
}

/// Max residuals of the four parallelism identities of the connection
/// nabla + F: each vanishes identically once nabla_X xi = phi A X and
/// (nabla_X phi)Y = eta(Y) A X - g(A X, Y) xi are substituted, so anything
/// above rounding indicates a broken operator assembly.
struct ParallelismResiduals {
  double xi = 0.0;      ///< max ||phi A X + F_X xi||
  double phi = 0.0;     ///< max ||eta(Y) AX - g(AX,Y) xi + F_X(phi Y) - phi(F_X Y)||
  double metric = 0.0;  ///< max |g(F_X Y, Z) + g(Y, F_X Z)|
  double eta = 0.0;     ///< max |g(Y, phi A X) - g(F_X Y, xi)|

  double max() const {
    return std::max(std::max(xi, phi), std::max(metric, eta));
  }
};

inline ParallelismResiduals gtw_parallelism_residuals(const TorsionFamily& tf) {
  const auto& frame = tf.model().frame;
  const Matrix& A = tf.model().A;
  const Vector& xi = frame.xi;
  const int dim = frame.dim;
  ParallelismResiduals res;

  for (int i = 0; i < dim; ++i) {
    const Vector X = frame.basis.col(i);
    const Matrix f = cho_operator(tf, X);
    const Vector phiAX = tf.phi_a() * X;

    res.xi = std::max(res.xi, (phiAX + f * xi).norm());
    res.metric = std::max(res.metric, (f + f.transpose()).cwiseAbs().maxCoeff());
    res.eta = std::max(res.eta,
                       (phiAX - f.transpose() * xi).cwiseAbs().maxCoeff());

    const Vector AX = A * X;
    for (int j = 0; j < dim; ++j) {
      const Vector Y = frame.basis.col(j);
      const Vector d = xi.dot(Y) * AX - AX.dot(Y) * xi +
                       f * (frame.phi * Y) - frame.phi * (f * Y);
      res.phi = std::max(res.phi, d.norm());
    }
  }
  return res;
}

}  // namespace rhlab
