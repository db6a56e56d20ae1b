#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rhlab/contact_frame.hpp"

namespace rhlab {

inline double cot(double x) { return std::cos(x) / std::sin(x); }

/// Radii are kept away from the poles of cot/tan so curvature entries stay
/// below ~20 and residual magnitudes stay interpretable.
inline constexpr double kDefaultRadiusGuard = 0.05;

enum class ModelKind { A1, A2, HopfGeneric, NonHopf };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::A1: return "A1";
    case ModelKind::A2: return "A2";
    case ModelKind::HopfGeneric: return "HopfGeneric";
    case ModelKind::NonHopf: return "NonHopf";
  }
  return "?";
}

/// One shape-operator eigenvalue together with the basis indices of the
/// subspace that carries it. For the mixed span{xi, U} block of non-Hopf
/// models the two eigenvalues share the index pair {0, 1}.
struct SpectrumEntry {
  double value = 0.0;
  std::vector<int> indices;

  int multiplicity() const { return static_cast<int>(indices.size()); }
};

struct ModelParams {
  double alpha = 0.0;           ///< g(A xi, xi)
  std::optional<double> r;      ///< radius, radians (A1/A2)
  std::optional<int> n;         ///< tube core dimension (A2)
  std::optional<double> beta;   ///< non-Hopf tilt
  std::optional<int> u_index;   ///< basis index of the unit field U (non-Hopf)
  std::vector<SpectrumEntry> spectrum;
};

/// Pointwise model of a real hypersurface: an adapted frame plus a symmetric
/// shape operator prescribed on it. Immutable value object.
struct HypersurfaceModel {
  AlmostContactFrame frame;
  Matrix A;
  ModelKind kind = ModelKind::A1;
  ModelParams params;

  bool hopf() const { return kind != ModelKind::NonHopf; }
};

/// Raised when a requested principal curvature hits 2*lambda - alpha = 0.
/// That configuration cannot occur on a Hopf hypersurface, so it signals
/// invalid input rather than a geometric case.
struct MaedaSingularity : std::domain_error {
  explicit MaedaSingularity(double lambda, double alpha)
      : std::domain_error("hopf_model: 2*lambda - alpha = 0 at lambda = " +
                          std::to_string(lambda) + ", alpha = " + std::to_string(alpha)) {}
};

namespace detail {

inline void check_radius(double r, double r_min, const char* who) {
  if (!(r > r_min && r < M_PI_2 - r_min)) {
    throw std::domain_error(std::string(who) +
                            ": radius must lie in (r_min, pi/2 - r_min); curvatures diverge at the ends");
  }
}

/// Appends `value` on `indices`, merging with an existing entry when the
/// eigenvalue is bit-identical.
inline void add_spectrum(std::vector<SpectrumEntry>& entries, double value,
                         std::vector<int> indices) {
  for (auto& e : entries) {
    if (e.value == value) {
      e.indices.insert(e.indices.end(), indices.begin(), indices.end());
      return;
    }
  }
  entries.push_back(SpectrumEntry{value, std::move(indices)});
}

}  // namespace detail

/// Geodesic hypersphere of radius r: curvature 2cot(2r) on xi and cot(r)
/// on all of D.
inline HypersurfaceModel geodesic_sphere(double r, int m,
                                         double r_min = kDefaultRadiusGuard) {
  detail::check_radius(r, r_min, "geodesic_sphere");
  HypersurfaceModel mod;
  mod.frame = adapted_frame(m);
  mod.kind = ModelKind::A1;

  const double alpha = 2.0 * cot(2.0 * r);
  const double lam = cot(r);
  mod.A = Matrix::Zero(mod.frame.dim, mod.frame.dim);
  mod.A(0, 0) = alpha;
  std::vector<int> d_indices;
  for (int i = 1; i < mod.frame.dim; ++i) {
    mod.A(i, i) = lam;
    d_indices.push_back(i);
  }
  mod.params.alpha = alpha;
  mod.params.r = r;
  detail::add_spectrum(mod.params.spectrum, alpha, {0});
  detail::add_spectrum(mod.params.spectrum, lam, std::move(d_indices));
  return mod;
}

/// Tube of radius r around a totally geodesic CP^n: curvature 2cot(2r) on xi,
/// -tan(r) on a phi-invariant subspace of dimension 2n and cot(r) on the
/// complementary 2(m-1-n) dimensions. The -tan(r) eigenspace is assigned to
/// the first n planes; the residual scans are multiplicity-insensitive, so
/// the assignment cannot affect verdicts.
inline HypersurfaceModel tube_a2(double r, int n, int m,
                                 double r_min = kDefaultRadiusGuard) {
  detail::check_radius(r, r_min, "tube_a2");
  if (m < 3) throw std::domain_error("tube_a2: requires m >= 3");
  if (!(n > 0 && n < m - 1)) {
    throw std::domain_error("tube_a2: core dimension must satisfy 0 < n < m-1");
  }
  HypersurfaceModel mod;
  mod.frame = adapted_frame(m);
  mod.kind = ModelKind::A2;

  const double alpha = 2.0 * cot(2.0 * r);
  const double lam_tan = -std::tan(r);
  const double lam_cot = cot(r);
  mod.A = Matrix::Zero(mod.frame.dim, mod.frame.dim);
  mod.A(0, 0) = alpha;
  std::vector<int> tan_idx, cot_idx;
  for (int p = 0; p < mod.frame.plane_count(); ++p) {
    const auto [a, b] = mod.frame.plane(p);
    const double lam = (p < n) ? lam_tan : lam_cot;
    mod.A(a, a) = lam;
    mod.A(b, b) = lam;
    auto& idx = (p < n) ? tan_idx : cot_idx;
    idx.push_back(a);
    idx.push_back(b);
  }
  mod.params.alpha = alpha;
  mod.params.r = r;
  mod.params.n = n;
  detail::add_spectrum(mod.params.spectrum, alpha, {0});
  detail::add_spectrum(mod.params.spectrum, lam_tan, std::move(tan_idx));
  detail::add_spectrum(mod.params.spectrum, lam_cot, std::move(cot_idx));
  return mod;
}

/// Hopf model with A xi = alpha xi and prescribed principal curvatures on
/// phi-paired planes: a plane carrying lambda on X carries
/// mu = (alpha*lambda + 2) / (2*lambda - alpha) on phi X. `lambdas` lists
/// (lambda, plane multiplicity); multiplicities must sum to m - 1.
inline HypersurfaceModel hopf_model(
    int m, double alpha, const std::vector<std::pair<double, int>>& lambdas) {
  HypersurfaceModel mod;
  mod.frame = adapted_frame(m);
  mod.kind = ModelKind::HopfGeneric;

  int total = 0;
  for (const auto& [lam, mult] : lambdas) {
    (void)lam;
    if (mult <= 0) throw std::invalid_argument("hopf_model: multiplicities must be positive");
    total += mult;
  }
  if (total != m - 1) {
    throw std::invalid_argument("hopf_model: plane multiplicities must sum to m-1");
  }

  mod.A = Matrix::Zero(mod.frame.dim, mod.frame.dim);
  mod.A(0, 0) = alpha;
  mod.params.alpha = alpha;
  detail::add_spectrum(mod.params.spectrum, alpha, {0});

  int plane = 0;
  for (const auto& [lam, mult] : lambdas) {
    if (std::abs(2.0 * lam - alpha) <= 1e-8) throw MaedaSingularity(lam, alpha);
    const double mu = (alpha * lam + 2.0) / (2.0 * lam - alpha);
    for (int c = 0; c < mult; ++c, ++plane) {
      const auto [a, b] = mod.frame.plane(plane);
      mod.A(a, a) = lam;
      mod.A(b, b) = mu;
      detail::add_spectrum(mod.params.spectrum, lam, {a});
      detail::add_spectrum(mod.params.spectrum, mu, {b});
    }
  }
  return mod;
}

/// One prescribed principal-curvature mode on D_U. A phi-paired mode fills a
/// whole phi-invariant plane with eigenvalue lambda; an unpaired mode fills a
/// single basis direction, which lets the two halves of a plane carry
/// different eigenvalues for counterexample exploration.
struct DuMode {
  double lambda = 0.0;
  bool phi_paired = true;
};

/// Non-Hopf model: A xi = alpha xi + beta U with U = e_1, plus the forced
/// block AU = beta xi + ((beta^2-1)/alpha) U, A phiU = -(1/alpha) phiU, and
/// prescribed modes on D_U.
inline HypersurfaceModel nonhopf_model(int m, double alpha, double beta,
                                       const std::vector<DuMode>& du_modes) {
  if (m < 3) throw std::domain_error("nonhopf_model: requires m >= 3");
  if (std::abs(alpha) <= 1e-12) {
    throw std::domain_error("nonhopf_model: alpha = 0 leaves A phiU undefined");
  }
  if (std::abs(beta) <= 1e-12) {
    throw std::domain_error("nonhopf_model: beta = 0 makes the model Hopf");
  }
  HypersurfaceModel mod;
  mod.frame = adapted_frame(m);
  mod.kind = ModelKind::NonHopf;

  const int dim = mod.frame.dim;
  mod.A = Matrix::Zero(dim, dim);
  mod.A(0, 0) = alpha;
  mod.A(0, 1) = beta;
  mod.A(1, 0) = beta;
  mod.A(1, 1) = (beta * beta - 1.0) / alpha;
  mod.A(2, 2) = -1.0 / alpha;

  int cursor = 3;
  for (const auto& mode : du_modes) {
    if (mode.phi_paired) {
      if (cursor % 2 == 0 || cursor + 1 >= dim) {
        throw std::invalid_argument(
            "nonhopf_model: phi-paired mode does not align with a phi-invariant plane");
      }
      mod.A(cursor, cursor) = mode.lambda;
      mod.A(cursor + 1, cursor + 1) = mode.lambda;
      detail::add_spectrum(mod.params.spectrum, mode.lambda, {cursor, cursor + 1});
      cursor += 2;
    } else {
      if (cursor >= dim) {
        throw std::invalid_argument("nonhopf_model: too many D_U modes");
      }
      mod.A(cursor, cursor) = mode.lambda;
      detail::add_spectrum(mod.params.spectrum, mode.lambda, {cursor});
      cursor += 1;
    }
  }
  if (cursor != dim) {
    throw std::invalid_argument("nonhopf_model: D_U modes must fill 2(m-2) dimensions");
  }

  // Eigenvalues of the mixed span{xi, U} block, recorded on the shared pair.
  const double a11 = alpha, a22 = (beta * beta - 1.0) / alpha;
  const double mean = 0.5 * (a11 + a22);
  const double disc = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + beta * beta);
  detail::add_spectrum(mod.params.spectrum, mean - disc, {0, 1});
  detail::add_spectrum(mod.params.spectrum, mean + disc, {0, 1});
  detail::add_spectrum(mod.params.spectrum, -1.0 / alpha, {2});

  mod.params.alpha = alpha;
  mod.params.beta = beta;
  mod.params.u_index = 1;
  return mod;
}

/// Type (A) test: the shape operator commutes with phi exactly on types A1/A2.
/// Returns (is_type_a, max |phi A - A phi|).
inline std::pair<bool, double> classify_type_a(const HypersurfaceModel& mod,
                                               double tol = kIdentityTol) {
  const Matrix c = mod.frame.phi * mod.A - mod.A * mod.frame.phi;
  const double residual = c.cwiseAbs().maxCoeff();
  return {residual <= tol, residual};
}

}  // namespace rhlab
