#pragma once

// Pointwise model of an n-dimensional totally real submanifold of a Kaehler
// manifold of complex dimension n.
//
// The second fundamental form is stored as h[k][i][j] = g(sigma(e_i,e_j), Je_k)
// for an orthonormal tangent frame {e_i}; total symmetry of h encodes
// sigma(X,Y) = J A_{JX} Y. The normal curvature is never stored: it acts by
// R_perp(X,Y) JZ = J R(X,Y) Z.

#include <optional>
#include <vector>

#include "kahler/ambient.hpp"
#include "kahler/tensor.hpp"

namespace kahler {

class SubmanifoldPoint {
 public:
  /// Throws std::invalid_argument unless the frame has n vectors that are
  /// g-orthonormal and totally real (g(e_i, Je_j) = 0) within 1e-10, n >= 2,
  /// and h is n-dimensional. An intrinsic `fixture` replaces the Gauss
  /// equation output and must be curvature-like.
  SubmanifoldPoint(KaehlerCurvature ambient, std::vector<Vector> frame, SymmetricCubic h,
                   std::optional<QuadTensor> fixture = std::nullopt);

  int n() const noexcept { return static_cast<int>(frame_.size()); }
  const KaehlerCurvature& ambient() const noexcept { return ambient_; }
  const AmbientSpace& space() const noexcept { return ambient_.space(); }
  const std::vector<Vector>& frame() const noexcept { return frame_; }
  const SymmetricCubic& h() const noexcept { return h_; }
  const std::optional<QuadTensor>& fixture() const noexcept { return fixture_; }
  bool is_fixture() const noexcept { return fixture_.has_value(); }

  /// sum_i c_i e_i
  Vector tangent_to_ambient(const Vector& coords) const;
  /// sum_k c_k J e_k
  Vector normal_to_ambient(const Vector& coords) const;

 private:
  KaehlerCurvature ambient_;
  std::vector<Vector> frame_;
  SymmetricCubic h_;
  std::optional<QuadTensor> fixture_;
};

/// Gram-Schmidt with one re-orthogonalization pass. Throws
/// std::invalid_argument when a vector's residual norm falls below 1e-8.
std::vector<Vector> orthonormalize(const AmbientSpace& space, std::vector<Vector> vectors);

/// A_k[i][j] = h[k][i][j], one matrix per normal direction Je_k.
std::vector<Matrix> shape_operators(const SubmanifoldPoint& p);

struct MeanCurvature {
  Vector normal;  // H in ambient coordinates
  Vector jh;      // g(JH, e_l)
  double length = 0.0;
};

MeanCurvature mean_curvature(const SubmanifoldPoint& p);

struct IntrinsicGeometry {
  QuadTensor r;
  Matrix ricci;
  double scalar = 0.0;
  std::optional<QuadTensor> weyl;  // n > 3 only
  Spectrum spectrum;
  Vector h_normal;
  Vector jh;
  bool from_fixture = false;

  int n() const noexcept { return static_cast<int>(ricci.dim()); }
};

/// R(e_i,e_j,e_k,e_l) = R~(e_i,e_j,e_k,e_l) + g([A_i, A_j] e_k, e_l).
QuadTensor gauss_tensor(const SubmanifoldPoint& p);
/// R~ restricted to the tangent frame.
QuadTensor restricted_ambient(const SubmanifoldPoint& p);

IntrinsicGeometry gauss_intrinsic(const SubmanifoldPoint& p, double eigen_tol = 1e-12);

/// C = R - phi(S)/(n-2) + tau/(2(n-1)(n-2)) phi(g). Throws
/// std::invalid_argument for n <= 3.
QuadTensor weyl_tensor(const QuadTensor& r, const Matrix& g);
QuadTensor weyl(const IntrinsicGeometry& geom);

/// The tangent endomorphism R(e_i, e_j): entry (l, k) = R(e_i, e_j, e_k, e_l).
Matrix curvature_operator(const QuadTensor& r, std::size_t i, std::size_t j);

/// J(R(e_i,e_j) Z) in ambient coordinates, Z given in frame coordinates.
Vector normal_curvature_action(const SubmanifoldPoint& p, const IntrinsicGeometry& geom,
                               std::size_t i, std::size_t j, const Vector& z);

class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SemiparallelDefect {
  double componentwise = 0.0;  // R(X,Y)A_Z U - A_Z R(X,Y)U - A_U R(X,Y)Z
  double rbar_sigma = 0.0;     // (Rbar(X,Y).sigma)(Z,U), normal-valued
};

/// Max over basis 4-tuples along two evaluation paths. Throws
/// ConsistencyError when they differ by more than `consistency_tol`.
SemiparallelDefect semiparallel_defect(const SubmanifoldPoint& p, const IntrinsicGeometry& geom,
                                       double consistency_tol = 1e-10);

/// max_{i<j} |R(e_i,e_j) JH|
double mc_semiparallel_defect(const IntrinsicGeometry& geom);

/// max_{k<l} |A_k A_l - A_l A_k|
double commutativity_defect(const SubmanifoldPoint& p);

}  // namespace kahler
