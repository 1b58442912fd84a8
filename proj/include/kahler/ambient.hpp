#pragma once

// Ambient Kaehler data at a point: metric/complex-structure pairs, the
// curvature of a product of two opposite constant holomorphic sectional
// curvature factors, and the Bochner tensor.
//
// Curvature convention throughout: R(x,y,z,u) = g(R(x,y)z, u), so the
// sectional curvature of an orthonormal pair is R(x,y,y,x).

#include <stdexcept>

#include "kahler/tensor.hpp"

namespace kahler {

class AmbientSpace {
 public:
  /// Validates J^2 = -Id, g(Jx,Jy) = g(x,y) and positive definiteness of g,
  /// each within 1e-12. Throws std::invalid_argument on failure.
  AmbientSpace(int n, Matrix g, Matrix j);

  int n() const noexcept { return n_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(2 * n_); }
  const Matrix& metric() const noexcept { return g_; }
  const Matrix& complex_structure() const noexcept { return j_; }

  Vector apply_j(const Vector& x) const { return j_.apply(x); }
  double inner(const Vector& x, const Vector& y) const { return kahler::inner(g_, x, y); }

 private:
  int n_;
  Matrix g_;
  Matrix j_;
};

/// g = Id on R^{2n}, J e_i = e_{n+i}, J e_{n+i} = -e_i. Requires 1 <= n <= 12.
AmbientSpace make_standard_space(int n);

/// (mu, k, F) with F = pi_1 - pi_2 the involution separating the factor of
/// holomorphic sectional curvature mu from the one with -mu.
class ProductModel {
 public:
  /// Explicit involution; k is read off the +1 eigenspace. Validates
  /// F^2 = Id, g-symmetry of F, FJ = JF (all within 1e-12) and mu != 0.
  ProductModel(AmbientSpace space, double mu, Matrix f);

  /// Factor one spans e_1..e_k and their J-images; 1 <= k <= n-1.
  static ProductModel canonical(AmbientSpace space, double mu, int k);
  /// F = Id, the single-factor limit k = n. Used only to calibrate against
  /// the constant holomorphic sectional curvature tensor.
  static ProductModel single_factor(AmbientSpace space, double mu);

  const AmbientSpace& space() const noexcept { return space_; }
  double mu() const noexcept { return mu_; }
  int k() const noexcept { return k_; }
  const Matrix& involution() const noexcept { return f_; }

 private:
  AmbientSpace space_;
  double mu_;
  int k_;
  Matrix f_;
};

/// Validated Kaehler curvature with its contractions.
class KaehlerCurvature {
 public:
  /// Throws SymmetryError unless `r` is curvature-like and satisfies
  /// R(x,y,z,u) = R(x,y,Jz,Ju), both relative to max-abs entry at 1e-12.
  KaehlerCurvature(AmbientSpace space, QuadTensor r);

  const AmbientSpace& space() const noexcept { return space_; }
  const QuadTensor& tensor() const noexcept { return r_; }
  const Matrix& ricci() const noexcept { return ricci_; }
  double scalar() const noexcept { return tau_; }

 private:
  AmbientSpace space_;
  QuadTensor r_;
  Matrix ricci_;
  double tau_;
};

/// Max-abs of R(x,y,z,u) - R(x,y,Jz,Ju) over basis slots.
double kaehler_symmetry_defect(const QuadTensor& r, const Matrix& j);

enum class ProductCurvatureSign {
  kCorrected,  // final term +2 g(x,Jy) g(JFz,u)
  kPrinted,    // final term -2 g(x,Jy) g(JFz,u)
};

/// The ten-term closed form mu/8 {...} of the product curvature. The printed
/// sign variant is not a Kaehler curvature and is returned raw.
QuadTensor product_curvature_tensor(const ProductModel& model,
                                    ProductCurvatureSign sign = ProductCurvatureSign::kCorrected);
KaehlerCurvature product_curvature(const ProductModel& model);

/// mu/4 [g(x,u)g(y,z) - g(x,z)g(y,u) + g(Jx,u)g(Jy,z) - g(Jx,z)g(Jy,u)
///       + 2 g(x,Jy) g(Jz,u)]
KaehlerCurvature constant_hsc_curvature(const AmbientSpace& space, double mu);

/// Block construction on the standard space: constant holomorphic sectional
/// curvature mu on the first k complex directions, -mu on the remaining
/// n-k, zero on mixed slots. 1 <= k <= n.
KaehlerCurvature direct_sum_curvature(int n, int k, double mu);

KaehlerCurvature flat_curvature(const AmbientSpace& space);

/// R - 1/(2(m+2)) (phi+psi)(S) + tau/(8(m+1)(m+2)) (phi+psi)(g), m = n.
QuadTensor bochner(const KaehlerCurvature& k);

/// R(x,Jx,Jx,x) / g(x,x)^2. Throws std::invalid_argument for x = 0.
double holomorphic_sectional(const KaehlerCurvature& k, const Vector& x);

}  // namespace kahler
