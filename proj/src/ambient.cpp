#include "kahler/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kahler {

namespace {

constexpr double kStructureTol = 1e-12;

double max_abs_diff(const Matrix& a, const Matrix& b) { return defect_norm(a - b); }

}  // namespace

// ---------------------------------------------------------------------------
// AmbientSpace

AmbientSpace::AmbientSpace(int n, Matrix g, Matrix j) : n_(n), g_(std::move(g)), j_(std::move(j)) {
  if (n < 1 || static_cast<std::size_t>(2 * n) > kMaxDimension) {
    throw std::invalid_argument("AmbientSpace: complex dimension " + std::to_string(n) +
                                " out of range");
  }
  const std::size_t d = dim();
  if (g_.dim() != d || j_.dim() != d) {
    throw DimensionError("AmbientSpace: metric and complex structure must be " +
                         std::to_string(d) + "x" + std::to_string(d));
  }
  if (!g_.is_symmetric()) throw std::invalid_argument("AmbientSpace: metric is not symmetric");
  if (!is_positive_definite(g_, kStructureTol)) {
    throw std::invalid_argument("AmbientSpace: metric is not positive definite");
  }
  const Matrix minus_id = -1.0 * Matrix::identity(d);
  if (max_abs_diff(j_ * j_, minus_id) > kStructureTol) {
    throw std::invalid_argument("AmbientSpace: J^2 != -Id");
  }
  // g(Jx, Jy) = (J^T G J)(x, y)
  if (max_abs_diff(j_.transposed() * g_ * j_, g_) > kStructureTol) {
    throw std::invalid_argument("AmbientSpace: metric is not J-invariant");
  }
}

AmbientSpace make_standard_space(int n) {
  if (n < 1 || n > 12) {
    throw std::invalid_argument("make_standard_space: n = " + std::to_string(n) +
                                " outside [1, 12]");
  }
  const std::size_t d = static_cast<std::size_t>(2 * n);
  Matrix j(d);
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < un; ++i) {
    j(un + i, i) = 1.0;   // J e_i = e_{n+i}
    j(i, un + i) = -1.0;  // J e_{n+i} = -e_i
  }
  return AmbientSpace(n, Matrix::identity(d), std::move(j));
}

// ---------------------------------------------------------------------------
// ProductModel

ProductModel::ProductModel(AmbientSpace space, double mu, Matrix f)
    : space_(std::move(space)), mu_(mu), k_(0), f_(std::move(f)) {
  if (mu_ == 0.0 || !std::isfinite(mu_)) {
    throw std::invalid_argument("ProductModel: mu must be finite and nonzero");
  }
  const std::size_t d = space_.dim();
  if (f_.dim() != d) throw DimensionError("ProductModel: F has wrong dimension");
  const Matrix& g = space_.metric();
  const Matrix& j = space_.complex_structure();
  if (max_abs_diff(f_ * f_, Matrix::identity(d)) > kStructureTol) {
    throw std::invalid_argument("ProductModel: F is not an involution");
  }
  if (max_abs_diff(f_.transposed() * g, g * f_) > kStructureTol) {
    throw std::invalid_argument("ProductModel: F is not g-symmetric");
  }
  if (max_abs_diff(f_ * j, j * f_) > kStructureTol) {
    throw std::invalid_argument("ProductModel: F does not commute with J");
  }
  // For an involution, trace F = dim(+1) - dim(-1) = 2k - 2(n-k).
  double trace = 0.0;
  for (std::size_t a = 0; a < d; ++a) trace += f_(a, a);
  const double k_real = (trace + 2.0 * space_.n()) / 4.0;
  const double k_rounded = std::round(k_real);
  if (std::abs(k_real - k_rounded) > 1e-9) {
    throw std::invalid_argument("ProductModel: +1 eigenspace of F is not complex");
  }
  k_ = static_cast<int>(k_rounded);
}

ProductModel ProductModel::canonical(AmbientSpace space, double mu, int k) {
  const int n = space.n();
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("ProductModel: k = " + std::to_string(k) + " outside [1, " +
                                std::to_string(n - 1) + "]");
  }
  const std::size_t d = space.dim();
  Matrix f(d);
  for (std::size_t a = 0; a < d; ++a) {
    const auto complex_index = static_cast<int>(a % static_cast<std::size_t>(n));
    f(a, a) = complex_index < k ? 1.0 : -1.0;
  }
  return ProductModel(std::move(space), mu, std::move(f));
}

ProductModel ProductModel::single_factor(AmbientSpace space, double mu) {
  const std::size_t d = space.dim();
  return ProductModel(std::move(space), mu, Matrix::identity(d));
}

// ---------------------------------------------------------------------------
// KaehlerCurvature

double kaehler_symmetry_defect(const QuadTensor& r, const Matrix& j) {
  const std::size_t d = r.dim();
  // first pass: t1(x,y,z,e) = R(x,y,Jz,e); second: t2(x,y,z,u) = t1(x,y,z,Ju)
  QuadTensor t1(d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z)
        for (std::size_t c = 0; c < d; ++c) {
          const double jcz = j(c, z);
          if (jcz == 0.0) continue;
          for (std::size_t e = 0; e < d; ++e) t1(x, y, z, e) += jcz * r(x, y, c, e);
        }
  double worst = 0.0;
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z)
        for (std::size_t u = 0; u < d; ++u) {
          double v = 0.0;
          for (std::size_t e = 0; e < d; ++e) v += j(e, u) * t1(x, y, z, e);
          worst = std::max(worst, std::abs(v - r(x, y, z, u)));
        }
  return worst;
}

KaehlerCurvature::KaehlerCurvature(AmbientSpace space, QuadTensor r)
    : space_(std::move(space)), r_(std::move(r)) {
  if (r_.dim() != space_.dim()) throw DimensionError("KaehlerCurvature: dimension mismatch");
  const CurvatureSymmetry sym = curvature_symmetry(r_);
  if (!sym.holds(kStructureTol)) {
    throw SymmetryError("KaehlerCurvature: tensor is not curvature-like (worst defect " +
                        std::to_string(sym.worst()) + ")");
  }
  if (kaehler_symmetry_defect(r_, space_.complex_structure()) > kStructureTol * sym.scale) {
    throw SymmetryError("KaehlerCurvature: tensor is not Kaehler-symmetric");
  }
  ricci_ = kahler::ricci(r_, space_.metric());
  tau_ = kahler::scalar(ricci_, space_.metric());
}

// ---------------------------------------------------------------------------
// Curvature models

QuadTensor product_curvature_tensor(const ProductModel& model, ProductCurvatureSign sign) {
  const AmbientSpace& space = model.space();
  const std::size_t d = space.dim();
  const Matrix& g = space.metric();
  const Matrix& j = space.complex_structure();
  const Matrix& f = model.involution();

  const Matrix g_f = f.transposed() * g;              // g(Fx, u)
  const Matrix g_j = j.transposed() * g;              // g(Jx, u)
  const Matrix g_jf = (j * f).transposed() * g;       // g(JFx, u)
  const Matrix g_f_j = f.transposed() * g * j;        // g(Fx, Jy)
  const Matrix g_x_j = g * j;                         // g(x, Jy)
  const double last = sign == ProductCurvatureSign::kCorrected ? 2.0 : -2.0;
  const double c = model.mu() / 8.0;

  QuadTensor r(d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z)
        for (std::size_t u = 0; u < d; ++u) {
          const double bracket =
              g_f(x, u) * g(y, z) - g_f(x, z) * g(y, u) + g(x, u) * g_f(y, z) -
              g(x, z) * g_f(y, u) + g_j(x, u) * g_jf(y, z) - g_j(x, z) * g_jf(y, u) +
              g_jf(x, u) * g_j(y, z) - g_jf(x, z) * g_j(y, u) +
              2.0 * g_f_j(x, y) * g_j(z, u) + last * g_x_j(x, y) * g_jf(z, u);
          r(x, y, z, u) = c * bracket;
        }
  return r;
}

KaehlerCurvature product_curvature(const ProductModel& model) {
  return KaehlerCurvature(model.space(), product_curvature_tensor(model));
}

KaehlerCurvature constant_hsc_curvature(const AmbientSpace& space, double mu) {
  const std::size_t d = space.dim();
  const Matrix& g = space.metric();
  const Matrix g_j = space.complex_structure().transposed() * g;  // g(Jx, u)
  const Matrix g_x_j = g * space.complex_structure();             // g(x, Jy)
  QuadTensor r(d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z)
        for (std::size_t u = 0; u < d; ++u)
          r(x, y, z, u) = mu / 4.0 *
                          (g(x, u) * g(y, z) - g(x, z) * g(y, u) + g_j(x, u) * g_j(y, z) -
                           g_j(x, z) * g_j(y, u) + 2.0 * g_x_j(x, y) * g_j(z, u));
  return KaehlerCurvature(space, std::move(r));
}

KaehlerCurvature direct_sum_curvature(int n, int k, double mu) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("direct_sum_curvature: k = " + std::to_string(k) +
                                " outside [1, n]");
  }
  AmbientSpace space = make_standard_space(n);
  const std::size_t d = space.dim();
  const auto un = static_cast<std::size_t>(n);
  const auto uk = static_cast<std::size_t>(k);
  const Matrix& g = space.metric();
  const Matrix g_j = space.complex_structure().transposed() * g;
  const Matrix g_x_j = g * space.complex_structure();
  auto factor = [&](std::size_t a) { return (a % un) < uk ? 0 : 1; };

  QuadTensor r(d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z)
        for (std::size_t u = 0; u < d; ++u) {
          const int fx = factor(x);
          if (factor(y) != fx || factor(z) != fx || factor(u) != fx) continue;
          const double m = fx == 0 ? mu : -mu;
          r(x, y, z, u) = m / 4.0 *
                          (g(x, u) * g(y, z) - g(x, z) * g(y, u) + g_j(x, u) * g_j(y, z) -
                           g_j(x, z) * g_j(y, u) + 2.0 * g_x_j(x, y) * g_j(z, u));
        }
  return KaehlerCurvature(std::move(space), std::move(r));
}

KaehlerCurvature flat_curvature(const AmbientSpace& space) {
  return KaehlerCurvature(space, QuadTensor(space.dim()));
}

QuadTensor bochner(const KaehlerCurvature& k) {
  const AmbientSpace& space = k.space();
  const Matrix& g = space.metric();
  const Matrix& j = space.complex_structure();
  const double m = space.n();
  QuadTensor b = k.tensor();
  QuadTensor ricci_part = phi(g, k.ricci()) + psi(g, j, k.ricci());
  QuadTensor metric_part = phi(g, g) + psi(g, j, g);
  b -= (1.0 / (2.0 * (m + 2.0))) * std::move(ricci_part);
  b += (k.scalar() / (8.0 * (m + 1.0) * (m + 2.0))) * std::move(metric_part);
  return b;
}

double holomorphic_sectional(const KaehlerCurvature& k, const Vector& x) {
  const double norm2 = k.space().inner(x, x);
  if (norm2 <= 0.0) throw std::invalid_argument("holomorphic_sectional: zero vector");
  const Vector jx = k.space().apply_j(x);
  return evaluate(k.tensor(), x, jx, jx, x) / (norm2 * norm2);
}

}  // namespace kahler
