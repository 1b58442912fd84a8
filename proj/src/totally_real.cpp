#include "kahler/totally_real.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kahler {

namespace {

constexpr double kFrameTol = 1e-10;
constexpr double kDependenceTol = 1e-8;

double euclid(const Vector& v) {
  double s = 0.0;
  for (double x : v.data()) s += x * x;
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// SubmanifoldPoint

SubmanifoldPoint::SubmanifoldPoint(KaehlerCurvature ambient, std::vector<Vector> frame,
                                   SymmetricCubic h, std::optional<QuadTensor> fixture)
    : ambient_(std::move(ambient)),
      frame_(std::move(frame)),
      h_(std::move(h)),
      fixture_(std::move(fixture)) {
  const AmbientSpace& space = ambient_.space();
  const int n = space.n();
  if (n < 2) throw std::invalid_argument("SubmanifoldPoint: n = 1 frames are degenerate");
  if (frame_.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("SubmanifoldPoint: frame needs exactly " + std::to_string(n) +
                                " vectors");
  }
  for (const Vector& e : frame_) {
    if (e.dim() != space.dim()) throw DimensionError("SubmanifoldPoint: frame vector dimension");
  }
  if (h_.dim() != frame_.size()) throw DimensionError("SubmanifoldPoint: h dimension");
  for (std::size_t i = 0; i < frame_.size(); ++i) {
    const Vector je = space.apply_j(frame_[i]);
    for (std::size_t j = 0; j < frame_.size(); ++j) {
      const double gij = space.inner(frame_[i], frame_[j]);
      if (std::abs(gij - (i == j ? 1.0 : 0.0)) > kFrameTol) {
        throw std::invalid_argument("SubmanifoldPoint: frame is not orthonormal at (" +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
      if (std::abs(space.inner(frame_[j], je)) > kFrameTol) {
        throw std::invalid_argument("SubmanifoldPoint: frame is not totally real: g(e_" +
                                    std::to_string(j + 1) + ", Je_" + std::to_string(i + 1) +
                                    ") != 0");
      }
    }
  }
  if (fixture_) {
    if (fixture_->dim() != frame_.size()) throw DimensionError("SubmanifoldPoint: fixture dimension");
    if (!is_curvature_like(*fixture_)) {
      throw std::invalid_argument("SubmanifoldPoint: fixture tensor is not curvature-like");
    }
  }
}

Vector SubmanifoldPoint::tangent_to_ambient(const Vector& coords) const {
  Vector v(space().dim());
  for (std::size_t i = 0; i < frame_.size(); ++i)
    if (coords[i] != 0.0) v += coords[i] * frame_[i];
  return v;
}

Vector SubmanifoldPoint::normal_to_ambient(const Vector& coords) const {
  return space().apply_j(tangent_to_ambient(coords));
}

std::vector<Vector> orthonormalize(const AmbientSpace& space, std::vector<Vector> vectors) {
  std::vector<Vector> out;
  out.reserve(vectors.size());
  for (Vector& v : vectors) {
    if (v.dim() != space.dim()) throw DimensionError("orthonormalize: vector dimension");
    const double original = std::sqrt(space.inner(v, v));
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& e : out) v -= space.inner(e, v) * e;
    const double norm = std::sqrt(space.inner(v, v));
    if (original == 0.0 || norm <= kDependenceTol * std::max(1.0, original)) {
      throw std::invalid_argument("orthonormalize: vectors are linearly dependent");
    }
    out.push_back((1.0 / norm) * std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Second fundamental form

std::vector<Matrix> shape_operators(const SubmanifoldPoint& p) {
  const std::size_t n = p.h().dim();
  std::vector<Matrix> a(n, Matrix(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[k](i, j) = p.h()(k, i, j);
  return a;
}

MeanCurvature mean_curvature(const SubmanifoldPoint& p) {
  const std::size_t n = p.h().dim();
  const double inv_n = 1.0 / static_cast<double>(n);
  Vector trace(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) trace[k] += p.h()(k, i, i);

  MeanCurvature mc;
  mc.normal = p.normal_to_ambient(inv_n * trace);
  // JH = (1/n) sum_k t_k J J e_k = -(1/n) sum_k t_k e_k
  mc.jh = (-inv_n) * trace;
  mc.length = std::sqrt(p.space().inner(mc.normal, mc.normal));

  const Vector jh_ambient = p.space().apply_j(mc.normal);
  if (defect_norm(jh_ambient - p.tangent_to_ambient(mc.jh)) > 1e-10 * std::max(1.0, mc.length) ||
      defect_norm(p.space().apply_j(jh_ambient) + mc.normal) > 1e-10 * std::max(1.0, mc.length)) {
    throw ConsistencyError("mean_curvature: JH orientation guard failed");
  }
  for (const Vector& e : p.frame()) {
    if (std::abs(p.space().inner(mc.normal, e)) > 1e-10 * std::max(1.0, mc.length)) {
      throw ConsistencyError("mean_curvature: H is not normal");
    }
  }
  return mc;
}

// ---------------------------------------------------------------------------
// Gauss equation

QuadTensor restricted_ambient(const SubmanifoldPoint& p) {
  const QuadTensor& rt = p.ambient().tensor();
  const std::size_t d = rt.dim();
  const std::size_t n = p.frame().size();
  const auto& fr = p.frame();
  // contract one slot at a time: d^4 -> n d^3 -> n^2 d^2 -> n^3 d -> n^4
  std::vector<double> s1(n * d * d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a) {
      const double w = fr[i][a];
      if (w == 0.0) continue;
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t e = 0; e < d; ++e) s1[((i * d + b) * d + c) * d + e] += w * rt(a, b, c, e);
    }
  std::vector<double> s2(n * n * d * d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t b = 0; b < d; ++b) {
        const double w = fr[j][b];
        if (w == 0.0) continue;
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t e = 0; e < d; ++e)
            s2[((i * n + j) * d + c) * d + e] += w * s1[((i * d + b) * d + c) * d + e];
      }
  std::vector<double> s3(n * n * n * d, 0.0);
  for (std::size_t ij = 0; ij < n * n; ++ij)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t c = 0; c < d; ++c) {
        const double w = fr[k][c];
        if (w == 0.0) continue;
        for (std::size_t e = 0; e < d; ++e) s3[(ij * n + k) * d + e] += w * s2[(ij * d + c) * d + e];
      }
  QuadTensor out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double s = 0.0;
          for (std::size_t e = 0; e < d; ++e) s += fr[l][e] * s3[((i * n + j) * n + k) * d + e];
          out(i, j, k, l) = s;
        }
  return out;
}

QuadTensor gauss_tensor(const SubmanifoldPoint& p) {
  const std::size_t n = p.frame().size();
  const std::vector<Matrix> a = shape_operators(p);
  QuadTensor r = restricted_ambient(p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix bracket = a[i] * a[j] - a[j] * a[i];
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) r(i, j, k, l) += bracket(l, k);
    }
  return r;
}

IntrinsicGeometry gauss_intrinsic(const SubmanifoldPoint& p, double eigen_tol) {
  IntrinsicGeometry geom;
  const std::size_t n = p.frame().size();
  const Matrix g = Matrix::identity(n);
  geom.from_fixture = p.is_fixture();
  geom.r = p.is_fixture() ? *p.fixture() : gauss_tensor(p);
  geom.ricci = ricci(geom.r, g);
  geom.scalar = scalar(geom.ricci, g);
  if (n > 3) geom.weyl = weyl_tensor(geom.r, g);
  geom.spectrum = sym_eigen(geom.ricci, eigen_tol);
  const MeanCurvature mc = mean_curvature(p);
  geom.h_normal = mc.normal;
  geom.jh = mc.jh;
  return geom;
}

// ---------------------------------------------------------------------------
// Weyl tensor

QuadTensor weyl_tensor(const QuadTensor& r, const Matrix& g) {
  const std::size_t n = r.dim();
  if (n <= 3) {
    throw std::invalid_argument("weyl: conformal curvature requires n > 3, got n = " +
                                std::to_string(n));
  }
  const Matrix s = ricci(r, g);
  const double tau = scalar(s, g);
  const double nn = static_cast<double>(n);
  QuadTensor c = r;
  c -= (1.0 / (nn - 2.0)) * phi(g, s);
  c += (tau / (2.0 * (nn - 1.0) * (nn - 2.0))) * phi(g, g);
  return c;
}

QuadTensor weyl(const IntrinsicGeometry& geom) {
  if (geom.weyl) return *geom.weyl;
  return weyl_tensor(geom.r, Matrix::identity(geom.r.dim()));
}

// ---------------------------------------------------------------------------
// Normal curvature and semiparallelism

Matrix curvature_operator(const QuadTensor& r, std::size_t i, std::size_t j) {
  const std::size_t n = r.dim();
  Matrix m(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) m(l, k) = r(i, j, k, l);
  return m;
}

Vector normal_curvature_action(const SubmanifoldPoint& p, const IntrinsicGeometry& geom,
                               std::size_t i, std::size_t j, const Vector& z) {
  const Vector rz = curvature_operator(geom.r, i, j).apply(z);
  return p.normal_to_ambient(rz);
}

SemiparallelDefect semiparallel_defect(const SubmanifoldPoint& p, const IntrinsicGeometry& geom,
                                       double consistency_tol) {
  const std::size_t n = p.frame().size();
  const SymmetricCubic& h = p.h();
  const std::vector<Matrix> a = shape_operators(p);
  const AmbientSpace& space = p.space();

  // sigma(v, e_d) for tangent coordinates v, as frame coordinates of the
  // normal vector in the basis {Je_k}.
  auto sigma_coords = [&](const Vector& v, std::size_t d) {
    Vector out(n);
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t m = 0; m < n; ++m) s += v[m] * h(k, m, d);
      out[k] = s;
    }
    return out;
  };

  SemiparallelDefect out;
  double scale = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const Matrix rop = curvature_operator(geom.r, x, y);
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t u = 0; u < n; ++u) {
          // R(X,Y) A_Z U - A_Z R(X,Y) U - A_U R(X,Y) Z in frame coordinates
          const Vector t1 = rop.apply(a[z].column(u));
          const Vector t2 = a[z].apply(rop.column(u));
          const Vector t3 = a[u].apply(rop.column(z));
          const double componentwise = euclid(t1 - t2 - t3);

          // R_perp(X,Y) sigma(Z,U) - sigma(R(X,Y)Z, U) - sigma(Z, R(X,Y)U), ambient
          Vector sigma_zu(n);
          for (std::size_t k = 0; k < n; ++k) sigma_zu[k] = h(k, z, u);
          const Vector n1 = normal_curvature_action(p, geom, x, y, sigma_zu);
          const Vector n2 = p.normal_to_ambient(sigma_coords(rop.column(z), u));
          const Vector n3 = p.normal_to_ambient(sigma_coords(rop.column(u), z));
          const Vector total = n1 - n2 - n3;
          const double rbar = std::sqrt(space.inner(total, total));

          out.componentwise = std::max(out.componentwise, componentwise);
          out.rbar_sigma = std::max(out.rbar_sigma, rbar);
          scale = std::max({scale, euclid(t1), euclid(t2), euclid(t3)});
          if (std::abs(componentwise - rbar) > consistency_tol * std::max(1.0, scale)) {
            throw ConsistencyError("semiparallel_defect: evaluation paths disagree (" +
                                   std::to_string(componentwise) + " vs " + std::to_string(rbar) + ")");
          }
        }
    }
  return out;
}

double mc_semiparallel_defect(const IntrinsicGeometry& geom) {
  const std::size_t n = geom.r.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      worst = std::max(worst, euclid(curvature_operator(geom.r, i, j).apply(geom.jh)));
  return worst;
}

double commutativity_defect(const SubmanifoldPoint& p) {
  const std::vector<Matrix> a = shape_operators(p);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t l = k + 1; l < a.size(); ++l)
      worst = std::max(worst, defect_norm(a[k] * a[l] - a[l] * a[k]));
  return worst;
}

}  // namespace kahler
