#include "kahler/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kahler {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

void require_dim_in_range(std::size_t d, const char* what) {
  if (d == 0 || d > kMaxDimension) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(d) +
                         " outside [1, " + std::to_string(kMaxDimension) + "]");
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vector

Vector Vector::basis(std::size_t dim, std::size_t i) {
  Vector v(dim);
  v[i] = 1.0;
  return v;
}

Vector& Vector::operator+=(const Vector& o) {
  require_same_dim(dim(), o.dim(), "Vector +");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  require_same_dim(dim(), o.dim(), "Vector -");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector v) { return v *= s; }

// ---------------------------------------------------------------------------
// Matrix

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t a = 0; a < dim; ++a) m(a, a) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    require_same_dim(rows[a].size(), rows.size(), "Matrix::from_rows");
    for (std::size_t b = 0; b < rows.size(); ++b) m(a, b) = rows[a][b];
  }
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> cols) {
  Matrix m(cols.size());
  for (std::size_t b = 0; b < cols.size(); ++b) {
    require_same_dim(cols[b].dim(), cols.size(), "Matrix::from_columns");
    for (std::size_t a = 0; a < cols.size(); ++a) m(a, b) = cols[b][a];
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(dim_);
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b) t(b, a) = (*this)(a, b);
  return t;
}

Vector Matrix::apply(const Vector& x) const {
  require_same_dim(dim_, x.dim(), "Matrix::apply");
  Vector y(dim_);
  for (std::size_t a = 0; a < dim_; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < dim_; ++b) s += (*this)(a, b) * x[b];
    y[a] = s;
  }
  return y;
}

Vector Matrix::column(std::size_t b) const {
  Vector v(dim_);
  for (std::size_t a = 0; a < dim_; ++a) v[a] = (*this)(a, b);
  return v;
}

bool Matrix::is_symmetric() const {
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = a + 1; b < dim_; ++b)
      if ((*this)(a, b) != (*this)(b, a)) return false;
  return true;
}

Matrix Matrix::symmetrized() const {
  Matrix s(dim_);
  for (std::size_t a = 0; a < dim_; ++a) {
    s(a, a) = (*this)(a, a);
    for (std::size_t b = a + 1; b < dim_; ++b) {
      const double v = 0.5 * ((*this)(a, b) + (*this)(b, a));
      s(a, b) = v;
      s(b, a) = v;
    }
  }
  return s;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_dim(dim_, o.dim_, "Matrix +");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_dim(dim_, o.dim_, "Matrix -");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : e_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix m) { return m *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_dim(a.dim(), b.dim(), "Matrix *");
  const std::size_t d = a.dim();
  Matrix c(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

// ---------------------------------------------------------------------------
// QuadTensor

QuadTensor::QuadTensor(std::size_t dim) : dim_(dim), e_(dim * dim * dim * dim, 0.0) {}

QuadTensor& QuadTensor::operator+=(const QuadTensor& o) {
  require_same_dim(dim_, o.dim_, "QuadTensor +");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

QuadTensor& QuadTensor::operator-=(const QuadTensor& o) {
  require_same_dim(dim_, o.dim_, "QuadTensor -");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

QuadTensor& QuadTensor::operator*=(double s) {
  for (double& x : e_) x *= s;
  return *this;
}

QuadTensor operator+(QuadTensor a, const QuadTensor& b) { return a += b; }
QuadTensor operator-(QuadTensor a, const QuadTensor& b) { return a -= b; }
QuadTensor operator*(double s, QuadTensor t) { return t *= s; }

// ---------------------------------------------------------------------------
// SymmetricCubic

SymmetricCubic SymmetricCubic::from_array(std::size_t n, std::span<const double> entries) {
  if (entries.size() != n * n * n) {
    throw DimensionError("SymmetricCubic: expected " + std::to_string(n * n * n) + " entries");
  }
  SymmetricCubic h(n);
  std::copy(entries.begin(), entries.end(), h.e_.begin());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double v = h(i, j, k);
        if (h(j, i, k) != v || h(i, k, j) != v || h(k, j, i) != v) {
          throw SymmetryError("SymmetricCubic: entries not fully symmetric at (" +
                              std::to_string(i) + "," + std::to_string(j) + "," +
                              std::to_string(k) + ")");
        }
      }
  return h;
}

void SymmetricCubic::set(std::size_t i, std::size_t j, std::size_t k, double v) {
  const std::size_t n = n_;
  auto at = [&](std::size_t a, std::size_t b, std::size_t c) -> double& {
    return e_[(a * n + b) * n + c];
  };
  at(i, j, k) = v;
  at(i, k, j) = v;
  at(j, i, k) = v;
  at(j, k, i) = v;
  at(k, i, j) = v;
  at(k, j, i) = v;
}

SymmetricCubic SymmetricCubic::scaled(double s) const {
  SymmetricCubic h = *this;
  for (double& x : h.e_) x *= s;
  return h;
}

// ---------------------------------------------------------------------------
// Contractions

double inner(const Matrix& g, const Vector& x, const Vector& y) { return evaluate(g, x, y); }

double evaluate(const Matrix& form, const Vector& x, const Vector& y) {
  require_same_dim(form.dim(), x.dim(), "evaluate");
  require_same_dim(form.dim(), y.dim(), "evaluate");
  double s = 0.0;
  for (std::size_t a = 0; a < form.dim(); ++a) {
    if (x[a] == 0.0) continue;
    for (std::size_t b = 0; b < form.dim(); ++b) s += x[a] * form(a, b) * y[b];
  }
  return s;
}

double evaluate(const QuadTensor& t, const Vector& x, const Vector& y, const Vector& z,
                const Vector& u) {
  const std::size_t d = t.dim();
  require_same_dim(d, x.dim(), "evaluate");
  require_same_dim(d, y.dim(), "evaluate");
  require_same_dim(d, z.dim(), "evaluate");
  require_same_dim(d, u.dim(), "evaluate");
  double s = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    if (x[a] == 0.0) continue;
    for (std::size_t b = 0; b < d; ++b) {
      if (y[b] == 0.0) continue;
      for (std::size_t c = 0; c < d; ++c) {
        if (z[c] == 0.0) continue;
        double inner_sum = 0.0;
        for (std::size_t e = 0; e < d; ++e) inner_sum += t(a, b, c, e) * u[e];
        s += x[a] * y[b] * z[c] * inner_sum;
      }
    }
  }
  return s;
}

QuadTensor phi(const Matrix& g, const Matrix& q) {
  require_same_dim(g.dim(), q.dim(), "phi");
  require_dim_in_range(g.dim(), "phi");
  const std::size_t d = g.dim();
  QuadTensor t(d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z)
        for (std::size_t u = 0; u < d; ++u)
          t(x, y, z, u) = g(x, u) * q(y, z) - g(x, z) * q(y, u) + g(y, z) * q(x, u) -
                          g(y, u) * q(x, z);
  return t;
}

QuadTensor psi(const Matrix& g, const Matrix& j, const Matrix& q) {
  require_same_dim(g.dim(), q.dim(), "psi");
  require_same_dim(g.dim(), j.dim(), "psi");
  require_dim_in_range(g.dim(), "psi");
  const std::size_t d = g.dim();
  // gj(a,b) = g(e_a, J e_b), qj(a,b) = Q(e_a, J e_b)
  const Matrix gj = g * j;
  const Matrix qj = q * j;
  QuadTensor t(d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z)
        for (std::size_t u = 0; u < d; ++u)
          t(x, y, z, u) = gj(x, u) * qj(y, z) - gj(x, z) * qj(y, u) -
                          2.0 * gj(x, y) * qj(z, u) + gj(y, z) * qj(x, u) -
                          gj(y, u) * qj(x, z) - 2.0 * gj(z, u) * qj(x, y);
  return t;
}

Matrix ricci(const QuadTensor& r, const Matrix& g) {
  require_same_dim(r.dim(), g.dim(), "ricci");
  if (!is_curvature_like(r)) {
    throw SymmetryError("ricci: input is not curvature-like");
  }
  const std::size_t d = g.dim();
  const Matrix ginv = g == Matrix::identity(d) ? g : inverse(g);
  Matrix s(d);
  for (std::size_t y = 0; y < d; ++y)
    for (std::size_t z = 0; z < d; ++z) {
      double acc = 0.0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          if (ginv(a, b) == 0.0) continue;
          acc += ginv(a, b) * r(a, y, z, b);
        }
      s(y, z) = acc;
    }
  return s.symmetrized();
}

double scalar(const Matrix& s, const Matrix& g) {
  require_same_dim(s.dim(), g.dim(), "scalar");
  const std::size_t d = g.dim();
  const Matrix ginv = g == Matrix::identity(d) ? g : inverse(g);
  double tau = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) tau += ginv(a, b) * s(a, b);
  return tau;
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver

namespace {

double max_off_diagonal(const Matrix& a) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.dim(); ++p)
    for (std::size_t q = 0; q < a.dim(); ++q)
      if (p != q) m = std::max(m, std::abs(a(p, q)));
  return m;
}

}  // namespace

Spectrum sym_eigen(const Matrix& s, double tol, int max_sweeps) {
  const std::size_t n = s.dim();
  if (n == 0) throw DimensionError("sym_eigen: empty matrix");
  const double scale = max_abs(s.data());
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q)
      if (std::abs(s(p, q) - s(q, p)) > 1e-12 * std::max(scale, 1.0)) {
        throw SymmetryError("sym_eigen: input is not symmetric");
      }

  Matrix a = s.symmetrized();
  Matrix v = Matrix::identity(n);
  int sweep = 0;
  double off = max_off_diagonal(a);
  while (off > tol) {
    if (sweep >= max_sweeps) {
      throw ConvergenceError("sym_eigen: no convergence after " + std::to_string(max_sweeps) +
                                 " sweeps",
                             off);
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Entries negligible against both diagonal entries are dropped once
        // the sweep count shows we are in the quadratic regime.
        const double g100 = 100.0 * std::abs(apq);
        if (sweep > 4 && std::abs(a(p, p)) + g100 == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g100 == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
    off = max_off_diagonal(a);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues[i] = a(order[i], order[i]);
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, i) = v(k, order[i]);
  }
  out.residual = off;
  out.sweeps = sweep;
  return out;
}

// ---------------------------------------------------------------------------
// Defects and validators

double defect_norm(const QuadTensor& t) { return max_abs(t.data()); }
double defect_norm(const Matrix& m) { return max_abs(m.data()); }
double defect_norm(const Vector& v) { return max_abs(v.data()); }
double defect_norm(const SymmetricCubic& h) { return max_abs(h.data()); }

double CurvatureSymmetry::worst() const {
  return std::max({antisym_12, antisym_34, pair_swap, bianchi});
}

bool CurvatureSymmetry::holds(double rel_tol) const { return worst() <= rel_tol * scale; }

CurvatureSymmetry curvature_symmetry(const QuadTensor& t) {
  const std::size_t d = t.dim();
  CurvatureSymmetry c;
  c.scale = defect_norm(t);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y)
      for (std::size_t z = 0; z < d; ++z)
        for (std::size_t u = 0; u < d; ++u) {
          const double v = t(x, y, z, u);
          c.antisym_12 = std::max(c.antisym_12, std::abs(v + t(y, x, z, u)));
          c.antisym_34 = std::max(c.antisym_34, std::abs(v + t(x, y, u, z)));
          c.pair_swap = std::max(c.pair_swap, std::abs(v - t(z, u, x, y)));
          c.bianchi = std::max(c.bianchi, std::abs(v + t(y, z, x, u) + t(z, x, y, u)));
        }
  return c;
}

bool is_curvature_like(const QuadTensor& t, double rel_tol) {
  return curvature_symmetry(t).holds(rel_tol);
}

Matrix inverse(const Matrix& m) {
  const std::size_t n = m.dim();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  const double scale = std::max(defect_norm(m), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) <= 1e-14 * scale) {
      throw std::invalid_argument("inverse: matrix is singular");
    }
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a(pivot, k), a(col, k));
        std::swap(inv(pivot, k), inv(col, k));
      }
    }
    const double diag = a(col, col);
    for (std::size_t k = 0; k < n; ++k) {
      a(col, k) /= diag;
      inv(col, k) /= diag;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a(r, k) -= f * a(col, k);
        inv(r, k) -= f * inv(col, k);
      }
    }
  }
  return inv;
}

bool is_positive_definite(const Matrix& g, double tol) {
  if (!g.is_symmetric()) return false;
  const Spectrum sp = sym_eigen(g);
  return sp.eigenvalues.front() > tol;
}

}  // namespace kahler
