#pragma once

// Dense multilinear algebra at a single tangent space.
//
// Every array is indexed by basis slots in row-major slot order. A Matrix
// doubles as a bilinear form (entry (a,b) = B(e_a, e_b)) and as a linear map
// (column b holds the image of e_b); the two readings are never mixed within
// one object.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kahler {

inline constexpr std::size_t kMaxDimension = 24;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an input tensor lacks a symmetry an operation requires.
class SymmetryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim) : c_(dim, 0.0) {}
  explicit Vector(std::vector<double> components) : c_(std::move(components)) {}
  Vector(std::initializer_list<double> components) : c_(components) {}

  static Vector basis(std::size_t dim, std::size_t i);

  std::size_t dim() const noexcept { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  std::span<const double> data() const noexcept { return c_; }

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(double s);

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> c_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector v);

class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), e_(dim * dim, 0.0) {}

  static Matrix identity(std::size_t dim);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  /// Columns are the given vectors.
  static Matrix from_columns(std::span<const Vector> cols);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t a, std::size_t b) const { return e_[a * dim_ + b]; }
  double& operator()(std::size_t a, std::size_t b) { return e_[a * dim_ + b]; }
  std::span<const double> data() const noexcept { return e_; }

  Matrix transposed() const;
  Vector apply(const Vector& x) const;
  Vector column(std::size_t b) const;

  /// Exact storage equality of (a,b) and (b,a).
  bool is_symmetric() const;
  /// (M + M^T)/2, stored so that the result is exactly symmetric.
  Matrix symmetrized() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> e_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix m);
Matrix operator*(const Matrix& a, const Matrix& b);

/// Rank-4 array over a d-dimensional space.
class QuadTensor {
 public:
  QuadTensor() = default;
  explicit QuadTensor(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return e_[((a * dim_ + b) * dim_ + c) * dim_ + d];
  }
  double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return e_[((a * dim_ + b) * dim_ + c) * dim_ + d];
  }
  std::span<const double> data() const noexcept { return e_; }

  QuadTensor& operator+=(const QuadTensor& o);
  QuadTensor& operator-=(const QuadTensor& o);
  QuadTensor& operator*=(double s);

  bool operator==(const QuadTensor&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> e_;
};

QuadTensor operator+(QuadTensor a, const QuadTensor& b);
QuadTensor operator-(QuadTensor a, const QuadTensor& b);
QuadTensor operator*(double s, QuadTensor t);

/// Fully symmetric n x n x n array. Writes go through set(), which fills the
/// whole permutation orbit, so symmetry holds by exact storage equality.
class SymmetricCubic {
 public:
  SymmetricCubic() = default;
  explicit SymmetricCubic(std::size_t n) : n_(n), e_(n * n * n, 0.0) {}

  /// Rejects (SymmetryError) arrays that are not exactly symmetric.
  static SymmetricCubic from_array(std::size_t n, std::span<const double> entries);

  std::size_t dim() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return e_[(i * n_ + j) * n_ + k];
  }
  void set(std::size_t i, std::size_t j, std::size_t k, double v);
  std::span<const double> data() const noexcept { return e_; }

  SymmetricCubic scaled(double s) const;

  bool operator==(const SymmetricCubic&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> e_;
};

/// Eigen-decomposition of a symmetric matrix; column i of `eigenvectors`
/// belongs to eigenvalues[i], eigenvalues ascending.
struct Spectrum {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
  double residual = 0.0;
  int sweeps = 0;
};

// Contractions with basis-free arguments.
double inner(const Matrix& g, const Vector& x, const Vector& y);
double evaluate(const Matrix& form, const Vector& x, const Vector& y);
double evaluate(const QuadTensor& t, const Vector& x, const Vector& y, const Vector& z,
                const Vector& u);

/// phi(Q)(x,y,z,u) = g(x,u)Q(y,z) - g(x,z)Q(y,u) + g(y,z)Q(x,u) - g(y,u)Q(x,z)
QuadTensor phi(const Matrix& g, const Matrix& q);

/// The six-term Kaehler companion of phi; `j` is the matrix of the complex
/// structure as a linear map.
QuadTensor psi(const Matrix& g, const Matrix& j, const Matrix& q);

/// S(y,z) = sum_a R(eps_a, y, z, eps_a) over a g-orthonormal basis.
/// Throws SymmetryError unless `r` is curvature-like.
Matrix ricci(const QuadTensor& r, const Matrix& g);
double scalar(const Matrix& s, const Matrix& g);

/// Cyclic Jacobi diagonalization. Throws ConvergenceError after `max_sweeps`.
Spectrum sym_eigen(const Matrix& s, double tol = 1e-12, int max_sweeps = 100);

double defect_norm(const QuadTensor& t);
double defect_norm(const Matrix& m);
double defect_norm(const Vector& v);
double defect_norm(const SymmetricCubic& h);

/// Max-abs violations of each algebraic curvature symmetry.
struct CurvatureSymmetry {
  double antisym_12 = 0.0;
  double antisym_34 = 0.0;
  double pair_swap = 0.0;
  double bianchi = 0.0;
  double scale = 0.0;  // max-abs entry

  double worst() const;
  /// Every violation within rel_tol * scale.
  bool holds(double rel_tol = 1e-12) const;
};

CurvatureSymmetry curvature_symmetry(const QuadTensor& t);
bool is_curvature_like(const QuadTensor& t, double rel_tol = 1e-12);

Matrix inverse(const Matrix& m);
bool is_positive_definite(const Matrix& g, double tol = 1e-12);

}  // namespace kahler
