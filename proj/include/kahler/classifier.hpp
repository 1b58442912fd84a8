#pragma once

// Pointwise verdicts for conformally flat totally real submanifolds.
//
// The structure theorems are local; at a single point only their linear
// algebraic shadow is checkable (Ricci spectrum shape, factor alignment,
// factor curvatures). Every verdict is therefore "pointwise-consistent with"
// the named conclusion, never a proof of it.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kahler/ambient.hpp"
#include "kahler/totally_real.hpp"

namespace kahler {

struct Tolerances {
  double gate = 1e-8;        // "condition holds" verdicts
  double internal = 1e-12;   // self-consistency of recomputed quantities
  double eigen = 1e-12;      // Jacobi off-diagonal target
  double cluster = 1e-8;     // equal-eigenvalue detection

  bool operator==(const Tolerances&) const = default;
};

enum class Conclusion {
  kFlat,
  kProductType,
  kProductSplit,
  kEinsteinZero,
  kIndeterminate,
  kHypothesisViolation,
};

std::string_view to_string(Conclusion c);
std::optional<Conclusion> conclusion_from_string(std::string_view s);

enum class Mode { kMcSemiparallel, kSemiparallel };

std::string_view to_string(Mode m);

struct Flag {
  std::string name;
  bool value = false;
  double defect = 0.0;

  bool operator==(const Flag&) const = default;
};

struct NamedValues {
  std::string name;
  std::vector<double> values;

  bool operator==(const NamedValues&) const = default;
};

struct Verdict {
  std::string theorem;
  std::vector<Flag> flags;
  Conclusion conclusion = Conclusion::kIndeterminate;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<NamedValues> residuals;
  std::vector<std::string> notes;
  bool fixture = false;

  const Flag* flag(std::string_view name) const;
  std::optional<double> parameter(std::string_view name) const;
  const NamedValues* residual(std::string_view name) const;

  bool operator==(const Verdict&) const = default;
};

// ---------------------------------------------------------------------------
// Spectrum shape

struct ClusterSplit {
  std::vector<double> small;  // the cluster below the largest gap
  std::vector<double> large;  // the cluster above it
  bool single_cluster = false;
};

/// Splits the ascending spectrum at its largest gap; a spread within `tol`
/// counts as one cluster.
ClusterSplit split_clusters(const std::vector<double>& ascending, double tol);

/// Spread of the spectrum with its first or last eigenvalue dropped,
/// whichever is smaller.
double quasi_einstein_defect(const std::vector<double>& ascending);

/// At least n-1 eigenvalues coincide within `tol`.
bool is_quasi_einstein(const std::vector<double>& ascending, double tol);

// ---------------------------------------------------------------------------
// Residual systems

struct PropositionResiduals {
  Matrix pair_residual;  // (l_i + l_j - tau/(n-1)) g(e_j, JH) in the eigenframe, i != j
  double s_jh_jh = 0.0;
  bool quasi_einstein = false;
  Vector jh_eigen;  // JH in the Ricci eigenframe
};

/// Throws std::invalid_argument for n <= 3.
PropositionResiduals proposition_residuals(const SubmanifoldPoint& p,
                                           const IntrinsicGeometry& geom,
                                           const Tolerances& tol = {});

/// h rotated into the Ricci eigenframe: h'(a,b,c) = h(E e_a, E e_b, E e_c).
SymmetricCubic eigenframe_cubic(const SubmanifoldPoint& p, const IntrinsicGeometry& geom);

struct LemmaCheck {
  int lemma = 0;       // 1, 2 or 3
  int i = -1;
  int k = -1;
  double gate = 0.0;             // lemma 1: g(A_{Je_i}e_i, e_k); lemma 2: g(A_{Je_i}e_i, e_i)
  bool fires = false;            // |gate| > gate tolerance
  double other_pairs = 0.0;      // max_{j != i,k} |l_j + l_k - tau/(n-1)|
  double vector_residual = 0.0;  // |(l_i + l_k - tau/(n-1))(2A_i e_k + gate e_i - h_iii e_k)|
  double pair_ik = 0.0;          // |l_i + l_k - tau/(n-1)|
  double conclusion = 0.0;       // distance of the spectrum from the lemma's conclusion
};

struct LemmaResiduals {
  std::vector<LemmaCheck> checks;
  bool applicable = false;  // semiparallel and conformally flat at the point
  bool minimal = false;
  double totally_geodesic_defect = 0.0;
  /// max over fired checks of the residuals their implication forces to zero
  double max_fired_residual = 0.0;
};

LemmaResiduals lemma_residuals(const SubmanifoldPoint& p, const IntrinsicGeometry& geom,
                               const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// Classification

Verdict classify_theorem_1_2(const SubmanifoldPoint& p, Mode mode, const Tolerances& tol = {});
Verdict classify_theorem_3(const SubmanifoldPoint& p, const ProductModel& model,
                           const Tolerances& tol = {});

/// max |R(X,Y,Z,X) - mu/8 g(X,X) g(FY,Z)| over orthonormal tangent triples:
/// every ordered triple of distinct frame vectors plus `extra_triples`
/// rotated ones drawn from a fixed seed.
double product_identity_residual(const SubmanifoldPoint& p, const IntrinsicGeometry& geom,
                                 const ProductModel& model, int extra_triples = 16);

// ---------------------------------------------------------------------------
// Scenarios

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class AmbientKind { kFlat, kProduct, kConstantHsc };

std::string_view to_string(AmbientKind k);

struct AmbientSpec {
  AmbientKind kind = AmbientKind::kFlat;
  int n = 0;
  int k = 0;  // product only
  double mu = 0.0;

  bool operator==(const AmbientSpec&) const = default;
};

/// Zero-based indices in memory.
struct CubicEntry {
  std::array<int, 3> indices{};
  double value = 0.0;

  bool operator==(const CubicEntry&) const = default;
};

struct CurvatureEntry {
  std::array<int, 4> indices{};
  double value = 0.0;

  bool operator==(const CurvatureEntry&) const = default;
};

struct ToleranceOverrides {
  std::optional<double> gate;
  std::optional<double> internal;
  std::optional<double> eigen;
  std::optional<double> cluster;

  Tolerances apply(Tolerances base) const;
  bool operator==(const ToleranceOverrides&) const = default;
};

struct Scenario {
  std::string name;
  AmbientSpec ambient;
  std::optional<std::vector<Vector>> frame;  // nullopt: canonical e_1..e_n
  std::vector<CubicEntry> h;
  std::optional<std::vector<CurvatureEntry>> fixture;
  ToleranceOverrides tolerances;
  std::optional<std::uint64_t> seed;

  bool operator==(const Scenario&) const = default;
};

struct Instance {
  SubmanifoldPoint point;
  std::optional<ProductModel> product;
};

/// Resolves a scenario or throws ScenarioError; duplicate h or fixture
/// entries within one symmetry orbit must agree exactly.
Instance build_instance(const Scenario& s);

SymmetricCubic cubic_from_entries(int n, const std::vector<CubicEntry>& entries);
QuadTensor curvature_from_entries(int n, const std::vector<CurvatureEntry>& entries);
/// One entry per nonzero orbit, i <= j <= k.
std::vector<CubicEntry> entries_from_cubic(const SymmetricCubic& h);
/// One entry per nonzero orbit, i < j, k < l, (i,j) <= (k,l).
std::vector<CurvatureEntry> entries_from_curvature(const QuadTensor& r);

// ---------------------------------------------------------------------------
// Generators

struct ProductTypeOptions {
  int axis = 0;  // frame index of the segment direction
  /// Off-axis coupling h[axis][j][j]; defaults to sqrt(c) for c > 0 (flat
  /// ambient) and 1 for c < 0.
  std::optional<double> coupling;
};

/// Gauss-realized point of M^{n-1}(c) x I: Ricci spectrum {0, (n-2)c x (n-1)},
/// JH along e_axis, semiparallel. The ambient is flat when coupling^2 = c and
/// of constant holomorphic sectional curvature 4(c - coupling^2) otherwise.
Scenario gen_product_type_instance(int n, double c, const ProductTypeOptions& opt = {});

/// Product ambient, canonical split frame, h = 0.
Scenario gen_totally_geodesic_product(int n, int k, double mu);

/// Flat ambient with simultaneously diagonal shape operators: R = 0, not minimal.
Scenario gen_flat_instance(int n, std::uint64_t seed = 1);

struct RandomOptions {
  AmbientKind ambient = AmbientKind::kFlat;
  int k = 1;
  double mu = 1.0;
  bool traceless = false;
  bool commuting = false;
  bool rotate_frame = false;
};

/// Entries uniform in [-1, 1] per symmetry orbit; reproducible from seed.
Scenario gen_random_instance(int n, std::uint64_t seed, const RandomOptions& opt = {});

/// Flat ambient with fixture R chosen so that C = 0 and Ricci = diag(eigenvalues);
/// h = -n/(n+2) sym(jh (x) g), so that JH equals `jh`.
Scenario gen_conformally_flat_fixture(const std::vector<double>& eigenvalues, const Vector& jh);

/// The intrinsic tensor with C = 0 and the given Ricci form (n > 3).
QuadTensor conformally_flat_from_ricci(const Matrix& ricci);

}  // namespace kahler
