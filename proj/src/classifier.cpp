#include "kahler/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace kahler {

namespace {

double euclid(const Vector& v) {
  double s = 0.0;
  for (double x : v.data()) s += x * x;
  return std::sqrt(s);
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void add_flag(Verdict& v, std::string name, double defect, double tol) {
  v.flags.push_back({std::move(name), defect <= tol, defect});
}

std::vector<double> flatten(const Matrix& m) {
  return {m.data().begin(), m.data().end()};
}

std::vector<double> to_values(const Vector& v) { return {v.data().begin(), v.data().end()}; }

}  // namespace

// ---------------------------------------------------------------------------
// Enum names

std::string_view to_string(Conclusion c) {
  switch (c) {
    case Conclusion::kFlat: return "FLAT";
    case Conclusion::kProductType: return "PRODUCT_TYPE";
    case Conclusion::kProductSplit: return "PRODUCT_SPLIT";
    case Conclusion::kEinsteinZero: return "EINSTEIN_ZERO";
    case Conclusion::kIndeterminate: return "INDETERMINATE";
    case Conclusion::kHypothesisViolation: return "HYPOTHESIS_VIOLATION";
  }
  return "INDETERMINATE";
}

std::optional<Conclusion> conclusion_from_string(std::string_view s) {
  for (Conclusion c : {Conclusion::kFlat, Conclusion::kProductType, Conclusion::kProductSplit,
                       Conclusion::kEinsteinZero, Conclusion::kIndeterminate,
                       Conclusion::kHypothesisViolation}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Mode m) {
  return m == Mode::kMcSemiparallel ? "mc-semiparallel" : "semiparallel";
}

std::string_view to_string(AmbientKind k) {
  switch (k) {
    case AmbientKind::kFlat: return "flat";
    case AmbientKind::kProduct: return "product";
    case AmbientKind::kConstantHsc: return "constant_hsc";
  }
  return "flat";
}

const Flag* Verdict::flag(std::string_view name) const {
  for (const Flag& f : flags)
    if (f.name == name) return &f;
  return nullptr;
}

std::optional<double> Verdict::parameter(std::string_view name) const {
  for (const auto& [key, value] : parameters)
    if (key == name) return value;
  return std::nullopt;
}

const NamedValues* Verdict::residual(std::string_view name) const {
  for (const NamedValues& r : residuals)
    if (r.name == name) return &r;
  return nullptr;
}

Tolerances ToleranceOverrides::apply(Tolerances base) const {
  if (gate) base.gate = *gate;
  if (internal) base.internal = *internal;
  if (eigen) base.eigen = *eigen;
  if (cluster) base.cluster = *cluster;
  return base;
}

// ---------------------------------------------------------------------------
// Spectrum shape

ClusterSplit split_clusters(const std::vector<double>& ascending, double tol) {
  ClusterSplit out;
  if (ascending.empty() || ascending.back() - ascending.front() <= tol) {
    out.large = ascending;
    out.single_cluster = true;
    return out;
  }
  std::size_t cut = 0;
  double widest = -1.0;
  for (std::size_t i = 0; i + 1 < ascending.size(); ++i) {
    const double gap = ascending[i + 1] - ascending[i];
    if (gap > widest) {
      widest = gap;
      cut = i;
    }
  }
  out.small.assign(ascending.begin(), ascending.begin() + static_cast<std::ptrdiff_t>(cut + 1));
  out.large.assign(ascending.begin() + static_cast<std::ptrdiff_t>(cut + 1), ascending.end());
  return out;
}

double quasi_einstein_defect(const std::vector<double>& ascending) {
  if (ascending.size() < 2) return 0.0;
  const std::vector<double> drop_first(ascending.begin() + 1, ascending.end());
  const std::vector<double> drop_last(ascending.begin(), ascending.end() - 1);
  return std::min(spread(drop_first), spread(drop_last));
}

bool is_quasi_einstein(const std::vector<double>& ascending, double tol) {
  const ClusterSplit split = split_clusters(ascending, tol);
  if (split.single_cluster) return true;
  const std::vector<double>& big = split.small.size() >= split.large.size() ? split.small : split.large;
  return big.size() + 1 >= ascending.size() && spread(big) <= tol;
}

// ---------------------------------------------------------------------------
// Residual systems under conformal flatness

PropositionResiduals proposition_residuals(const SubmanifoldPoint& p,
                                           const IntrinsicGeometry& geom, const Tolerances& tol) {
  const int n = p.n();
  if (n <= 3) {
    throw std::invalid_argument("proposition_residuals: requires n > 3, got n = " +
                                std::to_string(n));
  }
  const auto un = static_cast<std::size_t>(n);
  const std::vector<double>& lambda = geom.spectrum.eigenvalues;
  const Matrix& e = geom.spectrum.eigenvectors;
  const double q = geom.scalar / (n - 1.0);

  PropositionResiduals out;
  out.jh_eigen = e.transposed().apply(geom.jh);
  out.pair_residual = Matrix(un);
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = 0; j < un; ++j)
      if (i != j) out.pair_residual(i, j) = (lambda[i] + lambda[j] - q) * out.jh_eigen[j] + 0.0;
  out.s_jh_jh = evaluate(geom.ricci, geom.jh, geom.jh);
  out.quasi_einstein = is_quasi_einstein(lambda, tol.cluster);
  return out;
}

SymmetricCubic eigenframe_cubic(const SubmanifoldPoint& p, const IntrinsicGeometry& geom) {
  const std::size_t n = p.h().dim();
  const Matrix& e = geom.spectrum.eigenvectors;
  const SymmetricCubic& h = p.h();
  std::vector<double> t1(n * n * n, 0.0);
  std::vector<double> t2(n * n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t i = 0; i < n; ++i) {
      if (e(i, a) == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) t1[(a * n + j) * n + k] += e(i, a) * h(i, j, k);
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t j = 0; j < n; ++j) {
        if (e(j, b) == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k)
          t2[(a * n + b) * n + k] += e(j, b) * t1[(a * n + j) * n + k];
      }
  SymmetricCubic out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = b; c < n; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += e(k, c) * t2[(a * n + b) * n + k];
        out.set(a, b, c, s);
      }
  return out;
}

LemmaResiduals lemma_residuals(const SubmanifoldPoint& p, const IntrinsicGeometry& geom,
                               const Tolerances& tol) {
  const std::size_t n = p.h().dim();
  const std::vector<double>& lambda = geom.spectrum.eigenvalues;
  const double q = geom.scalar / (static_cast<double>(n) - 1.0);
  const SymmetricCubic h = eigenframe_cubic(p, geom);

  LemmaResiduals out;
  out.totally_geodesic_defect = defect_norm(p.h());
  out.minimal = std::sqrt(p.space().inner(geom.h_normal, geom.h_normal)) <= tol.gate;
  if (n > 3) {
    const double weyl_defect = defect_norm(weyl(geom));
    const SemiparallelDefect sp = semiparallel_defect(p, geom);
    out.applicable = weyl_defect <= tol.gate && sp.componentwise <= tol.gate;
  }

  auto others_spread = [&](std::size_t skip) {
    std::vector<double> rest;
    for (std::size_t j = 0; j < n; ++j)
      if (j != skip) rest.push_back(lambda[j]);
    return spread(rest);
  };

  // Lemma 1: g(A_{Je_i} e_i, e_k) != 0 for some i != k.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      LemmaCheck c;
      c.lemma = 1;
      c.i = static_cast<int>(i);
      c.k = static_cast<int>(k);
      c.gate = h(i, i, k);
      c.fires = std::abs(c.gate) > tol.gate;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && j != k) c.other_pairs = std::max(c.other_pairs, std::abs(lambda[j] + lambda[k] - q));
      const double coeff = lambda[i] + lambda[k] - q;
      c.pair_ik = std::abs(coeff);
      Vector v(n);
      for (std::size_t m = 0; m < n; ++m) v[m] = 2.0 * h(i, k, m);  // 2 A_{Je_i} e_k
      v[i] += c.gate;
      v[k] -= h(i, i, i);
      c.vector_residual = std::abs(coeff) * euclid(v);
      double concl = std::abs(lambda[k]);
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) concl = std::max(concl, std::abs(lambda[j] - lambda[i]));
      c.conclusion = concl;
      if (c.fires) out.max_fired_residual = std::max({out.max_fired_residual, c.other_pairs, c.pair_ik, concl});
      out.checks.push_back(c);
    }

  // Lemma 2: g(A_{Je_i} e_i, e_i) != 0.
  for (std::size_t i = 0; i < n; ++i) {
    LemmaCheck c;
    c.lemma = 2;
    c.i = static_cast<int>(i);
    c.k = static_cast<int>(i);
    c.gate = h(i, i, i);
    c.fires = std::abs(c.gate) > tol.gate;
    c.conclusion = std::max(std::abs(lambda[i]), others_spread(i));
    if (c.fires) out.max_fired_residual = std::max(out.max_fired_residual, c.conclusion);
    out.checks.push_back(c);
  }

  // Lemma 3: minimal => totally geodesic, or one zero eigenvalue and the rest equal.
  {
    LemmaCheck c;
    c.lemma = 3;
    c.fires = out.minimal;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
      best = std::min(best, std::max(std::abs(lambda[k]), others_spread(k)));
    c.conclusion = std::min(out.totally_geodesic_defect, best);
    if (c.fires) out.max_fired_residual = std::max(out.max_fired_residual, c.conclusion);
    out.checks.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theorems 1 and 2

namespace {

struct ProductTypeShape {
  bool matches = false;
  double c = 0.0;
};

ProductTypeShape product_type_shape(const std::vector<double>& lambda, double tol) {
  const std::size_t n = lambda.size();
  const ClusterSplit split = split_clusters(lambda, tol);
  if (split.single_cluster || n < 3) return {};
  const std::vector<double>* single = nullptr;
  const std::vector<double>* bulk = nullptr;
  if (split.small.size() == 1 && split.large.size() == n - 1) {
    single = &split.small;
    bulk = &split.large;
  } else if (split.large.size() == 1 && split.small.size() == n - 1) {
    single = &split.large;
    bulk = &split.small;
  } else {
    return {};
  }
  if (std::abs(single->front()) > tol || spread(*bulk) > tol) return {};
  const double m = mean(*bulk);
  if (std::abs(m) <= tol) return {};
  return {true, m / (static_cast<double>(n) - 2.0)};
}

}  // namespace

Verdict classify_theorem_1_2(const SubmanifoldPoint& p, Mode mode, const Tolerances& tol) {
  Verdict v;
  v.theorem = mode == Mode::kMcSemiparallel ? "theorem_1" : "theorem_2";
  v.fixture = p.is_fixture();
  const int n = p.n();
  const IntrinsicGeometry geom = gauss_intrinsic(p, tol.eigen);

  const double sp = semiparallel_defect(p, geom).componentwise;
  const double mc = mc_semiparallel_defect(geom);
  const double comm = commutativity_defect(p);
  const double hlen = std::sqrt(p.space().inner(geom.h_normal, geom.h_normal));
  const double tg = defect_norm(p.h());

  add_flag(v, "n_gt_3", std::max(0, 4 - n), 0.0);
  std::optional<double> weyl_defect;
  if (n > 3) {
    weyl_defect = defect_norm(*geom.weyl);
    add_flag(v, "conformally_flat", *weyl_defect, tol.gate);
  }
  add_flag(v, "semiparallel", sp, tol.gate);
  add_flag(v, "mc_semiparallel", mc, tol.gate);
  add_flag(v, "commutative", comm, tol.gate);
  add_flag(v, "minimal", hlen, tol.gate);
  add_flag(v, "totally_geodesic", tg, tol.gate);

  v.parameters.emplace_back("mean_curvature_length", hlen);
  v.parameters.emplace_back("scalar_curvature", geom.scalar);
  v.residuals.push_back({"ricci_spectrum", geom.spectrum.eigenvalues});

  if (v.fixture) v.notes.emplace_back("intrinsic curvature supplied as a fixture");
  if (n <= 3) {
    v.conclusion = Conclusion::kHypothesisViolation;
    v.notes.emplace_back("requires n > 3; conformal curvature is undefined");
    return v;
  }

  const PropositionResiduals prop = proposition_residuals(p, geom, tol);
  v.residuals.push_back({"ricci_jh_pairs", flatten(prop.pair_residual)});
  v.residuals.push_back({"s_jh_jh", {prop.s_jh_jh}});
  v.residuals.push_back({"jh_eigenframe", to_values(prop.jh_eigen)});
  add_flag(v, "quasi_einstein", quasi_einstein_defect(geom.spectrum.eigenvalues), tol.cluster);

  if (mode == Mode::kSemiparallel) {
    const LemmaResiduals lem = lemma_residuals(p, geom, tol);
    std::vector<double> fired;
    for (const LemmaCheck& c : lem.checks)
      if (c.fires) fired.push_back(c.lemma == 1 ? std::max({c.other_pairs, c.pair_ik, c.conclusion}) : c.conclusion);
    v.residuals.push_back({"lemma_fired_residuals", fired});
  }

  const bool conformally_flat = v.flag("conformally_flat")->value;
  const bool semiparallel_hyp =
      mode == Mode::kMcSemiparallel ? v.flag("mc_semiparallel")->value : v.flag("semiparallel")->value;
  if (!conformally_flat || !semiparallel_hyp) {
    v.conclusion = Conclusion::kHypothesisViolation;
    if (!conformally_flat) v.notes.push_back("Weyl defect " + fmt(*weyl_defect) + " above gate");
    if (!semiparallel_hyp) {
      v.notes.push_back(std::string(to_string(mode)) + " defect " +
                        fmt(mode == Mode::kMcSemiparallel ? mc : sp) + " above gate");
    }
    return v;
  }

  const bool excluded =
      mode == Mode::kMcSemiparallel ? v.flag("minimal")->value : v.flag("totally_geodesic")->value;
  if (excluded) {
    v.notes.emplace_back(mode == Mode::kMcSemiparallel
                             ? "minimal at the point: outside the non-minimal clause"
                             : "totally geodesic at the point: outside the non-totally-geodesic clause");
  }

  const ProductTypeShape shape = product_type_shape(geom.spectrum.eigenvalues, tol.cluster);
  if (defect_norm(geom.r) <= tol.gate) {
    v.conclusion = Conclusion::kFlat;
  } else if (defect_norm(geom.ricci) <= tol.gate) {
    v.conclusion = Conclusion::kEinsteinZero;
  } else if (shape.matches) {
    v.conclusion = Conclusion::kProductType;
    v.parameters.emplace_back("c", shape.c);
  } else {
    v.conclusion = Conclusion::kIndeterminate;
    v.notes.emplace_back(excluded ? "structure unconstrained at an excluded point"
                                  : "hypotheses hold but no conclusion shape matched");
  }
  if (v.conclusion != Conclusion::kIndeterminate) {
    v.notes.push_back("pointwise-consistent with " + std::string(to_string(v.conclusion)));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Product-ambient splitting

double product_identity_residual(const SubmanifoldPoint& p, const IntrinsicGeometry& geom,
                                 const ProductModel& model, int extra_triples) {
  const std::size_t n = p.frame().size();
  if (n < 3) return 0.0;
  const AmbientSpace& space = p.space();
  const Matrix& f = model.involution();
  const double c = model.mu() / 8.0;
  auto residual = [&](const Vector& x, const Vector& y, const Vector& z) {
    const double lhs = evaluate(geom.r, x, y, z, x);
    const Vector ya = p.tangent_to_ambient(y);
    const Vector za = p.tangent_to_ambient(z);
    const double rhs = c * euclid(x) * euclid(x) * space.inner(f.apply(ya), za);
    return std::abs(lhs - rhs);
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        worst = std::max(worst, residual(Vector::basis(n, i), Vector::basis(n, j),
                                         Vector::basis(n, k)));
      }
  std::mt19937_64 rng(0x42c0ffeeULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  const AmbientSpace flat_n = make_standard_space(static_cast<int>(n));
  for (int t = 0; t < extra_triples; ++t) {
    std::vector<Vector> raw;
    for (int r = 0; r < 3; ++r) {
      Vector v(2 * n);
      for (std::size_t a = 0; a < n; ++a) v[a] = normal(rng);
      raw.push_back(std::move(v));
    }
    const std::vector<Vector> ortho = orthonormalize(flat_n, std::move(raw));
    auto head = [&](const Vector& v) {
      Vector out(n);
      for (std::size_t a = 0; a < n; ++a) out[a] = v[a];
      return out;
    };
    worst = std::max(worst, residual(head(ortho[0]), head(ortho[1]), head(ortho[2])));
  }
  return worst;
}

Verdict classify_theorem_3(const SubmanifoldPoint& p, const ProductModel& model,
                           const Tolerances& tol) {
  if (model.space().dim() != p.space().dim()) {
    throw DimensionError("classify_theorem_3: model and point live in different spaces");
  }
  Verdict v;
  v.theorem = "theorem_3";
  v.fixture = p.is_fixture();
  const std::size_t n = p.frame().size();
  const IntrinsicGeometry geom = gauss_intrinsic(p, tol.eigen);
  const double mu = model.mu();

  const double comm = commutativity_defect(p);
  const double sp = semiparallel_defect(p, geom).componentwise;
  const double mc = mc_semiparallel_defect(geom);
  const double hlen = std::sqrt(p.space().inner(geom.h_normal, geom.h_normal));
  const double tg = defect_norm(p.h());

  add_flag(v, "n_gt_3", std::max(0, 4 - static_cast<int>(n)), 0.0);
  if (n > 3) add_flag(v, "conformally_flat", defect_norm(*geom.weyl), tol.gate);
  add_flag(v, "semiparallel", sp, tol.gate);
  add_flag(v, "mc_semiparallel", mc, tol.gate);
  add_flag(v, "commutative", comm, tol.gate);
  add_flag(v, "minimal", hlen, tol.gate);
  add_flag(v, "totally_geodesic", tg, tol.gate);

  v.parameters.emplace_back("mu", mu);
  v.parameters.emplace_back("mean_curvature_length", hlen);
  if (v.fixture) v.notes.emplace_back("intrinsic curvature supplied as a fixture");
  if (n <= 3) v.notes.emplace_back("n <= 3: splitting analysis only, conformal flatness not checked");

  const double gauss_restriction = defect_norm(geom.r - restricted_ambient(p));
  const double identity = product_identity_residual(p, geom, model);
  v.residuals.push_back({"gauss_restriction", {gauss_restriction}});
  v.residuals.push_back({"product_identity", {identity}});

  if (!v.flag("commutative")->value || !v.flag("semiparallel")->value) {
    v.conclusion = Conclusion::kHypothesisViolation;
    if (!v.flag("commutative")->value) v.notes.push_back("commutativity defect " + fmt(comm));
    if (!v.flag("semiparallel")->value) v.notes.push_back("semiparallel defect " + fmt(sp));
    return v;
  }

  const Matrix& f = model.involution();
  std::vector<double> alignment;
  std::vector<double> assignment;
  std::vector<std::size_t> plus, minus;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector& e = p.frame()[i];
    const Vector fe = f.apply(e);
    const double dp = defect_norm(fe - e);
    const double dm = defect_norm(fe + e);
    alignment.push_back(std::min(dp, dm));
    assignment.push_back(dp <= dm ? 1.0 : -1.0);
    (dp <= dm ? plus : minus).push_back(i);
  }
  v.residuals.push_back({"f_alignment", alignment});
  v.residuals.push_back({"factor_assignment", assignment});
  if (*std::max_element(alignment.begin(), alignment.end()) > tol.gate) {
    v.conclusion = Conclusion::kIndeterminate;
    v.notes.emplace_back("frame vectors are not aligned with the factors");
    return v;
  }

  bool ok = gauss_restriction <= tol.gate && identity <= tol.gate;
  if (n > 3 && !v.flag("conformally_flat")->value) {
    ok = false;
    v.notes.emplace_back("Weyl defect above gate on a commutative instance");
  }
  auto analyze = [&](const std::vector<std::size_t>& group, double expected, const char* label) {
    if (group.size() < 2) {
      v.notes.push_back(std::string(label) + " has a single direction: curvature check skipped");
      return;
    }
    std::vector<double> secs;
    double tg_group = 0.0;
    for (std::size_t a : group)
      for (std::size_t b : group) {
        if (a < b) secs.push_back(geom.r(a, b, b, a));
        for (std::size_t c : group) tg_group = std::max(tg_group, std::abs(p.h()(a, b, c)));
      }
    double dev = 0.0;
    for (double s : secs) dev = std::max(dev, std::abs(s - expected));
    v.residuals.push_back({std::string(label) + "_sectional", secs});
    v.residuals.push_back({std::string(label) + "_totally_geodesic", {tg_group}});
    v.parameters.emplace_back("c_" + std::string(label), mean(secs));
    if (dev > tol.gate) {
      ok = false;
      v.notes.push_back(std::string(label) + " sectional curvature deviates from " + fmt(expected));
    }
    if (tg_group > tol.gate) {
      ok = false;
      v.notes.push_back(std::string(label) + " is not totally geodesic in its factor");
    }
  };
  analyze(plus, mu / 4.0, "factor1");
  analyze(minus, -mu / 4.0, "factor2");
  v.parameters.emplace_back("k", static_cast<double>(plus.size()));

  if (ok) {
    v.conclusion = Conclusion::kProductSplit;
    v.notes.emplace_back("pointwise-consistent with PRODUCT_SPLIT");
  } else {
    v.conclusion = Conclusion::kIndeterminate;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Scenario resolution

SymmetricCubic cubic_from_entries(int n, const std::vector<CubicEntry>& entries) {
  const auto un = static_cast<std::size_t>(n);
  SymmetricCubic h(un);
  std::vector<char> assigned(un * un * un, 0);
  for (const CubicEntry& e : entries) {
    for (int idx : e.indices)
      if (idx < 0 || idx >= n) {
        throw ScenarioError("h entry index " + std::to_string(idx + 1) + " outside [1, " +
                            std::to_string(n) + "]");
      }
    std::array<int, 3> perm = e.indices;
    std::sort(perm.begin(), perm.end());
    do {
      const auto pos = (static_cast<std::size_t>(perm[0]) * un + static_cast<std::size_t>(perm[1])) * un +
                       static_cast<std::size_t>(perm[2]);
      if (assigned[pos] && h(perm[0], perm[1], perm[2]) != e.value) {
        throw ScenarioError("conflicting values for h[" + std::to_string(e.indices[0] + 1) + "," +
                            std::to_string(e.indices[1] + 1) + "," +
                            std::to_string(e.indices[2] + 1) + "]");
      }
      assigned[pos] = 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
    h.set(e.indices[0], e.indices[1], e.indices[2], e.value);
  }
  return h;
}

QuadTensor curvature_from_entries(int n, const std::vector<CurvatureEntry>& entries) {
  const auto un = static_cast<std::size_t>(n);
  QuadTensor r(un);
  std::vector<char> assigned(un * un * un * un, 0);
  for (const CurvatureEntry& e : entries) {
    for (int idx : e.indices)
      if (idx < 0 || idx >= n) {
        throw ScenarioError("fixture entry index " + std::to_string(idx + 1) + " outside [1, " +
                            std::to_string(n) + "]");
      }
    const auto [i, j, k, l] = e.indices;
    auto label = [&] {
      return "R[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
             std::to_string(k + 1) + "," + std::to_string(l + 1) + "]";
    };
    if ((i == j || k == l) && e.value != 0.0) {
      throw ScenarioError("fixture entry " + label() + " violates antisymmetry");
    }
    const std::array<std::pair<std::array<int, 4>, double>, 8> orbit{{
        {{i, j, k, l}, 1.0}, {{j, i, k, l}, -1.0}, {{i, j, l, k}, -1.0}, {{j, i, l, k}, 1.0},
        {{k, l, i, j}, 1.0}, {{l, k, i, j}, -1.0}, {{k, l, j, i}, -1.0}, {{l, k, j, i}, 1.0},
    }};
    for (const auto& [idx, sign] : orbit) {
      const double value = sign * e.value;
      const auto pos = ((static_cast<std::size_t>(idx[0]) * un + static_cast<std::size_t>(idx[1])) * un +
                        static_cast<std::size_t>(idx[2])) * un + static_cast<std::size_t>(idx[3]);
      double& slot = r(idx[0], idx[1], idx[2], idx[3]);
      if (assigned[pos] && slot != value) {
        throw ScenarioError("conflicting fixture values for " + label());
      }
      assigned[pos] = 1;
      slot = value;
    }
  }
  return r;
}

std::vector<CubicEntry> entries_from_cubic(const SymmetricCubic& h) {
  std::vector<CubicEntry> out;
  const std::size_t n = h.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k)
        if (h(i, j, k) != 0.0) {
          out.push_back({{static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)}, h(i, j, k)});
        }
  return out;
}

std::vector<CurvatureEntry> entries_from_curvature(const QuadTensor& r) {
  std::vector<CurvatureEntry> out;
  const std::size_t n = r.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          if (std::make_pair(i, j) > std::make_pair(k, l)) continue;
          if (r(i, j, k, l) != 0.0) {
            out.push_back({{static_cast<int>(i), static_cast<int>(j), static_cast<int>(k),
                            static_cast<int>(l)},
                           r(i, j, k, l)});
          }
        }
  return out;
}

Instance build_instance(const Scenario& s) {
  const AmbientSpec& a = s.ambient;
  if (a.n < 2 || a.n > 12) {
    throw ScenarioError("ambient.n = " + std::to_string(a.n) + " outside [2, 12]");
  }
  try {
    AmbientSpace space = make_standard_space(a.n);
    std::optional<ProductModel> product;
    std::optional<KaehlerCurvature> curvature;
    switch (a.kind) {
      case AmbientKind::kFlat:
        if (a.mu != 0.0) throw ScenarioError("ambient.mu must be 0 for a flat ambient");
        curvature.emplace(flat_curvature(space));
        break;
      case AmbientKind::kConstantHsc:
        curvature.emplace(constant_hsc_curvature(space, a.mu));
        break;
      case AmbientKind::kProduct:
        if (a.k < 1 || a.k > a.n - 1) {
          throw ScenarioError("ambient.k = " + std::to_string(a.k) + " outside [1, " +
                              std::to_string(a.n - 1) + "]");
        }
        if (a.mu == 0.0) throw ScenarioError("ambient.mu must be nonzero for a product ambient");
        product.emplace(ProductModel::canonical(space, a.mu, a.k));
        curvature.emplace(product_curvature(*product));
        break;
    }

    std::vector<Vector> frame;
    if (s.frame) {
      frame = *s.frame;
    } else {
      for (int i = 0; i < a.n; ++i) frame.push_back(Vector::basis(space.dim(), static_cast<std::size_t>(i)));
    }
    SymmetricCubic h = cubic_from_entries(a.n, s.h);
    std::optional<QuadTensor> fixture;
    if (s.fixture) fixture = curvature_from_entries(a.n, *s.fixture);
    return Instance{SubmanifoldPoint(std::move(*curvature), std::move(frame), std::move(h),
                                     std::move(fixture)),
                    std::move(product)};
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Generators

Scenario gen_product_type_instance(int n, double c, const ProductTypeOptions& opt) {
  if (n < 4 || n > 12) throw std::invalid_argument("gen_product_type_instance: n outside [4, 12]");
  if (opt.axis < 0 || opt.axis >= n) throw std::invalid_argument("gen_product_type_instance: axis");
  double b;
  double mu;
  if (opt.coupling) {
    b = *opt.coupling;
    mu = 4.0 * (c - b * b);
  } else if (c > 0.0) {
    b = std::sqrt(c);
    mu = 0.0;
  } else if (c < 0.0) {
    b = 1.0;
    mu = 4.0 * (c - 1.0);
  } else {
    b = 0.0;
    mu = 0.0;
  }
  if (b == 0.0 && mu != 0.0) {
    throw std::invalid_argument("gen_product_type_instance: zero coupling needs c = 0");
  }
  // Off-axis sectional curvature: mu/4 + b^2 = c. Axis sectional curvature:
  // mu/4 + a b - b^2 = 0.
  const double a = b == 0.0 ? 1.0 : (b * b - mu / 4.0) / b;

  Scenario s;
  std::ostringstream name;
  name << "product_type_n" << n << "_c" << c;
  s.name = name.str();
  s.ambient = {mu == 0.0 ? AmbientKind::kFlat : AmbientKind::kConstantHsc, n, 0, mu};
  s.h.push_back({{opt.axis, opt.axis, opt.axis}, a});
  if (b != 0.0) {
    for (int j = 0; j < n; ++j)
      if (j != opt.axis) s.h.push_back({{opt.axis, j, j}, b});
  }
  return s;
}

Scenario gen_totally_geodesic_product(int n, int k, double mu) {
  if (n < 2 || n > 12) throw std::invalid_argument("gen_totally_geodesic_product: n outside [2, 12]");
  if (k < 1 || k > n - 1) throw std::invalid_argument("gen_totally_geodesic_product: k outside [1, n-1]");
  if (mu == 0.0) throw std::invalid_argument("gen_totally_geodesic_product: mu must be nonzero");
  Scenario s;
  std::ostringstream name;
  name << "totally_geodesic_product_n" << n << "_k" << k << "_mu" << mu;
  s.name = name.str();
  s.ambient = {AmbientKind::kProduct, n, k, mu};
  return s;
}

Scenario gen_flat_instance(int n, std::uint64_t seed) {
  if (n < 2 || n > 12) throw std::invalid_argument("gen_flat_instance: n outside [2, 12]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Scenario s;
  s.name = "flat_n" + std::to_string(n) + "_seed" + std::to_string(seed);
  s.ambient = {AmbientKind::kFlat, n, 0, 0.0};
  for (int i = 0; i < n; ++i) s.h.push_back({{i, i, i}, dist(rng)});
  s.seed = seed;
  return s;
}

Scenario gen_random_instance(int n, std::uint64_t seed, const RandomOptions& opt) {
  if (n < 2 || n > 12) throw std::invalid_argument("gen_random_instance: n outside [2, 12]");
  if (opt.traceless && opt.commuting) {
    throw std::invalid_argument("gen_random_instance: traceless and commuting force h = 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const auto un = static_cast<std::size_t>(n);

  SymmetricCubic h(un);
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = i; j < un; ++j)
      for (std::size_t k = j; k < un; ++k) {
        const double v = dist(rng);
        if (!opt.commuting || (i == j && j == k)) h.set(i, j, k, v);
      }
  if (opt.traceless) {
    // h - (t_k d_ij + t_i d_jk + t_j d_ki)/(n+2) has zero trace in every slot pair
    std::vector<double> t(un, 0.0);
    for (std::size_t k = 0; k < un; ++k)
      for (std::size_t i = 0; i < un; ++i) t[k] += h(k, i, i);
    SymmetricCubic projected(un);
    const double w = 1.0 / (static_cast<double>(n) + 2.0);
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = i; j < un; ++j)
        for (std::size_t k = j; k < un; ++k) {
          const double corr = (i == j ? t[k] : 0.0) + (j == k ? t[i] : 0.0) + (k == i ? t[j] : 0.0);
          projected.set(i, j, k, h(i, j, k) - w * corr);
        }
    h = projected;
  }

  Scenario s;
  s.name = "random_n" + std::to_string(n) + "_seed" + std::to_string(seed);
  s.ambient.kind = opt.ambient;
  s.ambient.n = n;
  if (opt.ambient == AmbientKind::kProduct) {
    s.ambient.k = opt.k;
    s.ambient.mu = opt.mu;
  } else if (opt.ambient == AmbientKind::kConstantHsc) {
    s.ambient.mu = opt.mu;
  }
  s.h = entries_from_cubic(h);
  s.seed = seed;

  if (opt.rotate_frame) {
    const AmbientSpace flat_n = make_standard_space(n);
    std::vector<Vector> raw;
    for (std::size_t i = 0; i < un; ++i) {
      Vector v(2 * un);
      for (std::size_t a = 0; a < un; ++a) v[a] = dist(rng);
      raw.push_back(std::move(v));
    }
    s.frame = orthonormalize(flat_n, std::move(raw));
  }
  return s;
}

QuadTensor conformally_flat_from_ricci(const Matrix& ric) {
  const std::size_t n = ric.dim();
  if (n <= 3) throw std::invalid_argument("conformally_flat_from_ricci: requires n > 3");
  const Matrix g = Matrix::identity(n);
  const double tau = scalar(ric, g);
  const double nn = static_cast<double>(n);
  QuadTensor r = (1.0 / (nn - 2.0)) * phi(g, ric);
  r -= (tau / (2.0 * (nn - 1.0) * (nn - 2.0))) * phi(g, g);
  return r;
}

Scenario gen_conformally_flat_fixture(const std::vector<double>& eigenvalues, const Vector& jh) {
  const std::size_t n = eigenvalues.size();
  if (n < 4 || n > 12) throw std::invalid_argument("gen_conformally_flat_fixture: n outside [4, 12]");
  if (jh.dim() != n) throw DimensionError("gen_conformally_flat_fixture: jh dimension");
  Matrix ric(n);
  for (std::size_t i = 0; i < n; ++i) ric(i, i) = eigenvalues[i];
  const QuadTensor r = conformally_flat_from_ricci(ric);

  const double alpha = -static_cast<double>(n) / (static_cast<double>(n) + 2.0);
  SymmetricCubic h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        const double v = (i == j ? jh[k] : 0.0) + (j == k ? jh[i] : 0.0) + (k == i ? jh[j] : 0.0);
        if (v != 0.0) h.set(i, j, k, alpha * v);
      }

  Scenario s;
  s.name = "conformally_flat_fixture_n" + std::to_string(n);
  s.ambient = {AmbientKind::kFlat, static_cast<int>(n), 0, 0.0};
  s.h = entries_from_cubic(h);
  s.fixture = entries_from_curvature(r);
  return s;
}

}  // namespace kahler
