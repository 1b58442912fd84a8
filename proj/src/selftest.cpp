#include "kahler/selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "kahler/classifier.hpp"

namespace kahler {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Matrix random_symmetric(Rng& rng, std::size_t d) {
  Matrix m(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) m(a, b) = m(b, a) = uniform(rng);
  return m;
}

Matrix random_j_invariant(Rng& rng, const AmbientSpace& space) {
  const Matrix& j = space.complex_structure();
  const Matrix x = random_symmetric(rng, space.dim());
  return (0.5 * (x + j.transposed() * x * j)).symmetrized();
}

KaehlerCurvature random_kaehler(Rng& rng, int n, int terms = 2) {
  AmbientSpace space = make_standard_space(n);
  QuadTensor r(space.dim());
  for (int t = 0; t < terms; ++t) {
    const Matrix p = random_j_invariant(rng, space);
    const Matrix q = random_j_invariant(rng, space);
    r += phi(p, q) + psi(p, space.complex_structure(), q);
  }
  return KaehlerCurvature(std::move(space), std::move(r));
}

QuadTensor random_curvature_like(Rng& rng, std::size_t n) {
  QuadTensor r(n);
  for (int t = 0; t < 3; ++t) r += phi(random_symmetric(rng, n), random_symmetric(rng, n));
  return r;
}

// Independent component loop for the Gauss equation.
QuadTensor gauss_loop(const SubmanifoldPoint& p) {
  const std::size_t n = p.frame().size();
  const QuadTensor& amb = p.ambient().tensor();
  const SymmetricCubic& h = p.h();
  QuadTensor r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double v = evaluate(amb, p.frame()[i], p.frame()[j], p.frame()[k], p.frame()[l]);
          for (std::size_t m = 0; m < n; ++m) v += h(m, i, l) * h(m, j, k) - h(m, j, l) * h(m, i, k);
          r(i, j, k, l) = v;
        }
  return r;
}

std::vector<Scenario> random_scenarios(int count) {
  std::vector<Scenario> out;
  for (int t = 0; t < count; ++t) {
    const int n = 4 + t % 3;
    RandomOptions opt;
    if (t % 2 == 1) {
      opt.ambient = AmbientKind::kProduct;
      opt.k = 1 + (t / 2) % (n - 1);
      opt.mu = (t % 4 == 1) ? 1.0 : -2.5;
    }
    opt.rotate_frame = (t % 5 == 0);
    out.push_back(gen_random_instance(n, 1000 + static_cast<std::uint64_t>(t), opt));
  }
  return out;
}

Scenario product_type_case(int t) {
  static constexpr double cs[] = {1.0, -1.0, 2.0, -2.0};
  const int n = 4 + t % 3;
  const double c = cs[(t / 3) % 4];
  ProductTypeOptions opt;
  opt.axis = t % n;
  if (t >= 12) {
    Rng rng(7000 + static_cast<std::uint64_t>(t));
    opt.coupling = uniform(rng, 0.5, 1.5);
  }
  return gen_product_type_instance(n, c, opt);
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

struct Suite {
  const char* name;
  std::function<SuiteResult(const SelftestOptions&)> run;
};

SuiteResult phi_psi_linearity(const SelftestOptions&) {
  SuiteResult r{"phi_psi_linearity", false, 0.0, 1e-12, "", 0.0};
  Rng rng(11);
  for (int n = 1; n <= 4; ++n) {
    const AmbientSpace space = make_standard_space(n);
    const Matrix& g = space.metric();
    const Matrix& j = space.complex_structure();
    for (int t = 0; t < 10; ++t) {
      const Matrix p = random_j_invariant(rng, space);
      const Matrix q = random_j_invariant(rng, space);
      const double a = uniform(rng), b = uniform(rng);
      const Matrix mix = a * p + b * q;
      r.max_defect = std::max(r.max_defect, defect_norm(phi(g, mix) - a * phi(g, p) - b * phi(g, q)));
      r.max_defect = std::max(r.max_defect, defect_norm(psi(g, j, mix) - a * psi(g, j, p) - b * psi(g, j, q)));
      const QuadTensor k = phi(g, p) + psi(g, j, p);
      r.max_defect = std::max(r.max_defect, curvature_symmetry(k).worst());
      r.max_defect = std::max(r.max_defect, kaehler_symmetry_defect(k, j));
    }
  }
  r.passed = r.max_defect <= r.threshold;
  r.detail = "linearity, curvature and Kaehler symmetry of phi + psi";
  return r;
}

SuiteResult bochner_trace_free(const SelftestOptions&) {
  SuiteResult r{"bochner_trace_free", false, 0.0, 1e-10, "", 0.0};
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const KaehlerCurvature k = random_kaehler(rng, 2 + t % 3);
    r.max_defect = std::max(r.max_defect, defect_norm(ricci(bochner(k), k.space().metric())));
  }
  r.passed = r.max_defect <= r.threshold;
  r.detail = "Ricci contraction of B on 100 random Kaehler tensors";
  return r;
}

SuiteResult bochner_product_vanishing(const SelftestOptions&) {
  SuiteResult r{"bochner_product_vanishing", false, 0.0, 1e-10, "", 0.0};
  int cases = 0;
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k <= n - 1; ++k)
      for (double mu : {-1.0, 1.0, 2.5}) {
        r.max_defect = std::max(r.max_defect, defect_norm(bochner(direct_sum_curvature(n, k, mu))));
        r.max_defect = std::max(
            r.max_defect,
            defect_norm(bochner(product_curvature(ProductModel::canonical(make_standard_space(n), mu, k)))));
        ++cases;
      }
  r.passed = r.max_defect <= r.threshold;
  r.detail = std::to_string(cases) + " product ambients";
  return r;
}

SuiteResult product_curvature_oracle(const SelftestOptions& opt) {
  SuiteResult r{"product_curvature_oracle", false, 0.0, 1e-12, "", 0.0};
  double min_printed_ratio = INFINITY;
  double printed_211 = 0.0;
  bool printed_ok = true;
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k <= n - 1; ++k)
      for (double mu : {-1.0, 1.0, 2.5}) {
        const ProductModel model = ProductModel::canonical(make_standard_space(n), mu, k);
        const QuadTensor oracle = direct_sum_curvature(n, k, mu).tensor();
        const QuadTensor corrected = product_curvature_tensor(
            model, opt.sabotage_product_sign ? ProductCurvatureSign::kPrinted : ProductCurvatureSign::kCorrected);
        const double printed =
            defect_norm(product_curvature_tensor(model, ProductCurvatureSign::kPrinted) - oracle);
        r.max_defect = std::max(r.max_defect, defect_norm(corrected - oracle));
        min_printed_ratio = std::min(min_printed_ratio, printed / std::abs(mu));
        printed_ok = printed_ok && printed > 0.1 * std::abs(mu);
        if (n == 2 && k == 1 && mu == 1.0) printed_211 = printed;
      }
  r.passed = r.max_defect <= r.threshold && printed_ok;
  r.detail = "printed-sign variant: min defect/|mu| " + num(min_printed_ratio) + ", defect at (n,k,mu)=(2,1,1) " +
             num(printed_211);
  if (opt.sabotage_product_sign) r.detail += " [sabotaged]";
  return r;
}

SuiteResult constant_hsc_calibration(const SelftestOptions&) {
  SuiteResult r{"constant_hsc_calibration", false, 0.0, 1e-12, "", 0.0};
  Rng rng(13);
  for (int n = 2; n <= 5; ++n)
    for (double mu : {-1.0, 1.0, 2.5}) {
      const AmbientSpace space = make_standard_space(n);
      const KaehlerCurvature single = product_curvature(ProductModel::single_factor(space, mu));
      r.max_defect = std::max(r.max_defect, defect_norm(single.tensor() - constant_hsc_curvature(space, mu).tensor()));
      for (int t = 0; t < 5; ++t) {
        Vector x(space.dim());
        for (std::size_t a = 0; a < space.dim(); ++a) x[a] = uniform(rng);
        r.max_defect = std::max(r.max_defect, std::abs(holomorphic_sectional(single, x) - mu));
      }
      // totally real orthonormal pair inside span(e_1..e_n)
      Vector x(space.dim()), y(space.dim());
      const double th = uniform(rng, 0.0, 3.0);
      x[0] = std::cos(th);
      x[1] = std::sin(th);
      y[0] = -std::sin(th);
      y[1] = std::cos(th);
      r.max_defect = std::max(r.max_defect, std::abs(evaluate(single.tensor(), x, y, y, x) - mu / 4.0));
    }
  r.passed = r.max_defect <= r.threshold;
  r.detail = "F = Id: holomorphic sectional mu, totally real sectional mu/4";
  return r;
}

SuiteResult gauss_oracle(const SelftestOptions&) {
  SuiteResult r{"gauss_oracle", false, 0.0, 1e-14, "", 0.0};
  bool valid = true;
  for (const Scenario& s : random_scenarios(200)) {
    const Instance inst = build_instance(s);
    const QuadTensor lib = gauss_tensor(inst.point);
    r.max_defect = std::max(r.max_defect, defect_norm(lib - gauss_loop(inst.point)));
    valid = valid && is_curvature_like(lib);
  }
  r.passed = r.max_defect <= r.threshold && valid;
  r.detail = std::string("200 random instances, validator ") + (valid ? "passes" : "FAILS");
  return r;
}

SuiteResult semiparallel_dual_path(const SelftestOptions&) {
  SuiteResult r{"semiparallel_dual_path", false, 0.0, 1e-12, "", 0.0};
  double largest = 0.0;
  for (const Scenario& s : random_scenarios(200)) {
    const Instance inst = build_instance(s);
    const SemiparallelDefect d = semiparallel_defect(inst.point, gauss_intrinsic(inst.point));
    r.max_defect = std::max(r.max_defect, std::abs(d.componentwise - d.rbar_sigma));
    largest = std::max(largest, d.componentwise);
  }
  r.passed = r.max_defect <= r.threshold;
  r.detail = "200 random instances, largest defect " + num(largest);
  return r;
}

SuiteResult proposition_forward(const SelftestOptions&) {
  SuiteResult r{"proposition_forward", false, 0.0, 1e-10, "", 0.0};
  bool qe = true;
  for (int t = 0; t < 100; ++t) {
    const Instance inst = build_instance(product_type_case(t));
    const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
    const PropositionResiduals prop = proposition_residuals(inst.point, geom);
    r.max_defect = std::max({r.max_defect, defect_norm(prop.pair_residual), std::abs(prop.s_jh_jh),
                             mc_semiparallel_defect(geom)});
    qe = qe && prop.quasi_einstein;
  }
  r.passed = r.max_defect <= r.threshold && qe;
  r.detail = std::string("100 product-type instances, quasi-Einstein ") + (qe ? "everywhere" : "FAILS");
  return r;
}

SuiteResult proposition_converse(const SelftestOptions&) {
  SuiteResult r{"proposition_converse", false, 0.0, 1e-9, "", 0.0};
  Rng rng(14);
  int flagged = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 4 + t % 3;
    std::vector<double> spectrum;
    for (int i = 0; i < n; ++i) spectrum.push_back(static_cast<double>(i) + uniform(rng, 0.1, 0.9));
    Vector jh(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) jh[static_cast<std::size_t>(i)] = uniform(rng, 0.5, 1.5);
    const Instance inst = build_instance(gen_conformally_flat_fixture(spectrum, jh));
    if (classify_theorem_1_2(inst.point, Mode::kMcSemiparallel).conclusion == Conclusion::kHypothesisViolation) {
      ++flagged;
    }
  }
  // satisfying side: product-type spectrum with JH on the zero eigenvector
  for (int n = 4; n <= 6; ++n)
    for (double c : {-1.0, 1.0}) {
      std::vector<double> spectrum(static_cast<std::size_t>(n), (n - 2) * c);
      spectrum[0] = 0.0;
      Vector jh(static_cast<std::size_t>(n));
      jh[0] = 0.7;
      const Instance inst = build_instance(gen_conformally_flat_fixture(spectrum, jh));
      const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
      r.max_defect = std::max({r.max_defect, mc_semiparallel_defect(geom),
                               defect_norm(proposition_residuals(inst.point, geom).pair_residual)});
    }
  r.passed = flagged == 100 && r.max_defect <= r.threshold;
  r.detail = std::to_string(flagged) + "/100 violating fixtures flagged";
  return r;
}

SuiteResult lemma_implications(const SelftestOptions&) {
  SuiteResult r{"lemma_implications", false, 0.0, 1e-9, "", 0.0};
  int fired = 0;
  for (int t = 0; t < 24; ++t) {
    const Instance inst = build_instance(product_type_case(t));
    const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
    const LemmaResiduals lem = lemma_residuals(inst.point, geom);
    if (!lem.applicable) r.max_defect = INFINITY;
    for (const LemmaCheck& c : lem.checks) fired += c.fires ? 1 : 0;
    r.max_defect = std::max(r.max_defect, lem.max_fired_residual);
  }
  r.passed = r.max_defect <= r.threshold && fired > 0;
  r.detail = std::to_string(fired) + " implications fired";
  return r;
}

SuiteResult theorem3_end_to_end(const SelftestOptions&) {
  SuiteResult r{"theorem3_end_to_end", false, 0.0, 1e-10, "", 0.0};
  int split = 0, cases = 0;
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k <= n - 1; ++k)
      for (double mu : {-1.0, 1.0, 2.5}) {
        ++cases;
        const Instance inst = build_instance(gen_totally_geodesic_product(n, k, mu));
        const Verdict v = classify_theorem_3(inst.point, *inst.product);
        if (v.conclusion == Conclusion::kProductSplit) ++split;
        if (const auto c1 = v.parameter("c_factor1")) r.max_defect = std::max(r.max_defect, std::abs(*c1 - mu / 4.0));
        if (const auto c2 = v.parameter("c_factor2")) r.max_defect = std::max(r.max_defect, std::abs(*c2 + mu / 4.0));
        r.max_defect = std::max(r.max_defect, v.residual("product_identity")->values[0]);
        r.max_defect = std::max(r.max_defect, v.flag("commutative")->defect);
      }
  r.passed = split == cases && r.max_defect <= r.threshold;
  r.detail = std::to_string(split) + "/" + std::to_string(cases) + " PRODUCT_SPLIT";
  return r;
}

SuiteResult weyl_suite(const SelftestOptions&) {
  SuiteResult r{"weyl", false, 0.0, 1e-10, "", 0.0};
  for (std::size_t n = 4; n <= 6; ++n) {
    const Matrix g = Matrix::identity(n);
    for (double c : {-1.0, 1.0}) {
      r.max_defect = std::max(r.max_defect, defect_norm(weyl_tensor((c / 2.0) * phi(g, g), g)));
      Matrix p = Matrix::identity(n);
      p(0, 0) = 0.0;
      r.max_defect = std::max(r.max_defect, defect_norm(weyl_tensor((c / 2.0) * phi(p, p), g)));
    }
  }
  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 4 + static_cast<std::size_t>(t % 3);
    const Matrix g = Matrix::identity(n);
    r.max_defect = std::max(r.max_defect, defect_norm(ricci(weyl_tensor(random_curvature_like(rng, n), g), g)));
  }
  r.passed = r.max_defect <= r.threshold;
  r.detail = "space forms, M^{n-1}(c) x I, trace of 30 random Weyl tensors";
  return r;
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {"phi_psi_linearity", phi_psi_linearity},
      {"bochner_trace_free", bochner_trace_free},
      {"bochner_product_vanishing", bochner_product_vanishing},
      {"product_curvature_oracle", product_curvature_oracle},
      {"constant_hsc_calibration", constant_hsc_calibration},
      {"gauss_oracle", gauss_oracle},
      {"semiparallel_dual_path", semiparallel_dual_path},
      {"proposition_forward", proposition_forward},
      {"proposition_converse", proposition_converse},
      {"lemma_implications", lemma_implications},
      {"theorem3_end_to_end", theorem3_end_to_end},
      {"weyl", weyl_suite},
  };
  return all;
}

}  // namespace

std::vector<std::string> selftest_suite_names() {
  std::vector<std::string> out;
  for (const Suite& s : suites()) out.emplace_back(s.name);
  return out;
}

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt) {
  std::vector<SuiteResult> out;
  for (const Suite& s : suites()) {
    if (!opt.filter.empty() && std::string(s.name).find(opt.filter) == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    SuiteResult res = s.run(opt);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace kahler
