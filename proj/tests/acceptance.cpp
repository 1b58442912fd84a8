// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "kahler/classifier.hpp"
#include "kahler/cli.hpp"
#include "oracles.hpp"

using namespace kahler;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string measured;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

template <typename F>
void each_grid_case(F&& f) {
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k <= n - 1; ++k)
      for (double mu : {-1.0, 1.0, 2.5}) f(n, k, mu);
}

std::vector<Scenario> random_instances() {
  std::vector<Scenario> out;
  for (int t = 0; t < 200; ++t) {
    const int n = 4 + t % 3;
    RandomOptions opt;
    if ((t / 3) % 2 == 1) {
      opt.ambient = AmbientKind::kProduct;
      opt.k = 1 + (t / 6) % (n - 1);
      opt.mu = t % 4 < 2 ? 1.0 : -2.5;
    }
    opt.rotate_frame = t % 4 == 0;
    out.push_back(gen_random_instance(n, 5000 + static_cast<std::uint64_t>(t), opt));
  }
  return out;
}

Outcome criterion_1() {
  const auto start = Clock::now();
  double worst = 0.0, min_printed_ratio = INFINITY;
  bool printed_ok = true;
  each_grid_case([&](int n, int k, double mu) {
    const ProductModel model = ProductModel::canonical(make_standard_space(n), mu, k);
    const QuadTensor oracle = oracle::direct_sum(static_cast<std::size_t>(n), static_cast<std::size_t>(k), mu);
    worst = std::max(worst, oracle::max_abs(product_curvature_tensor(model), oracle));
    const double printed = oracle::max_abs(product_curvature_tensor(model, ProductCurvatureSign::kPrinted), oracle);
    printed_ok = printed_ok && printed > 0.1 * std::abs(mu);
    min_printed_ratio = std::min(min_printed_ratio, printed / std::abs(mu));
  });
  const double elapsed = seconds_since(start);
  return {worst <= 1e-12 && printed_ok && elapsed < 5.0,
          "max defect " + sci(worst) + " (tol 1e-12), printed-sign min defect/|mu| " + sci(min_printed_ratio) +
              " (needs > 0.1), " + sci(elapsed) + " s (< 5)"};
}

Outcome criterion_2() {
  double vanish = 0.0;
  each_grid_case([&](int n, int k, double mu) {
    vanish = std::max(vanish, defect_norm(bochner(direct_sum_curvature(n, k, mu))));
  });
  std::mt19937_64 rng(202);
  double trace = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 4);
    const KaehlerCurvature k(make_standard_space(static_cast<int>(n)), oracle::random_kaehler(rng, n));
    trace = std::max(trace, defect_norm(oracle::ricci(bochner(k))));
  }
  return {vanish <= 1e-10 && trace <= 1e-10,
          "product vanishing " + sci(vanish) + ", trace on 100 random " + sci(trace) + " (tol 1e-10)"};
}

Outcome criterion_3() {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> normal;
  double hsc = 0.0, tr = 0.0;
  for (int n = 2; n <= 6; ++n)
    for (double mu : {-1.0, 1.0, 2.5}) {
      const AmbientSpace space = make_standard_space(n);
      const QuadTensor r = product_curvature(ProductModel::single_factor(space, mu)).tensor();
      const std::size_t d = space.dim();
      for (int t = 0; t < 10; ++t) {
        Vector x(d);
        double norm = 0.0;
        for (std::size_t a = 0; a < d; ++a) norm += (x[a] = normal(rng)) * x[a];
        x *= 1.0 / std::sqrt(norm);
        const Vector jx = space.apply_j(x);
        hsc = std::max(hsc, std::abs(evaluate(r, x, jx, jx, x) - mu));
      }
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
        for (std::size_t j = i + 1; j < static_cast<std::size_t>(n); ++j) tr = std::max(tr, std::abs(r(i, j, j, i) - mu / 4.0));
    }
  return {hsc <= 1e-12 && tr <= 1e-12,
          "holomorphic sectional " + sci(hsc) + ", totally real sectional " + sci(tr) + " (tol 1e-12)"};
}

Outcome criterion_4(const std::vector<Scenario>& instances) {
  double worst = 0.0;
  int invalid = 0;
  for (const Scenario& s : instances) {
    const Instance inst = build_instance(s);
    const QuadTensor r = gauss_intrinsic(inst.point).r;
    worst = std::max(worst, oracle::max_abs(r, oracle::gauss(inst.point)));
    if (!is_curvature_like(r)) ++invalid;
  }
  return {worst <= 1e-14 && invalid == 0,
          "max deviation " + sci(worst) + " (tol 1e-14), validator failures " + std::to_string(invalid) + "/200"};
}

Outcome criterion_5(const std::vector<Scenario>& instances) {
  double worst = 0.0, oracle_gap = 0.0;
  for (const Scenario& s : instances) {
    const Instance inst = build_instance(s);
    const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
    const SemiparallelDefect d = semiparallel_defect(inst.point, geom);
    worst = std::max(worst, std::abs(d.componentwise - d.rbar_sigma));
    const double o = oracle::semiparallel(geom.r, inst.point.h());
    oracle_gap = std::max(oracle_gap, std::abs(d.rbar_sigma - o) / std::max(1.0, o));
  }
  return {worst <= 1e-12 && oracle_gap <= 1e-12,
          "path disagreement " + sci(worst) + " (tol 1e-12), relative gap to oracle " + sci(oracle_gap)};
}

Outcome criterion_6() {
  static constexpr double cs[] = {1.0, -1.0, 2.0, -2.0};
  double worst = 0.0;
  int qe = 0;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int t = 0; t < 100; ++t) {
    const int n = 4 + t % 3;
    ProductTypeOptions opt;
    opt.axis = (t / 12) % n;
    if (t >= 12) opt.coupling = u(rng);
    const Instance inst = build_instance(gen_product_type_instance(n, cs[(t / 3) % 4], opt));
    // residuals recomputed from the oracle Gauss tensor
    const QuadTensor r = oracle::gauss(inst.point);
    const Matrix ric = oracle::ricci(r);
    const double q = oracle::trace(ric) / (n - 1.0);
    const Spectrum sp = sym_eigen(ric);
    const Vector jh = oracle::jh(inst.point.h());
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j) {
        if (i == j) continue;
        double w = 0.0;
        for (std::size_t a = 0; a < un; ++a) w += sp.eigenvectors(a, j) * jh[a];
        worst = std::max(worst, std::abs((sp.eigenvalues[i] + sp.eigenvalues[j] - q) * w));
      }
    double sjj = 0.0;
    for (std::size_t a = 0; a < un; ++a)
      for (std::size_t b = 0; b < un; ++b) sjj += jh[a] * ric(a, b) * jh[b];
    worst = std::max({worst, std::abs(sjj), oracle::mc_semiparallel(r, jh)});
    const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
    const PropositionResiduals prop = proposition_residuals(inst.point, geom);
    worst = std::max({worst, defect_norm(prop.pair_residual), std::abs(prop.s_jh_jh), mc_semiparallel_defect(geom)});
    if (prop.quasi_einstein) ++qe;
  }
  int flagged = 0;
  std::uniform_real_distribution<double> off(0.1, 0.9);
  for (int t = 0; t < 100; ++t) {
    const int n = 4 + t % 3;
    std::vector<double> spectrum;
    for (int i = 0; i < n; ++i) spectrum.push_back(1.5 * i - 2.0 + off(rng));
    Vector jh(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < jh.dim(); ++i) jh[i] = off(rng) * (i % 2 ? 1.0 : -1.0);
    const Instance inst = build_instance(gen_conformally_flat_fixture(spectrum, jh));
    if (classify_theorem_1_2(inst.point, Mode::kMcSemiparallel).conclusion == Conclusion::kHypothesisViolation) {
      ++flagged;
    }
  }
  return {worst <= 1e-10 && qe == 100 && flagged == 100,
          "max residual " + sci(worst) + " (tol 1e-10), quasi-Einstein " + std::to_string(qe) +
              "/100, violations flagged " + std::to_string(flagged) + "/100"};
}

Outcome criterion_7() {
  int split = 0, cases = 0;
  double curv = 0.0, comm = 0.0, ident = 0.0, weyl_def = 0.0;
  each_grid_case([&](int n, int k, double mu) {
    ++cases;
    const Instance inst = build_instance(gen_totally_geodesic_product(n, k, mu));
    const Verdict v = classify_theorem_3(inst.point, *inst.product);
    if (v.conclusion == Conclusion::kProductSplit) ++split;
    // factor curvatures from the component loop
    const QuadTensor r = oracle::gauss(inst.point);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const bool one_i = i < k, one_j = j < k;
        if (one_i != one_j) continue;
        curv = std::max(curv, std::abs(r(i, j, j, i) - (one_i ? mu / 4.0 : -mu / 4.0)));
      }
    if (k > 1) curv = std::max(curv, std::abs(*v.parameter("c_factor1") - mu / 4.0));
    if (n - k > 1) curv = std::max(curv, std::abs(*v.parameter("c_factor2") + mu / 4.0));
    comm = std::max(comm, v.flag("commutative")->defect);
    ident = std::max(ident, v.residual("product_identity")->values[0]);
    // product identity on frame triples from the oracle tensor: R(X,Y,Z,X) = mu/8 g(FY,Z)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          if (i == j || j == l || i == l) continue;
          ident = std::max(ident, std::abs(r(i, j, l, i)));  // g(F e_j, e_l) = 0 for j != l
        }
    if (n >= 4) weyl_def = std::max(weyl_def, oracle::max_abs(oracle::weyl(r)));
  });
  return {split == cases && curv <= 1e-10 && comm == 0.0 && ident <= 1e-10 && weyl_def <= 1e-9,
          std::to_string(split) + "/" + std::to_string(cases) + " PRODUCT_SPLIT, factor curvature " + sci(curv) +
              ", commutative " + sci(comm) + ", product identity " + sci(ident) + ", Weyl " + sci(weyl_def)};
}

Outcome criterion_8() {
  double fixtures = 0.0;
  for (std::size_t n = 4; n <= 6; ++n) {
    const Matrix g = Matrix::identity(n);
    for (double c : {-1.0, 1.0}) {
      fixtures = std::max(fixtures, defect_norm(weyl_tensor((c / 2.0) * oracle::phi(g), g)));
      for (std::size_t axis = 0; axis < n; ++axis) {
        Matrix p = Matrix::identity(n);
        p(axis, axis) = 0.0;
        // c on span(e_j, j != axis): (c/2) Kulkarni-Nomizu square of the projection
        QuadTensor r(n);
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z)
              for (std::size_t u = 0; u < n; ++u)
                r(x, y, z, u) = c * (p(x, u) * p(y, z) - p(x, z) * p(y, u));
        fixtures = std::max(fixtures, defect_norm(weyl_tensor(r, g)));
      }
    }
  }
  std::mt19937_64 rng(808);
  double trace = 0.0;
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 4 + static_cast<std::size_t>(t % 3);
    trace = std::max(trace, defect_norm(oracle::ricci(weyl_tensor(oracle::random_curvature_like(rng, n),
                                                                  Matrix::identity(n)))));
  }
  return {fixtures <= 1e-10 && trace <= 1e-10,
          "fixture defect " + sci(fixtures) + ", trace on random " + sci(trace) + " (tol 1e-10)"};
}

Outcome criterion_9() {
  const auto start = Clock::now();
  const char* argv[] = {"kahlerlab", "selftest"};
  std::ostringstream out, err;
  std::istringstream in;
  const int code = run_cli(2, argv, out, err, in);
  const double elapsed = seconds_since(start);
  return {code == 0 && elapsed < 60.0, "exit " + std::to_string(code) + ", " + sci(elapsed) + " s (< 60)"};
}

}  // namespace

int main() {
  const std::vector<Scenario> instances = random_instances();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 product curvature closed form vs direct sum", criterion_1},
      {"2 Bochner vanishing and trace-freeness", criterion_2},
      {"3 constant holomorphic sectional curvature calibration", criterion_3},
      {"4 Gauss equation vs component loop", [&] { return criterion_4(instances); }},
      {"5 semiparallel dual-path agreement", [&] { return criterion_5(instances); }},
      {"6 Proposition forward and violation suites", criterion_6},
      {"7 Theorem 3 end-to-end", criterion_7},
      {"8 Weyl tensor correctness", criterion_8},
      {"9 full self-test", criterion_9},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.measured.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
