#include <doctest.h>

#include <cmath>
#include <random>

#include "kahler/classifier.hpp"
#include "oracles.hpp"

using namespace kahler;

namespace {

std::vector<double> spectrum_of(const Scenario& s) {
  return gauss_intrinsic(build_instance(s).point).spectrum.eigenvalues;
}

Verdict classify(const Scenario& s, Mode mode = Mode::kSemiparallel) {
  return classify_theorem_1_2(build_instance(s).point, mode);
}

Verdict classify3(const Scenario& s) {
  const Instance inst = build_instance(s);
  return classify_theorem_3(inst.point, *inst.product);
}

}  // namespace

TEST_SUITE("classifier") {

TEST_CASE("cluster splitting") {
  const ClusterSplit s = split_clusters({0.0, 3.0, 3.0, 3.0}, 1e-8);
  CHECK(s.small == std::vector<double>{0.0});
  CHECK(s.large.size() == 3);
  CHECK(split_clusters({1.0, 1.0 + 1e-10}, 1e-8).single_cluster);
  CHECK(is_quasi_einstein({0.0, 3.0, 3.0, 3.0}, 1e-8));
  CHECK(is_quasi_einstein({-4.0, -4.0, -4.0, 0.0}, 1e-8));
  CHECK(is_quasi_einstein({2.0, 2.0, 2.0, 2.0}, 1e-8));
  CHECK_FALSE(is_quasi_einstein({0.0, 1.0, 3.0, 3.0}, 1e-8));
  CHECK_FALSE(is_quasi_einstein({0.0, 0.0, 3.0, 3.0}, 1e-8));
  CHECK(quasi_einstein_defect({0.0, 1.0, 3.0, 3.0}) == 2.0);
  CHECK(quasi_einstein_defect({0.0, 3.0, 3.0, 3.0}) == 0.0);
}

TEST_CASE("product-type generator spectra") {
  const std::vector<double> s5 = spectrum_of(gen_product_type_instance(5, 1.0));
  REQUIRE(s5.size() == 5);
  CHECK(std::abs(s5[0]) <= 1e-12);
  for (std::size_t i = 1; i < 5; ++i) CHECK(s5[i] == doctest::Approx(3.0).epsilon(1e-12));

  const std::vector<double> s4 = spectrum_of(gen_product_type_instance(4, -2.0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(s4[i] == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(std::abs(s4[3]) <= 1e-12);

  // the intrinsic tensor is c on span(e_2..e_n) and zero on slots with e_1
  const IntrinsicGeometry geom = gauss_intrinsic(build_instance(gen_product_type_instance(5, -1.0)).point);
  CHECK(geom.r(1, 2, 2, 1) == doctest::Approx(-1.0));
  CHECK(geom.r(0, 2, 2, 0) == doctest::Approx(0.0));
  CHECK(defect_norm(weyl(geom)) <= 1e-12);

  CHECK_THROWS(gen_product_type_instance(3, 1.0));
}

TEST_CASE("Theorem 1/2 verdicts on generated instances") {
  SUBCASE("product type n=5, c=1") {
    for (Mode mode : {Mode::kSemiparallel, Mode::kMcSemiparallel}) {
      const Verdict v = classify(gen_product_type_instance(5, 1.0), mode);
      CHECK(v.conclusion == Conclusion::kProductType);
      CHECK(*v.parameter("c") == doctest::Approx(1.0).epsilon(1e-12));
      for (const char* f : {"n_gt_3", "conformally_flat", "semiparallel", "mc_semiparallel", "quasi_einstein"}) {
        CAPTURE(f);
        CHECK(v.flag(f)->value);
      }
      CHECK_FALSE(v.flag("minimal")->value);
    }
  }
  SUBCASE("c = 0 is flat") {
    CHECK(classify(gen_product_type_instance(5, 0.0)).conclusion == Conclusion::kFlat);
  }
  SUBCASE("flat generator") {
    for (int n = 4; n <= 6; ++n) CHECK(classify(gen_flat_instance(n, 3)).conclusion == Conclusion::kFlat);
  }
  SUBCASE("never indeterminate across the generator grid") {
    for (int n = 4; n <= 6; ++n)
      for (double c : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0})
        for (int axis = 0; axis < n; ++axis) {
          ProductTypeOptions opt;
          opt.axis = axis;
          for (Mode mode : {Mode::kSemiparallel, Mode::kMcSemiparallel}) {
            const Verdict v = classify(gen_product_type_instance(n, c, opt), mode);
            CAPTURE(n);
            CAPTURE(c);
            CHECK(v.conclusion == (c == 0.0 ? Conclusion::kFlat : Conclusion::kProductType));
            if (c != 0.0) CHECK(*v.parameter("c") == doctest::Approx(c).epsilon(1e-12));
          }
        }
  }
  SUBCASE("coupling changes the ambient but not the verdict") {
    ProductTypeOptions opt;
    opt.coupling = 0.5;
    const Scenario s = gen_product_type_instance(5, 2.0, opt);
    CHECK(s.ambient.kind == AmbientKind::kConstantHsc);
    CHECK(s.ambient.mu == doctest::Approx(7.0));
    const Verdict v = classify(s);
    CHECK(v.conclusion == Conclusion::kProductType);
    CHECK(*v.parameter("c") == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("non conformally flat instance") {
    const Verdict v = classify(gen_random_instance(5, 42));
    CHECK(v.conclusion == Conclusion::kHypothesisViolation);
    CHECK_FALSE(v.flag("conformally_flat")->value);
    CHECK(v.flag("conformally_flat")->defect > 1e-3);
  }
  SUBCASE("n <= 3") {
    const Verdict v = classify(gen_flat_instance(3, 1));
    CHECK(v.conclusion == Conclusion::kHypothesisViolation);
    CHECK_FALSE(v.flag("n_gt_3")->value);
    CHECK(v.flag("conformally_flat") == nullptr);
  }
  SUBCASE("every flag agrees with its defect") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Verdict v = classify(gen_random_instance(4 + static_cast<int>(seed % 3), seed));
      for (const Flag& f : v.flags) {
        if (f.name == "n_gt_3") continue;
        CHECK(f.value == (f.defect <= (f.name == "quasi_einstein" ? Tolerances{}.cluster : Tolerances{}.gate)));
      }
    }
  }
}

TEST_CASE("Proposition residuals") {
  SUBCASE("forward: product-type configuration is self-consistent") {
    for (int n = 4; n <= 6; ++n)
      for (double c : {-2.0, -1.0, 1.0, 2.0}) {
        const Instance inst = build_instance(gen_product_type_instance(n, c));
        const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
        const PropositionResiduals prop = proposition_residuals(inst.point, geom);
        CHECK(defect_norm(prop.pair_residual) <= 1e-10);
        CHECK(std::abs(prop.s_jh_jh) <= 1e-10);
        CHECK(prop.quasi_einstein);
        CHECK(mc_semiparallel_defect(geom) <= 1e-10);
      }
  }
  SUBCASE("minimal points have vanishing residuals") {
    RandomOptions opt;
    opt.traceless = true;
    const Instance inst = build_instance(gen_random_instance(5, 8, opt));
    const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
    CHECK(defect_norm(proposition_residuals(inst.point, geom).pair_residual) <= 1e-14);
  }
  SUBCASE("n <= 3 rejected") {
    const Instance inst = build_instance(gen_flat_instance(3));
    CHECK_THROWS_AS(proposition_residuals(inst.point, gauss_intrinsic(inst.point)), std::invalid_argument);
  }
}

TEST_CASE("under C = 0, R(e_i,e_j)JH = 0 iff the off-diagonal residuals vanish") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  SUBCASE("the residuals are (n-2) R(E_i, E_j, JH, E_i)") {
    for (int t = 0; t < 20; ++t) {
      const int n = 4 + t % 3;
      std::vector<double> spectrum;
      for (int i = 0; i < n; ++i) spectrum.push_back(2.0 * i + u(rng) - 3.0);
      Vector jh(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) jh[static_cast<std::size_t>(i)] = u(rng) - 0.5;
      const Instance inst = build_instance(gen_conformally_flat_fixture(spectrum, jh));
      const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
      CHECK(geom.from_fixture);
      CHECK(defect_norm(weyl(geom)) <= 1e-12);
      const PropositionResiduals prop = proposition_residuals(inst.point, geom);
      const Matrix& e = geom.spectrum.eigenvectors;
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
          if (i == j) continue;
          const double direct = evaluate(geom.r, e.column(i), e.column(j), geom.jh, e.column(i));
          CHECK(prop.pair_residual(i, j) == doctest::Approx((n - 2.0) * direct).epsilon(1e-12).scale(1.0));
        }
      CHECK(mc_semiparallel_defect(geom) > 1e-3);
      CHECK(defect_norm(prop.pair_residual) > 1e-3);
    }
  }
  SUBCASE("satisfying fixtures: both sides vanish") {
    for (int n = 4; n <= 6; ++n)
      for (double c : {-1.0, 2.0}) {
        std::vector<double> spectrum(static_cast<std::size_t>(n), (n - 2) * c);
        spectrum[1] = 0.0;
        Vector jh(static_cast<std::size_t>(n));
        jh[1] = 1.3;
        const Instance inst = build_instance(gen_conformally_flat_fixture(spectrum, jh));
        const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
        CHECK(mc_semiparallel_defect(geom) <= 1e-9);
        CHECK(defect_norm(proposition_residuals(inst.point, geom).pair_residual) <= 1e-9);
        const Verdict v = classify_theorem_1_2(inst.point, Mode::kMcSemiparallel);
        CHECK(v.conclusion == Conclusion::kProductType);
        CHECK(v.fixture);
      }
  }
  SUBCASE("Einstein fixture with generic JH: S = 0 branch only if flat") {
    // all eigenvalues equal and nonzero: (2 lambda - n lambda/(n-1)) != 0, so JH must vanish
    const std::vector<double> spectrum(5, 2.0);
    const Vector jh{0.3, -0.2, 0.5, 0.1, 0.4};
    const Instance inst = build_instance(gen_conformally_flat_fixture(spectrum, jh));
    CHECK(classify_theorem_1_2(inst.point, Mode::kMcSemiparallel).conclusion == Conclusion::kHypothesisViolation);
  }
}

TEST_CASE("Lemma residuals") {
  SUBCASE("totally geodesic: nothing fires") {
    const Instance inst = build_instance(gen_totally_geodesic_product(5, 2, 1.0));
    const LemmaResiduals lem = lemma_residuals(inst.point, gauss_intrinsic(inst.point));
    for (const LemmaCheck& c : lem.checks)
      if (c.lemma != 3) CHECK_FALSE(c.fires);
  }
  SUBCASE("product type: lemma 1 fires at the segment index") {
    for (double c : {-1.0, 1.0}) {
      const Instance inst = build_instance(gen_product_type_instance(5, c));
      const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
      const LemmaResiduals lem = lemma_residuals(inst.point, geom);
      CHECK(lem.applicable);
      int fired = 0;
      for (const LemmaCheck& chk : lem.checks) {
        if (chk.lemma != 1 || !chk.fires) continue;
        ++fired;
        CHECK(std::abs(geom.spectrum.eigenvalues[static_cast<std::size_t>(chk.k)]) <= 1e-12);
        CHECK(chk.pair_ik <= 1e-9);
        CHECK(chk.other_pairs <= 1e-9);
        CHECK(chk.vector_residual <= 1e-9);
        CHECK(chk.conclusion <= 1e-9);
      }
      CHECK(fired == 4);
      CHECK(lem.max_fired_residual <= 1e-9);
    }
  }
  SUBCASE("random non-semiparallel: not applicable") {
    const Instance inst = build_instance(gen_random_instance(5, 77));
    const LemmaResiduals lem = lemma_residuals(inst.point, gauss_intrinsic(inst.point));
    CHECK_FALSE(lem.applicable);
    CHECK(lem.max_fired_residual > 1e-3);
  }
}

TEST_CASE("Theorem 3 verdicts") {
  SUBCASE("(5,4,2)") {
    const Verdict v = classify3(gen_totally_geodesic_product(5, 4, 2.0));
    CHECK(v.conclusion == Conclusion::kProductSplit);
    CHECK(*v.parameter("c_factor1") == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_FALSE(v.parameter("c_factor2").has_value());
    CHECK(*v.parameter("k") == 4.0);
  }
  SUBCASE("(4,2,1)") {
    const Verdict v = classify3(gen_totally_geodesic_product(4, 2, 1.0));
    CHECK(v.conclusion == Conclusion::kProductSplit);
    CHECK(*v.parameter("c_factor1") == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(*v.parameter("c_factor2") == doctest::Approx(-0.25).epsilon(1e-10));
  }
  SUBCASE("grid") {
    for (int n = 2; n <= 6; ++n)
      for (int k = 1; k <= n - 1; ++k)
        for (double mu : {-1.0, 1.0, 2.5}) {
          const Verdict v = classify3(gen_totally_geodesic_product(n, k, mu));
          CHECK(v.conclusion == Conclusion::kProductSplit);
          CHECK(v.flag("commutative")->defect == 0.0);
          CHECK(v.residual("product_identity")->values[0] <= 1e-10);
          if (k > 1) CHECK(std::abs(*v.parameter("c_factor1") - mu / 4.0) <= 1e-10);
          if (n - k > 1) CHECK(std::abs(*v.parameter("c_factor2") + mu / 4.0) <= 1e-10);
        }
  }
  SUBCASE("frame mixing the factors") {
    Scenario s = gen_totally_geodesic_product(4, 2, 1.0);
    std::vector<Vector> frame;
    const double r = 1.0 / std::sqrt(2.0);
    frame.push_back(Vector{r, 0.0, r, 0.0, 0.0, 0.0, 0.0, 0.0});
    frame.push_back(Vector{0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
    frame.push_back(Vector{-r, 0.0, r, 0.0, 0.0, 0.0, 0.0, 0.0});
    frame.push_back(Vector{0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0});
    s.frame = frame;
    const Verdict v = classify3(s);
    CHECK(v.conclusion == Conclusion::kIndeterminate);
    CHECK(v.residual("f_alignment")->values[0] == doctest::Approx(std::sqrt(2.0)));  // max-abs of F e - e
  }
  SUBCASE("non-commutative instance") {
    RandomOptions opt;
    opt.ambient = AmbientKind::kProduct;
    opt.k = 2;
    const Verdict v = classify3(gen_random_instance(5, 3, opt));
    CHECK(v.conclusion == Conclusion::kHypothesisViolation);
    CHECK_FALSE(v.flag("commutative")->value);
  }
  SUBCASE("the product curvature identity holds on any commutative product instance") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RandomOptions opt;
      opt.ambient = AmbientKind::kProduct;
      opt.k = 1 + static_cast<int>(seed % 4);
      opt.mu = seed % 2 ? 1.0 : -2.5;
      opt.commuting = true;
      const Instance inst = build_instance(gen_random_instance(5, seed, opt));
      const IntrinsicGeometry geom = gauss_intrinsic(inst.point);
      CHECK(product_identity_residual(inst.point, geom, *inst.product) <= 1e-10);
    }
    // non-commutative points violate it
    RandomOptions opt;
    opt.ambient = AmbientKind::kProduct;
    opt.k = 2;
    const Instance inst = build_instance(gen_random_instance(5, 4, opt));
    CHECK(product_identity_residual(inst.point, gauss_intrinsic(inst.point), *inst.product) > 1e-3);
  }
}

TEST_CASE("scaling h never flips an exact-zero gate") {
  const std::vector<Scenario> bases{gen_product_type_instance(5, 1.0), gen_flat_instance(5, 2),
                                    gen_random_instance(5, 5)};
  for (const Scenario& base : bases) {
    const Verdict ref = classify(base);
    for (double t : {1e-3, 1.0, 1e3}) {
      Scenario s = base;
      for (CubicEntry& e : s.h) e.value *= t;
      const Verdict v = classify(s);
      REQUIRE(v.flags.size() == ref.flags.size());
      for (std::size_t f = 0; f < v.flags.size(); ++f) {
        CAPTURE(v.flags[f].name);
        CAPTURE(t);
        CHECK((v.flags[f].defect == 0.0) == (ref.flags[f].defect == 0.0));
      }
    }
  }
}

TEST_CASE("scenario entries") {
  SUBCASE("cubic closure and conflicts") {
    const SymmetricCubic h = cubic_from_entries(3, {{{0, 1, 1}, 2.0}, {{1, 0, 1}, 2.0}});
    CHECK(h(1, 1, 0) == 2.0);
    try {
      cubic_from_entries(3, {{{0, 1, 1}, 2.0}, {{1, 1, 0}, 3.0}});
      FAIL("expected a conflict");
    } catch (const ScenarioError& e) {
      CHECK(std::string(e.what()).find("h[2,2,1]") != std::string::npos);
    }
    CHECK_THROWS_AS(cubic_from_entries(3, {{{0, 1, 3}, 1.0}}), ScenarioError);
  }
  SUBCASE("curvature closure") {
    const QuadTensor r = curvature_from_entries(3, {{{0, 1, 1, 0}, 1.5}});
    CHECK(r(1, 0, 0, 1) == 1.5);
    CHECK(r(0, 1, 0, 1) == -1.5);
    CHECK_THROWS_AS(curvature_from_entries(3, {{{0, 0, 1, 2}, 1.0}}), ScenarioError);
    CHECK_THROWS_AS(curvature_from_entries(3, {{{0, 1, 1, 0}, 1.0}, {{1, 0, 0, 1}, 2.0}}), ScenarioError);
  }
  SUBCASE("round trips") {
    std::mt19937_64 rng(61);
    const QuadTensor r = oracle::random_curvature_like(rng, 4);
    CHECK(oracle::max_abs(curvature_from_entries(4, entries_from_curvature(r)), r) <= 1e-15);
    const Instance inst = build_instance(gen_random_instance(4, 6));
    CHECK(cubic_from_entries(4, entries_from_cubic(inst.point.h())) == inst.point.h());
  }
  SUBCASE("build_instance rejections") {
    Scenario s = gen_totally_geodesic_product(4, 2, 1.0);
    s.ambient.k = 4;
    CHECK_THROWS_AS(build_instance(s), ScenarioError);
    s.ambient.k = 2;
    s.ambient.mu = 0.0;
    CHECK_THROWS_AS(build_instance(s), ScenarioError);
    Scenario f = gen_flat_instance(4);
    f.frame = std::vector<Vector>(4, Vector::basis(8, 0));
    CHECK_THROWS_AS(build_instance(f), ScenarioError);
    Scenario bad_fixture = gen_flat_instance(4);
    bad_fixture.fixture = std::vector<CurvatureEntry>{{{0, 1, 2, 3}, 1.0}};  // breaks Bianchi
    CHECK_THROWS_AS(build_instance(bad_fixture), ScenarioError);
  }
}

TEST_CASE("generators") {
  CHECK(gen_random_instance(5, 9) == gen_random_instance(5, 9));
  CHECK_FALSE(gen_random_instance(5, 9) == gen_random_instance(5, 10));
  RandomOptions traceless;
  traceless.traceless = true;
  CHECK(mean_curvature(build_instance(gen_random_instance(6, 2, traceless)).point).length <= 1e-14);
  RandomOptions commuting;
  commuting.commuting = true;
  CHECK(commutativity_defect(build_instance(gen_random_instance(6, 2, commuting)).point) == 0.0);
  RandomOptions both = traceless;
  both.commuting = true;
  CHECK_THROWS(gen_random_instance(5, 1, both));
  RandomOptions rotated;
  rotated.rotate_frame = true;
  CHECK(build_instance(gen_random_instance(5, 3, rotated)).point.frame()[0] != Vector::basis(10, 0));
  CHECK_THROWS(gen_totally_geodesic_product(4, 0, 1.0));
  CHECK_THROWS(gen_totally_geodesic_product(4, 2, 0.0));
  const Scenario tg = gen_totally_geodesic_product(4, 2, 1.0);
  CHECK(tg.h.empty());
  CHECK(commutativity_defect(build_instance(tg).point) == 0.0);
}

}  // TEST_SUITE
