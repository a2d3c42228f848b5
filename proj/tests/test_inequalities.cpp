#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "geomflow/inequalities.hpp"
#include "geomflow/shapes.hpp"

using namespace geomflow;
using Catch::Approx;

namespace {

AxisymGeometry sphere_geom(int K, int n, int M, double R) {
  return axisym_geometry(
      make_axisym_shape(make_space_form(K), n, sphere_profile(M, R)));
}

CurveGeometry circle_geom(int K, int N, double R) {
  return curve_geometry(
      make_closed_curve(make_space_form(K), circle_profile(N, R)));
}

}  // namespace

TEST_CASE("flat curvature-integral comparison: sphere and curve oracles") {
  const auto sf = make_space_form(0);

  SECTION("sphere equality, k=1 against boundary area") {
    // R = 2, g = x: lhs = g(R^2/2) sigma_1 |Sigma| = 2 * 1 * 16pi = 32pi,
    // and xi^{-1}(16pi) = 2 reproduces it on the rhs.
    const auto g = sphere_geom(0, 3, 400, 2.0);
    const auto rep = verify_afw(g, parse_weight("monomial:1"), 1, 0);
    REQUIRE(rep.theorem == "afw");
    REQUIRE(rep.lhs == Approx(32.0 * kPi).epsilon(1e-8));
    REQUIRE(rep.rhs == Approx(32.0 * kPi).epsilon(1e-8));
    REQUIRE(rep.verdict == "equality");
    REQUIRE(rep.shape_digest != 0);
  }

  SECTION("sphere equality, k=2 against enclosed volume") {
    // The l = -1 comparison function must invert the ball volume back to its
    // radius; g = x then gives lhs = (R^2/2)(1/R^2)(4 pi R^2) = 2 pi R^2.
    const double R = 1.4;
    const auto g = sphere_geom(0, 3, 400, R);
    const auto rep = verify_afw(g, parse_weight("monomial:1"), 2, -1);
    REQUIRE(rep.lhs == Approx(2.0 * kPi * R * R).epsilon(1e-8));
    REQUIRE(rep.margin == Approx(0.0).margin(1e-8 * rep.scale));
    REQUIRE(rep.verdict == "equality");
  }

  SECTION("offset sphere is a strict case") {
    const auto g = axisym_geometry(
        make_axisym_shape(sf, 3, offset_sphere_profile(sf, 400, 1.0, 0.4)));
    const auto rep = verify_afw(g, parse_weight("monomial:2"), 1, 0);
    REQUIRE(rep.verdict == "holds");
    REQUIRE(rep.margin > 1e-3 * rep.scale);
  }

  SECTION("curve overloads: circle equality, ellipse strict") {
    const auto circ = circle_geom(0, 256, 1.5);
    for (int l : {-1, 0}) {
      const auto rep = verify_afw(circ, parse_weight("exp"), 1, l);
      CAPTURE(l);
      REQUIRE(rep.verdict == "equality");
    }
    const auto ell = curve_geometry(
        make_closed_curve(sf, ellipse_profile(256, 2.0, 1.0)));
    const auto rep = verify_afw(ell, parse_weight("monomial:1"), 1, 0);
    REQUIRE(rep.verdict == "holds");
    REQUIRE(rep.margin > 0.0);
  }

  SECTION("preconditions") {
    const auto w = parse_weight("monomial:1");
    REQUIRE_THROWS_AS(verify_afw(sphere_geom(1, 3, 100, 0.8), w, 1, 0),
                      std::invalid_argument);
    const auto g = sphere_geom(0, 3, 100, 1.0);
    REQUIRE_THROWS_AS(verify_afw(g, w, 3, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(verify_afw(g, w, 2, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(verify_afw(g, w, 1, -2), std::invalid_argument);
    const auto pinched = axisym_geometry(make_axisym_shape(
        sf, 3, legendre_profile(100, 1.0, {0.0, 0.45})));
    REQUIRE_THROWS_AS(verify_afw(pinched, w, 2, 0), std::domain_error);

    REQUIRE_THROWS_AS(verify_afw(circle_geom(1, 64, 0.7), w, 1, 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(verify_afw(circle_geom(0, 64, 1.0), w, 2, 0),
                      std::invalid_argument);
    const auto dumbbell = curve_geometry(
        make_closed_curve(sf, fourier_profile(256, 1.0, {0.0, 0.0, 0.0, 0.3})));
    REQUIRE_THROWS_AS(verify_afw(dumbbell, w, 1, 0), std::domain_error);
  }
}

TEST_CASE("weighted total-curvature comparison for convex curves") {
  SECTION("centered circles realize equality in every space form") {
    struct Pick {
      int K;
      double R;
      const char* weight;
    };
    for (const Pick& p : {Pick{0, 1.2, "monomial:1"}, Pick{0, 0.8, "exp"},
                          Pick{1, 1.0, "monomial:2"},
                          Pick{1, 0.6, "rational-minus:1"},
                          Pick{-1, 0.9, "monomial:2"},
                          Pick{-1, 1.1, "rational-plus:2"}}) {
      CAPTURE(p.K, p.R, p.weight);
      const auto rep =
          verify_minkowski2d(circle_geom(p.K, 256, p.R), parse_weight(p.weight));
      REQUIRE(rep.verdict == "equality");
      REQUIRE(std::abs(rep.margin) <= 1e-9 * rep.scale);
    }
  }

  SECTION("spherical circle of radius pi/3 with linear weight: closed form") {
    // lhs = g(1/2) cot(pi/3) L + A_g(disk) = pi/2 + pi = 3 pi / 2.
    const auto rep =
        verify_minkowski2d(circle_geom(1, 512, kPi / 3.0), parse_weight("monomial:1"));
    REQUIRE(rep.lhs == Approx(1.5 * kPi).epsilon(1e-10));
    REQUIRE(rep.rhs == Approx(1.5 * kPi).epsilon(1e-10));
  }

  SECTION("ellipse is a strict case") {
    const auto g = curve_geometry(
        make_closed_curve(make_space_form(0), ellipse_profile(512, 2.0, 1.0)));
    const auto rep = verify_minkowski2d(g, parse_weight("monomial:1"));
    REQUIRE(rep.verdict == "holds");
    REQUIRE(rep.margin > 1e-2);
  }

  SECTION("constant weight is an identity, flagged as such") {
    // Gauss-Bonnet collapses both sides to 2 pi c on every convex curve,
    // circular or not.
    const auto g = curve_geometry(make_closed_curve(
        make_space_form(1), fourier_profile(256, 0.9, {0.0, 0.0, 0.04})));
    const auto rep = verify_minkowski2d(g, parse_weight("constant:2"));
    REQUIRE(rep.lhs == Approx(4.0 * kPi).epsilon(1e-10));
    REQUIRE(rep.verdict == "equality");
    REQUIRE(rep.note.find("equality-by-structure") != std::string::npos);
  }

  SECTION("non-convex input is rejected") {
    const auto g = curve_geometry(make_closed_curve(
        make_space_form(0), fourier_profile(256, 1.0, {0.0, 0.0, 0.0, 0.3})));
    REQUIRE_THROWS_AS(verify_minkowski2d(g, parse_weight("monomial:1")),
                      std::domain_error);
  }
}

TEST_CASE("hyperbolic weighted mean-curvature comparison") {
  const auto sf = make_space_form(-1);

  SECTION("geodesic spheres realize equality") {
    for (const char* wid : {"monomial:1", "exp"}) {
      CAPTURE(wid);
      const auto rep =
          verify_minkowskiH(sphere_geom(-1, 3, 400, 1.0), parse_weight(wid));
      REQUIRE(rep.verdict == "equality");
      REQUIRE(std::abs(rep.margin) <= 1e-7 * rep.scale);
    }
  }

  SECTION("perturbed h-convex domains are strict cases") {
    const auto shape = random_convex_axisym(sf, 3, 200, 1, 1.0, 0.15, 11,
                                            /*h_convex=*/true);
    const auto g = axisym_geometry(shape);
    REQUIRE(convexity_class(g).h_convex());
    const auto rep = verify_minkowskiH(g, parse_weight("monomial:1"));
    REQUIRE(rep.verdict == "holds");
    REQUIRE(rep.margin > 2e-4 * rep.scale);
    // The unweighted comparison reacts far more weakly to the same bump;
    // only the sign is stable at this deformation size.
    const auto crep = verify_minkowskiH(g, parse_weight("constant:1"));
    REQUIRE(crep.margin > 0.0);
    REQUIRE(crep.note.find("unweighted") != std::string::npos);
  }

  SECTION("preconditions") {
    REQUIRE_THROWS_AS(
        verify_minkowskiH(sphere_geom(0, 3, 100, 1.0), parse_weight("monomial:1")),
        std::invalid_argument);
    // Convex but not h-convex: a large-radius perturbation keeps kappa > 0
    // while dropping below coth(rho) ~ 1.
    const auto g = axisym_geometry(make_axisym_shape(
        sf, 3, legendre_profile(200, 2.5, {0.0, 0.35})));
    REQUIRE(convexity_class(g).strictly_convex());
    REQUIRE_FALSE(convexity_class(g).h_convex());
    REQUIRE_THROWS_AS(verify_minkowskiH(g, parse_weight("monomial:1")),
                      std::domain_error);
  }
}

TEST_CASE("spherical weighted mean-curvature comparison on the hemisphere") {
  const auto sf = make_space_form(1);

  SECTION("geodesic spheres realize equality") {
    for (const char* wid : {"monomial:1", "constant:1"}) {
      CAPTURE(wid);
      const auto rep =
          verify_minkowskiS(sphere_geom(1, 3, 400, 0.7), parse_weight(wid));
      REQUIRE(rep.verdict == "equality");
      REQUIRE(std::abs(rep.margin) <= 1e-7 * rep.scale);
    }
  }

  SECTION("perturbed strictly convex domains are strict cases") {
    const auto shape = random_convex_axisym(sf, 3, 200, 2, 0.7, 0.15, 23);
    const auto g = axisym_geometry(shape);
    REQUIRE(convexity_class(g).strictly_convex());
    const auto rep = verify_minkowskiS(g, parse_weight("monomial:1"));
    REQUIRE(rep.verdict == "holds");
    REQUIRE(rep.margin > 2e-4 * rep.scale);
    const auto crep = verify_minkowskiS(g, parse_weight("constant:1"));
    REQUIRE(crep.margin > 0.0);
  }

  SECTION("preconditions") {
    REQUIRE_THROWS_AS(
        verify_minkowskiS(sphere_geom(0, 3, 100, 1.0), parse_weight("monomial:1")),
        std::invalid_argument);
    REQUIRE_THROWS_AS(
        verify_minkowskiS(sphere_geom(1, 3, 100, 1.6), parse_weight("monomial:1")),
        std::domain_error);
  }
}

TEST_CASE("three-term curvature comparison in flat space") {
  const auto sf = make_space_form(0);

  SECTION("spheres realize equality for both orders") {
    const double R = 1.3;
    const auto g = sphere_geom(0, 3, 400, R);
    const auto r1 = verify_3term(g, 1);
    REQUIRE(r1.lhs == Approx(10.0 * kPi / 3.0 * R * R * R).epsilon(1e-8));
    REQUIRE(r1.verdict == "equality");
    const auto r2 = verify_3term(g, 2);
    REQUIRE(r2.lhs == Approx(6.0 * kPi * R * R).epsilon(1e-8));
    REQUIRE(r2.verdict == "equality");
  }

  SECTION("offset sphere margin has a closed form") {
    // lhs - rhs = 2 pi R d^2 exactly: the distance-squared weight picks up
    // the translation while every unweighted integral is invariant.
    const double R = 1.0, d = 0.35;
    const auto g = axisym_geometry(
        make_axisym_shape(sf, 3, offset_sphere_profile(sf, 400, R, d)));
    const auto rep = verify_3term(g, 1);
    REQUIRE(rep.verdict == "holds");
    REQUIRE(rep.margin == Approx(2.0 * kPi * R * d * d).epsilon(1e-6));
  }

  SECTION("curves: circle equality pins the support-function convention") {
    const double R = 1.1;
    const auto rep = verify_3term(circle_geom(0, 512, R));
    REQUIRE(rep.lhs == Approx(2.0 * kPi * R * R).epsilon(1e-10));
    REQUIRE(rep.rhs == Approx(2.0 * kPi * R * R).epsilon(1e-10));
    REQUIRE(rep.verdict == "equality");

    const auto ell = curve_geometry(
        make_closed_curve(sf, ellipse_profile(512, 1.6, 1.0)));
    REQUIRE(verify_3term(ell).verdict == "holds");
  }

  SECTION("preconditions") {
    const auto g = sphere_geom(0, 3, 100, 1.0);
    REQUIRE_THROWS_AS(verify_3term(g, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(verify_3term(g, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(verify_3term(sphere_geom(1, 3, 100, 0.8), 1),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(verify_3term(circle_geom(1, 64, 0.7)),
                      std::invalid_argument);
  }
}

TEST_CASE("preset catalog: printed closed forms match the general bound") {
  for (int K : {0, 1, -1}) {
    const auto sf = make_space_form(K);
    const auto items = weighted_iso_items(sf);
    REQUIRE(static_cast<int>(items.size()) == (K == 0 ? 7 : K == 1 ? 5 : 4));
    for (const auto& item : items) {
      CAPTURE(K, item.index, item.label);
      REQUIRE(weighted_iso_rhs_deviation(sf, item) <= 1e-10);
    }
  }
}

TEST_CASE("preset catalog: suite verdicts on curves") {
  const auto sf = make_space_form(0);

  SECTION("all seven flat items hold strictly on an ellipse") {
    const auto g = curve_geometry(
        make_closed_curve(sf, ellipse_profile(512, 2.0, 1.0)));
    const auto reports = weighted_iso_suite(g);
    REQUIRE(reports.size() == 7);
    for (const auto& rep : reports) {
      CAPTURE(rep.params);
      REQUIRE(rep.theorem == "weighted-iso");
      REQUIRE(rep.verdict == "holds");
      REQUIRE(rep.params.find("item=") != std::string::npos);
    }
  }

  SECTION("centered circles give equality across the whole catalog") {
    for (int K : {0, 1, -1}) {
      const auto g = circle_geom(K, 256, K == 1 ? 0.8 : 1.0);
      for (const auto& rep : weighted_iso_suite(g)) {
        CAPTURE(K, rep.params);
        REQUIRE(rep.verdict == "equality");
      }
    }
  }
}

TEST_CASE("comparison-function inverses and verdict semantics") {
  SECTION("quermassintegral comparison functions invert cleanly") {
    for (int l : {-1, 0, 1}) {
      const double y = afw_xi(3, l, 1.7);
      const double r = detail::invert_increasing(
          [&](double s) { return afw_xi(3, l, s); }, y, 1.0, 1e9);
      CAPTURE(l);
      REQUIRE(r == Approx(1.7).epsilon(1e-12));
    }
  }

  SECTION("verdict thresholds") {
    const auto eq = detail::make_report("t", "p", 1.0, 1.0 + 5e-7, 1e-6, 1);
    REQUIRE(eq.verdict == "equality");
    const auto holds = detail::make_report("t", "p", 1.0 + 1e-3, 1.0, 1e-6, 1);
    REQUIRE(holds.verdict == "holds");
    REQUIRE(holds.margin == Approx(1e-3));
    const auto bad = detail::make_report("t", "p", 1.0, 1.0 + 1e-3, 1e-6, 1);
    REQUIRE(bad.verdict == "violated");
    REQUIRE(bad.scale == Approx(1.0 + 1e-3));
  }
}
