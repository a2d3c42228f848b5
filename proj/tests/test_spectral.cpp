#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "geomflow/shapes.hpp"
#include "geomflow/spectral.hpp"

using namespace geomflow;
using Catch::Approx;

namespace {

CurveGeometry circle_geom(int N, double R) {
  return curve_geometry(
      make_closed_curve(make_space_form(0), circle_profile(N, R)));
}

AxisymGeometry sphere_geom(int K, int M, double R) {
  return axisym_geometry(
      make_axisym_shape(make_space_form(K), 3, sphere_profile(M, R)));
}

Eigen::MatrixXd dense_congruent(const detail::SymTriPencil& p) {
  const int n = static_cast<int>(p.diag.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = p.diag[i];
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = p.off[i];
  if (p.corner != 0.0) A(0, n - 1) = A(n - 1, 0) = p.corner;
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s[i] = 1.0 / std::sqrt(p.mass[i]);
  return s.asDiagonal() * A * s.asDiagonal();
}

// Minimizes f^T A f / f^T B f over the discrete constraint 1^T B f = 0 by
// inverse iteration with explicit projection: an extraction route fully
// independent of the banded subspace solver.
double variational_lambda1(const detail::SymTriPencil& p) {
  const int n = static_cast<int>(p.diag.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = p.diag[i];
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = p.off[i];
  if (p.corner != 0.0) A(0, n - 1) = A(n - 1, 0) = p.corner;
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = p.mass[i];
  const double eps = 1e-10 * A.diagonal().maxCoeff();
  Eigen::MatrixXd M = A;
  M.diagonal() += eps * b;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) f[i] = gauss(rng);
  const double bsum = b.sum();
  auto project = [&](Eigen::VectorXd& v) {
    if (p.has_zero_mode) v.array() -= b.dot(v) / bsum;
  };
  project(f);
  f.normalize();
  for (int it = 0; it < 400; ++it) {
    Eigen::VectorXd g = lu.solve(b.asDiagonal() * f);
    project(g);
    g.normalize();
    f = g;
  }
  return f.dot(A * f) / f.dot(b.asDiagonal() * f);
}

}  // namespace

TEST_CASE("circle spectra follow the separation-of-variables law") {
  // -f'' = lambda kappa f on a circle of radius r has lambda_m = m^2 / r,
  // each nonzero value twice.
  const auto s2 = curve_spectrum(circle_geom(2048, 2.0), 5);
  REQUIRE(s2.size == 2048);
  REQUIRE(s2.eigenvalues.size() == 5);
  REQUIRE(std::abs(s2.eigenvalues[0]) <= 1e-8 * s2.eigenvalues[1]);
  REQUIRE(s2.eigenvalues[1] == Approx(0.5).margin(1e-4));
  REQUIRE(s2.eigenvalues[2] == Approx(s2.eigenvalues[1]).epsilon(1e-8));
  REQUIRE(s2.eigenvalues[3] == Approx(2.0).epsilon(1e-4));
  REQUIRE(s2.eigenvalues[4] == Approx(2.0).epsilon(1e-4));
  for (double r : s2.residuals) REQUIRE(r <= 1e-6);
  for (int m : s2.modes) REQUIRE(m == -1);
  REQUIRE(lambda1(s2) == Approx(0.5).margin(1e-4));

  const auto s1 = curve_spectrum(circle_geom(512, 1.0), 3);
  REQUIRE(lambda1(s1) == Approx(1.0).margin(5e-5));

  SECTION("repeated solves are bitwise deterministic") {
    const auto again = curve_spectrum(circle_geom(512, 1.0), 3);
    for (int i = 0; i < 3; ++i)
      REQUIRE(again.eigenvalues[i] == s1.eigenvalues[i]);
  }
}

TEST_CASE("sphere spectra for both curvature orders") {
  SECTION("flat ambient: lambda_1 = 2 R^{k-2} / R^{k-1} scalings") {
    const auto s = axisym_spectrum(sphere_geom(0, 400, 1.0), 1, 2, 6);
    REQUIRE(s.size == 401);
    REQUIRE(std::abs(s.eigenvalues[0]) <= 1e-8 * s.eigenvalues[1]);
    REQUIRE(s.eigenvalues[1] == Approx(2.0).margin(1e-4));
    REQUIRE(s.eigenvalues[2] == Approx(2.0).margin(1e-4));
    // The first nonzero value appears from both the axisymmetric and the
    // m = 1 restriction.
    REQUIRE(s.modes[1] + s.modes[2] == 1);
    for (int i = 3; i < 6; ++i)
      REQUIRE(s.eigenvalues[i] == Approx(6.0).margin(2e-3));
    for (double r : s.residuals) REQUIRE(r <= 1e-6);

    REQUIRE(lambda1(axisym_spectrum(sphere_geom(0, 300, 2.0), 1, 1, 4)) ==
            Approx(1.0).margin(1e-4));
    REQUIRE(lambda1(axisym_spectrum(sphere_geom(0, 300, 0.8), 2, 1, 4)) ==
            Approx(2.0).margin(1e-4));
  }

  SECTION("curved ambient: induced round metric of radius phi(R)") {
    // lambda_1 = 2 / (phi(R)^2 H_1) = 4 / sin(2R) resp. 4 / sinh(2R).
    REQUIRE(lambda1(axisym_spectrum(sphere_geom(1, 300, 0.6), 1, 1, 4)) ==
            Approx(4.0 / std::sin(1.2)).epsilon(1e-4));
    REQUIRE(lambda1(axisym_spectrum(sphere_geom(-1, 300, 0.9), 1, 1, 4)) ==
            Approx(4.0 / std::sinh(1.8)).epsilon(1e-4));
  }
}

TEST_CASE("mesh convergence of lambda_1 is at least second order") {
  double lam[3];
  int idx = 0;
  for (int N : {512, 1024, 2048}) {
    const auto g = curve_geometry(
        make_closed_curve(make_space_form(0), ellipse_profile(N, 2.0, 1.0)));
    lam[idx++] = lambda1(curve_spectrum(g, 3));
  }
  const double order = std::log2((lam[0] - lam[1]) / (lam[1] - lam[2]));
  CAPTURE(lam[0], lam[1], lam[2]);
  REQUIRE(order >= 1.9);
}

TEST_CASE("eigenvalue bound evaluates its closed forms") {
  SECTION("circle: pi L / (L^2 - 2 pi A) = 1/r") {
    const auto g = circle_geom(256, 2.0);
    REQUIRE(eigen_bound(g) == Approx(0.5).epsilon(1e-12));
    REQUIRE(eigen_bound(g) ==
            Approx(kPi * g.L / (g.L * g.L - 2.0 * kPi * g.A)).epsilon(1e-12));
  }

  SECTION("spheres: 2/R at k=1, the constant 2 at k=2, 3/R at n=4") {
    const auto g = sphere_geom(0, 400, 1.3);
    REQUIRE(eigen_bound(g, 1) == Approx(2.0 / 1.3).epsilon(1e-8));
    REQUIRE(eigen_bound(g, 2) == Approx(2.0).epsilon(1e-8));
    const auto g4 = axisym_geometry(
        make_axisym_shape(make_space_form(0), 4, sphere_profile(400, 1.1)));
    REQUIRE(eigen_bound(g4, 1) == Approx(3.0 / 1.1).epsilon(1e-8));
  }

  SECTION("ellipse: strictly above the computed eigenvalue") {
    const auto g = curve_geometry(
        make_closed_curve(make_space_form(0), ellipse_profile(1024, 2.0, 1.0)));
    const double bound = eigen_bound(g);
    const double l1 = lambda1(curve_spectrum(g, 3));
    REQUIRE(bound > l1 * 1.1);
  }
}

TEST_CASE("solver agrees with dense and variational extractions") {
  SECTION("dense congruent eigensolve, curve") {
    const auto g = curve_geometry(make_closed_curve(
        make_space_form(0), fourier_profile(128, 1.0, {0.05, 0.0, 0.0, 0.08})));
    const auto pencil = detail::curve_pencil(g).pencil;
    const auto pairs = detail::smallest_eigenpairs(pencil, 5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_congruent(pencil));
    for (int i = 0; i < 5; ++i)
      REQUIRE(pairs.lambda[i] ==
              Approx(es.eigenvalues()[i]).margin(1e-9 * es.eigenvalues()[4]));
  }

  SECTION("dense congruent eigensolve, axisym modes") {
    const auto g = axisym_geometry(make_axisym_shape(
        make_space_form(0), 3, legendre_profile(100, 1.0, {0.0, 0.06})));
    for (int m : {0, 1, 2}) {
      const auto pencil = detail::axisym_pencil(g, 2, m);
      const auto pairs = detail::smallest_eigenpairs(pencil, 4);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_congruent(pencil));
      for (int i = 0; i < 4; ++i) {
        CAPTURE(m, i);
        REQUIRE(pairs.lambda[i] ==
                Approx(es.eigenvalues()[i]).margin(1e-9 * es.eigenvalues()[3]));
      }
    }
  }

  SECTION("constrained Rayleigh-quotient minimization, curve") {
    const auto g = curve_geometry(
        make_closed_curve(make_space_form(0), ellipse_profile(256, 2.0, 1.0)));
    const auto pencil = detail::curve_pencil(g).pencil;
    const double lib = detail::smallest_eigenpairs(pencil, 2).lambda[1];
    REQUIRE(variational_lambda1(pencil) == Approx(lib).epsilon(1e-6));
  }

  SECTION("constrained Rayleigh-quotient minimization, axisym m=0") {
    const auto g = axisym_geometry(make_axisym_shape(
        make_space_form(0), 3, legendre_profile(120, 1.0, {0.0, 0.05})));
    const auto pencil = detail::axisym_pencil(g, 1, 0);
    const double lib = detail::smallest_eigenpairs(pencil, 2).lambda[1];
    REQUIRE(variational_lambda1(pencil) == Approx(lib).epsilon(1e-6));
  }
}

TEST_CASE("first-eigenvalue bound verification") {
  SECTION("circle and spheres sit at equality") {
    const auto vc = verify_eigen_bound(circle_geom(1024, 2.0));
    REQUIRE(vc.theorem == "eigen-bound");
    REQUIRE(vc.verdict == "equality");
    REQUIRE(vc.lhs == Approx(0.5).margin(1e-4));
    REQUIRE(vc.rhs == Approx(0.5).margin(1e-4));

    REQUIRE(verify_eigen_bound(sphere_geom(0, 400, 1.0), 1).verdict ==
            "equality");
    REQUIRE(verify_eigen_bound(sphere_geom(0, 300, 1.0), 2).verdict ==
            "equality");
  }

  SECTION("translation is absorbed by recentering") {
    const auto sf = make_space_form(0);
    const auto g = axisym_geometry(
        make_axisym_shape(sf, 3, offset_sphere_profile(sf, 300, 1.0, 0.4)));
    REQUIRE(detail::hk_center_axis(g, 1) == Approx(0.4).margin(1e-6));
    const auto shifted = axisym_geometry(translate_axisym(
        AxisymShape{g.space, g.n, g.rho}, -detail::hk_center_axis(g, 1)));
    REQUIRE(std::abs(detail::hk_center_axis(shifted, 1)) < 1e-6);
    const auto rep = verify_eigen_bound(g, 1);
    REQUIRE(rep.verdict == "equality");
    REQUIRE(rep.params.find("recenter=") != std::string::npos);
  }

  SECTION("non-round corpus is strictly below the bound") {
    const auto sf = make_space_form(0);
    for (unsigned seed = 1; seed <= 10; ++seed) {
      const auto curve = random_convex_curve(sf, 256, 1.0, 0.1, seed);
      const auto rep = verify_eigen_bound(curve_geometry(curve));
      CAPTURE(seed, rep.lhs, rep.rhs);
      REQUIRE(rep.verdict == "holds");
      REQUIRE(rep.margin > 0.0);
    }
  }
}

TEST_CASE("spectral preconditions and failure modes") {
  const auto sf = make_space_form(0);
  REQUIRE_THROWS_AS(curve_spectrum(circle_geom(128, 1.0), 1),
                    std::invalid_argument);
  const auto dumbbell = curve_geometry(
      make_closed_curve(sf, fourier_profile(256, 1.0, {0.0, 0.0, 0.0, 0.3})));
  REQUIRE_THROWS_AS(curve_spectrum(dumbbell, 3), std::domain_error);

  const auto g = sphere_geom(0, 100, 1.0);
  REQUIRE_THROWS_AS(axisym_spectrum(g, 0, 1, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(axisym_spectrum(g, 3, 1, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(axisym_spectrum(g, 1, 0, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(axisym_spectrum(g, 1, 1, 1), std::invalid_argument);
  const auto g4 = axisym_geometry(
      make_axisym_shape(sf, 4, sphere_profile(100, 1.0)));
  REQUIRE_THROWS_AS(axisym_spectrum(g4, 1, 1, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(verify_eigen_bound(g4, 1), std::invalid_argument);

  // Mean-convex but not 2-convex: the curvature cone check must fire.
  const auto pinched = axisym_geometry(make_axisym_shape(
      sf, 3, legendre_profile(100, 1.0, {0.0, 0.45})));
  REQUIRE_THROWS_AS(axisym_spectrum(pinched, 2, 1, 4), std::domain_error);

  const auto spherical_circle = curve_geometry(
      make_closed_curve(make_space_form(1), circle_profile(64, 0.7)));
  REQUIRE_THROWS_AS(eigen_bound(spherical_circle), std::invalid_argument);
  REQUIRE_THROWS_AS(eigen_bound(sphere_geom(1, 100, 0.7), 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(lambda1(SpectrumResult{}), std::domain_error);
}
