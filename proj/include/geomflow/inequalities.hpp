#pragma once

// Weighted geometric comparison theorems: evaluates left-hand sides on a
// discretized shape, right-hand sides through the monotone comparison
// functions of the round model (chi, xi, zeta), and reports signed margins.

#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomflow/axisym.hpp"
#include "geomflow/curve2d.hpp"

namespace geomflow {

inline constexpr double kEqualityTol2d = 1e-6;
inline constexpr double kEqualityTolAxisym = 1e-4;

struct InequalityReport {
  std::string theorem;
  std::string params;   // inputs summary (space, dimension, weight, orders, grid)
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs, reported raw
  double scale = 0.0;   // max(|lhs|, |rhs|)
  double tol = 0.0;     // equality tolerance used, relative to scale
  std::string verdict;  // holds | equality | violated
  std::string note;
  std::uint64_t shape_digest = 0;
};

namespace detail {

inline InequalityReport make_report(const char* theorem, std::string params,
                                    double lhs, double rhs, double tol,
                                    std::uint64_t digest,
                                    std::string note = {}) {
  InequalityReport r;
  r.theorem = theorem;
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = lhs - rhs;
  r.scale = std::max(std::abs(lhs), std::abs(rhs));
  r.tol = tol;
  if (std::abs(r.margin) <= tol * r.scale)
    r.verdict = "equality";
  else
    r.verdict = r.margin > 0.0 ? "holds" : "violated";
  r.note = std::move(note);
  r.shape_digest = digest;
  return r;
}

// Inverts a strictly increasing comparison function, growing the bracket
// upward from a shape-derived guess until y is covered.
template <class F>
double invert_increasing(F&& f, double y, double hi_guess, double hi_cap) {
  double hi = std::min(hi_guess, hi_cap);
  int grow = 0;
  while (f(hi) < y && hi < hi_cap && grow++ < 200)
    hi = std::min(2.0 * hi, hi_cap);
  return invert_monotone(f, y, 1e-12, hi);
}

inline std::string describe(const SpaceForm& sf, int n, int samples,
                            const char* extra) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "K=%d n=%d samples=%d %s", sf.K, n, samples,
                extra);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Flat-space comparison for the k-th curvature integral against the l-th
// quermassintegral. On the ball of radius r:
//   chi(r) = binom(n-1,k) omega_{n-1} g(r^2/2) r^{n-1-k}   (the lhs),
//   xi(r)  = binom(n-1,l) omega_{n-1} r^{n-1-l}            (W_l, l >= 0),
//   xi(r)  = omega_{n-1} r^n / n                           (W_{-1} = volume).

inline double afw_xi(int n, int l, double r) {
  if (l == -1) return unit_sphere_area(n - 1) * std::pow(r, n) / n;
  return binom(n - 1, l) * unit_sphere_area(n - 1) * std::pow(r, n - 1 - l);
}

inline double afw_chi(int n, int k, const Weight& w, double r) {
  return binom(n - 1, k) * unit_sphere_area(n - 1) * w.g(0.5 * r * r) *
         std::pow(r, n - 1 - k);
}

inline InequalityReport verify_afw(const AxisymGeometry& g, const Weight& w,
                                   int k, int l) {
  const int n = g.n;
  if (g.space.K != 0)
    throw std::invalid_argument("verify_afw: flat space only");
  if (k < 1 || k > n - 1 || l < -1 || l > k - 1)
    throw std::invalid_argument("verify_afw: need -1 <= l <= k-1 <= n-2");
  if (!convexity_class(g).k_convex(k))
    throw std::domain_error("verify_afw: k-convexity violated");

  const double lhs = weighted_sigma_integral(g, w, k);
  const double wl = quermassintegral(g, l);
  double hi = 0.0;
  for (double r : g.rho) hi = std::max(hi, r);
  const double rstar = detail::invert_increasing(
      [&](double r) { return afw_xi(n, l, r); }, wl, 2.0 * hi, 1e9);
  const double rhs = afw_chi(n, k, w, rstar);

  char extra[96];
  std::snprintf(extra, sizeof extra, "k=%d l=%d weight=%s", k, l,
                w.id().c_str());
  return detail::make_report(
      "afw", detail::describe(g.space, n, g.samples(), extra), lhs, rhs,
      kEqualityTolAxisym, hash_doubles(g.rho));
}

inline InequalityReport verify_afw(const CurveGeometry& g, const Weight& w,
                                   int k, int l) {
  if (g.space.K != 0)
    throw std::invalid_argument("verify_afw: flat space only");
  if (k != 1 || (l != -1 && l != 0))
    throw std::invalid_argument("verify_afw: curves take k=1, l in {-1,0}");
  if (!is_convex(g)) throw std::domain_error("verify_afw: convexity violated");

  const double lhs = weighted_kappa_integral(g, w);
  const double wl = l == 0 ? g.L : g.A;
  double hi = 0.0;
  for (double r : g.rho) hi = std::max(hi, r);
  const double rstar = detail::invert_increasing(
      [&](double r) { return afw_xi(2, l, r); }, wl, 2.0 * hi, 1e9);
  const double rhs = afw_chi(2, 1, w, rstar);

  char extra[96];
  std::snprintf(extra, sizeof extra, "k=1 l=%d weight=%s", l, w.id().c_str());
  return detail::make_report(
      "afw", detail::describe(g.space, 2, g.n(), extra), lhs, rhs,
      kEqualityTol2d, hash_doubles(g.rho));
}

// ---------------------------------------------------------------------------
// Weighted total-curvature comparison for convex curves in M^2(K).

inline InequalityReport verify_minkowski2d(const CurveGeometry& g,
                                           const Weight& w) {
  if (!is_convex(g))
    throw std::domain_error("verify_minkowski2d: convexity violated");
  const double lhs = weighted_kappa_integral(g, w) + Ag_area_fast(g, w);
  const double rhs = minkowski2d_rhs(g.space, w, g.L);
  std::string note;
  if (w.kind() == WeightKind::Constant)
    note = "equality-by-structure: constant weight reduces both sides to the "
           "total-curvature identity";
  char extra[64];
  std::snprintf(extra, sizeof extra, "weight=%s", w.id().c_str());
  return detail::make_report(
      "minkowski2d", detail::describe(g.space, 2, g.n(), extra), lhs, rhs,
      kEqualityTol2d, hash_doubles(g.rho), std::move(note));
}

// ---------------------------------------------------------------------------
// Weighted mean-curvature comparisons on h-convex domains in H^n and strictly
// convex domains in the hemisphere of S^n. Both compare
//   lhs = int g(Phi) H dmu + (n-1) A_g(Omega)
// against its value on the geodesic ball with the same area (H^n) or the same
// weighted volume int phi' dv (S^n).

inline double minkowskiHS_chi(const SpaceForm& sf, const Weight& w, int n,
                              double r) {
  return sphere_weighted_H(sf, w, n, r) + (n - 1) * ball_Ag(sf, w, n, r);
}

inline InequalityReport verify_minkowskiH(const AxisymGeometry& g,
                                          const Weight& w) {
  const int n = g.n;
  if (g.space.K != -1)
    throw std::invalid_argument("verify_minkowskiH: hyperbolic space only");
  if (!convexity_class(g).h_convex())
    throw std::domain_error("verify_minkowskiH: h-convexity violated");

  const AxisymShape shape{g.space, n, g.rho};
  const double lhs =
      weighted_sigma_integral(g, w, 1) + (n - 1) * Ag_volume(shape, w);
  double hi = 0.0;
  for (double r : g.rho) hi = std::max(hi, r);
  const double omega = unit_sphere_area(n - 1);
  const double rstar = detail::invert_increasing(
      [&](double r) { return omega * std::pow(g.space.phi(r), n - 1); },
      g.area, 2.0 * hi, 1e6);
  const double rhs = minkowskiHS_chi(g.space, w, n, rstar);

  std::string note;
  if (w.kind() == WeightKind::Constant)
    note = "reduces to the unweighted quermassintegral comparison; rigidity "
           "not tested";
  char extra[64];
  std::snprintf(extra, sizeof extra, "weight=%s", w.id().c_str());
  return detail::make_report(
      "minkowskiH", detail::describe(g.space, n, g.samples(), extra), lhs,
      rhs, kEqualityTolAxisym, hash_doubles(g.rho), std::move(note));
}

inline InequalityReport verify_minkowskiS(const AxisymGeometry& g,
                                          const Weight& w) {
  const int n = g.n;
  if (g.space.K != 1)
    throw std::invalid_argument("verify_minkowskiS: spherical space only");
  if (!convexity_class(g).strictly_convex())
    throw std::domain_error("verify_minkowskiS: strict convexity violated");
  for (double r : g.rho)
    if (!(r < 0.5 * kPi))
      throw std::domain_error("verify_minkowskiS: leaves the hemisphere");

  const AxisymShape shape{g.space, n, g.rho};
  const double lhs =
      weighted_sigma_integral(g, w, 1) + (n - 1) * Ag_volume(shape, w);
  const double zy = phi_prime_volume(shape);
  const double omega = unit_sphere_area(n - 1);
  const double rstar = detail::invert_increasing(
      [&](double r) { return omega * std::pow(std::sin(r), n) / n; }, zy,
      0.5 * kPi, 0.5 * kPi);
  const double rhs = minkowskiHS_chi(g.space, w, n, rstar);

  std::string note;
  if (w.kind() == WeightKind::Constant)
    note = "reduces to the unweighted comparison; rigidity not tested";
  char extra[64];
  std::snprintf(extra, sizeof extra, "weight=%s", w.id().c_str());
  return detail::make_report(
      "minkowskiS", detail::describe(g.space, n, g.samples(), extra), lhs,
      rhs, kEqualityTolAxisym, hash_doubles(g.rho), std::move(note));
}

// ---------------------------------------------------------------------------
// Three-term comparison in R^n for normalized curvature integrals:
//   int H_k r^2/2 dmu + k/(n-k+1) int H_{k-2} dmu
//     >= (n+1+k)/(2(n+1-k)) omega_{n-1}^{-1/(n-k)} (int H_{k-1} dmu)^{(n+1-k)/(n-k)}
// with the convention H_{-1} := u (support function); this choice reproduces
// both the printed 2D bound (via int u ds area identity) and the coordinate-
// sphere equality case, but is our reading of an underdetermined corner.

namespace detail {

inline double three_term_rhs(int n, int k, double int_hkm1) {
  const double c = (n + 1.0 + k) / (2.0 * (n + 1.0 - k));
  return c * std::pow(unit_sphere_area(n - 1), -1.0 / (n - k)) *
         std::pow(int_hkm1, (n + 1.0 - k) / (n - k));
}

// Normalized curvature integrals entering the three-term comparison and the
// eigenvalue bound, with the convention H_{-1} := u (support function):
//   phi_weighted = int H_k Phi dmu, lower = int H_{k-2} dmu,
//   norming      = int H_{k-1} dmu.
struct CurvatureIntegrals {
  double phi_weighted = 0.0;
  double lower = 0.0;
  double norming = 0.0;
};

inline CurvatureIntegrals curvature_integrals(const AxisymGeometry& g, int k) {
  const int n = g.n;
  auto Hnorm = [&](int j, int i) {
    if (j == -1) return g.u[i];
    return g.sigma(j, i) / binom(n - 1, j);
  };
  CurvatureIntegrals ci;
  for (int i = 0; i < g.samples(); ++i) {
    ci.phi_weighted += Hnorm(k, i) * g.Phi[i] * g.dmu[i];
    ci.lower += Hnorm(k - 2, i) * g.dmu[i];
    ci.norming += Hnorm(k - 1, i) * g.dmu[i];
  }
  return ci;
}

inline CurvatureIntegrals curvature_integrals(const CurveGeometry& g) {
  CurvatureIntegrals ci;
  for (int i = 0; i < g.n(); ++i) {
    ci.phi_weighted += g.kappa[i] * g.Phi[i] * g.ds[i];
    ci.lower += g.u[i] * g.ds[i];  // H_{-1} := u
    ci.norming += g.ds[i];
  }
  return ci;
}

}  // namespace detail

inline InequalityReport verify_3term(const AxisymGeometry& g, int k) {
  const int n = g.n;
  if (g.space.K != 0)
    throw std::invalid_argument("verify_3term: flat space only");
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("verify_3term: 1 <= k <= n-1");
  if (!convexity_class(g).k_convex(k))
    throw std::domain_error("verify_3term: k-convexity violated");

  const auto ci = detail::curvature_integrals(g, k);
  const double lhs = ci.phi_weighted + k / (n - k + 1.0) * ci.lower;
  const double rhs = detail::three_term_rhs(n, k, ci.norming);

  char extra[32];
  std::snprintf(extra, sizeof extra, "k=%d", k);
  return detail::make_report(
      "3term", detail::describe(g.space, n, g.samples(), extra), lhs, rhs,
      kEqualityTolAxisym, hash_doubles(g.rho));
}

inline InequalityReport verify_3term(const CurveGeometry& g) {
  if (g.space.K != 0)
    throw std::invalid_argument("verify_3term: flat space only");
  if (!is_convex(g)) throw std::domain_error("verify_3term: convexity violated");

  const int n = 2, k = 1;
  const auto ci = detail::curvature_integrals(g);
  const double lhs = ci.phi_weighted + k / (n - k + 1.0) * ci.lower;
  const double rhs = detail::three_term_rhs(n, k, ci.norming);

  return detail::make_report("3term",
                             detail::describe(g.space, 2, g.n(), "k=1"), lhs,
                             rhs, kEqualityTol2d, hash_doubles(g.rho));
}

// ---------------------------------------------------------------------------
// Catalog of preset sharp weighted isoperimetric comparisons for convex
// curves: seven flat items (Phi = r^2/2), five spherical (Phi = 1 - cos r),
// four hyperbolic (Phi = cosh r - 1), each with its printed closed-form rhs.

struct WeightedIsoItem {
  int index = 0;  // 1-based position within the catalog for this curvature
  Weight weight;
  std::function<double(double)> printed_rhs;  // closed form in the length L
  std::string label;
};

inline std::vector<WeightedIsoItem> weighted_iso_items(const SpaceForm& sf) {
  const double pi = kPi;
  auto W = [&](const char* id) { return parse_weight(id); };
  std::vector<WeightedIsoItem> items;
  if (sf.K == 0) {
    items = {
        {1, W("monomial:1"), [=](double L) { return L * L / (2 * pi); },
         "quadratic length bound"},
        {2, W("monomial:1.5:0.9428090415820634"),
         [=](double L) { return L * L * L / (6 * pi * pi); },
         "cubic length bound"},
        {3, W("monomial:2"),
         [=](double L) { return std::pow(L, 4) / (16 * pi * pi * pi); },
         "quartic length bound"},
        {4, W("exp"),
         [=](double L) {
           return 2 * pi * (2 * std::exp(L * L / (8 * pi * pi)) - 1);
         },
         "exponential weight"},
        {5, W("expsq"),
         [=](double L) {
           return 2 * pi *
                  (2 * std::exp(std::pow(L * L / (8 * pi * pi), 2)) - 1);
         },
         "exponential-square weight"},
        {6, W("sinh"),
         [=](double L) { return 4 * pi * std::sinh(L * L / (8 * pi * pi)); },
         "sinh weight"},
        {7, W("cosh"),
         [=](double L) {
           return 4 * pi * std::cosh(L * L / (8 * pi * pi)) - 2 * pi;
         },
         "cosh weight"},
    };
  } else if (sf.K == 1) {
    auto s = [=](double L) { return std::sqrt(4 * pi * pi - L * L); };
    items = {
        {1, W("monomial:1"), [=](double L) { return L * L / (2 * pi); },
         "quadratic length bound"},
        {2, W("monomial:2"),
         [=](double L) {
           return 4.0 / 3.0 * (s(L) - 2 * pi) -
                  L * L / (3 * pi * pi) * (s(L) - 3 * pi);
         },
         "squared weight"},
        {3, W("monomial:3"),
         [=](double L) {
           return -3 * std::pow(L, 4) / (16 * pi * pi * pi) -
                  L * L / (pi * pi) * (s(L) - 3 * pi) + 4 * s(L) - 8 * pi;
         },
         "cubed weight"},
        {4, W("rational-minus:1"),
         [=](double L) { return 4 * pi * std::log(2 * pi / s(L)); },
         "x/(1-x) weight"},
        {5, W("rational-minus:2"),
         [=](double L) {
           return 4 * pi * std::log(2 * pi / s(L)) - L * L / (2 * pi);
         },
         "x^2/(1-x) weight"},
    };
  } else {
    auto S = [=](double L) { return std::sqrt(L * L + 4 * pi * pi); };
    items = {
        {1, W("monomial:1"), [=](double L) { return L * L / (2 * pi); },
         "quadratic length bound"},
        {2, W("monomial:2"),
         [=](double L) {
           return L * L / (3 * pi * pi) * (S(L) - 3 * pi) +
                  4.0 / 3.0 * (S(L) - 2 * pi);
         },
         "squared weight"},
        {3, W("monomial:3"),
         [=](double L) {
           return 3 * std::pow(L, 4) / (16 * pi * pi * pi) -
                  L * L / (pi * pi) * (S(L) - 3 * pi) - 4 * S(L) + 8 * pi;
         },
         "cubed weight"},
        {4, W("rational-plus:2"),
         [=](double L) {
           return L * L / (2 * pi) -
                  2 * pi * std::log(L * L / (4 * pi * pi) + 1);
         },
         "x^2/(1+x) weight"},
    };
  }
  return items;
}

// Max relative deviation between the general comparison function and the
// printed closed form over a 20-point grid of admissible lengths.
inline double weighted_iso_rhs_deviation(const SpaceForm& sf,
                                         const WeightedIsoItem& item) {
  const double lmin = sf.K == 1 ? 0.3 : 0.5;
  const double step = sf.K == 1 ? 0.28 : 0.4;  // K=1 stays below 2*pi
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double L = lmin + step * i;
    const double a = minkowski2d_rhs(sf, item.weight, L);
    const double b = item.printed_rhs(L);
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    worst = std::max(worst, std::abs(a - b) / scale);
  }
  return worst;
}

inline std::vector<InequalityReport> weighted_iso_suite(
    const CurveGeometry& g) {
  std::vector<InequalityReport> reports;
  for (const auto& item : weighted_iso_items(g.space)) {
    InequalityReport r = verify_minkowski2d(g, item.weight);
    r.theorem = "weighted-iso";
    char extra[128];
    std::snprintf(extra, sizeof extra, " item=%d (%s) printed-rhs-dev=%.3e",
                  item.index, item.label.c_str(),
                  weighted_iso_rhs_deviation(g.space, item));
    r.params += extra;
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace geomflow
