#pragma once

// Closed convex curves in M^2(K), represented radially about the origin:
// rho(theta_j) at uniform angles theta_j = 2 pi j / N. Derivatives are
// spectral (the curves of interest are analytic), so geometric quantities
// resolve equality cases to ~1e-10 at moderate N.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomflow/numerics.hpp"
#include "geomflow/spaceform.hpp"

namespace geomflow {

struct ClosedCurve {
  SpaceForm space;
  std::vector<double> rho;  // positive; for K = 1 strictly below pi/2

  int n() const { return static_cast<int>(rho.size()); }
};

inline ClosedCurve make_closed_curve(const SpaceForm& sf,
                                     std::vector<double> rho) {
  if (rho.size() < 8)
    throw std::invalid_argument("make_closed_curve: need N >= 8 samples");
  for (double r : rho) {
    if (!std::isfinite(r) || !(r > 0.0))
      throw std::domain_error("make_closed_curve: rho must be positive");
    if (sf.K == 1 && r >= 0.5 * kPi)
      throw std::domain_error(
          "make_closed_curve: K = 1 samples must stay inside the open "
          "hemisphere (rho < pi/2)");
  }
  return ClosedCurve{sf, std::move(rho)};
}

// Pointwise geometry of a radial curve. W dtheta is the arclength element;
// all fields are per sample except the totals L and A.
struct CurveGeometry {
  SpaceForm space;
  std::vector<double> rho, drho, d2rho;   // spectral theta-derivatives
  std::vector<double> phi, dphi, Phi;     // warp values at rho_j
  std::vector<double> W, ds;              // W = sqrt(phi^2 + rho'^2)
  std::vector<double> kappa, u, gradPhiSq;
  double L = 0.0;  // length
  double A = 0.0;  // enclosed area

  int n() const { return static_cast<int>(rho.size()); }
  double dtheta() const { return 2.0 * kPi / n(); }
};

inline CurveGeometry curve_geometry(const ClosedCurve& c) {
  const int n = c.n();
  CurveGeometry g;
  g.space = c.space;
  g.rho = c.rho;
  spectral_derivatives(g.rho, g.drho, g.d2rho);
  g.phi.resize(n);
  g.dphi.resize(n);
  g.Phi.resize(n);
  g.W.resize(n);
  g.ds.resize(n);
  g.kappa.resize(n);
  g.u.resize(n);
  g.gradPhiSq.resize(n);
  const double dth = 2.0 * kPi / n;
  for (int j = 0; j < n; ++j) {
    const double r = g.rho[j];
    if (!(r > 0.0) || (c.space.K == 1 && r >= 0.5 * kPi))
      throw std::domain_error("curve_geometry: sample outside chart");
    const double ph = c.space.phi(r);
    const double dph = c.space.dphi(r);
    const double rp = g.drho[j], rpp = g.d2rho[j];
    const double W2 = ph * ph + rp * rp;
    const double W = std::sqrt(W2);
    g.phi[j] = ph;
    g.dphi[j] = dph;
    g.Phi[j] = c.space.Phi(r);
    g.W[j] = W;
    g.ds[j] = W * dth;
    g.kappa[j] = (ph * ph * dph + 2.0 * dph * rp * rp - ph * rpp) / (W2 * W);
    g.u[j] = ph * ph / W;
    // phi^2 - u^2, written in the form that is nonnegative by construction
    g.gradPhiSq[j] = ph * ph * rp * rp / W2;
    if (!std::isfinite(g.kappa[j]) || !std::isfinite(g.u[j]))
      throw std::domain_error("curve_geometry: non-finite geometry");
    g.L += g.ds[j];
    g.A += g.Phi[j] * dth;
  }
  return g;
}

inline bool is_convex(const CurveGeometry& g) {
  for (double k : g.kappa)
    if (!(k > 0.0)) return false;
  return true;
}

// Scale-aware convexity margin; below ~1e-3 a curve needs more samples.
inline double convexity_margin(const CurveGeometry& g) {
  double kmin = g.kappa[0];
  for (double k : g.kappa) kmin = std::min(kmin, k);
  return kmin * g.L;
}

// \int g(Phi) kappa ds by periodic trapezoid (spectral accuracy).
inline double weighted_kappa_integral(const CurveGeometry& g, const Weight& w) {
  double s = 0.0;
  for (int j = 0; j < g.n(); ++j) s += w.g(g.Phi[j]) * g.kappa[j] * g.ds[j];
  return s;
}

// A_g(Omega) = \int_Omega (g'(Phi) phi' + K g(Phi)) dv by the definition:
// adaptive quadrature along each ray, periodic trapezoid in theta.
inline double Ag_area(const ClosedCurve& c, const Weight& w,
                      double rel_tol = 1e-10) {
  const SpaceForm& sf = c.space;
  const double dth = 2.0 * kPi / c.n();
  double total = 0.0;
  for (double rj : c.rho) {
    auto f = [&](double s) {
      const double Ph = sf.Phi(s);
      return (w.dg(Ph) * sf.dphi(s) + sf.K * w.g(Ph)) * sf.phi(s);
    };
    total += integrate(f, 0.0, rj, rel_tol) * dth;
  }
  return total;
}

// Same functional reduced to the boundary: the ray integral has antiderivative
// g(Phi)phi' + 2K G(Phi), so
//   A_g = \int_0^{2pi} [ g(Phi(rho)) phi'(rho) - g(0) + 2K G(Phi(rho)) ] dtheta.
// O(N), used by flow monitors.
inline double Ag_area_fast(const CurveGeometry& g, const Weight& w) {
  const double g0 = w.g(0.0);
  double total = 0.0;
  for (int j = 0; j < g.n(); ++j)
    total += w.g(g.Phi[j]) * g.dphi[j] - g0 +
             2.0 * g.space.K * w.G(g.Phi[j]);
  return total * g.dtheta();
}

// Sharp lower bound for \int g(Phi) kappa ds + A_g among curves of length L:
// the value on the centered geodesic circle of that length,
//   2 g(A(L)/2pi) sqrt(4 pi^2 - K L^2) - 2 pi g(0) + 4 pi K G(A(L)/2pi),
// where A(l) = 2 pi Phi(phi^{-1}(l / 2pi)) is the area enclosed by the circle
// of length l.
inline double minkowski2d_rhs(const SpaceForm& sf, const Weight& w, double L) {
  if (!(L > 0.0)) throw std::domain_error("minkowski2d_rhs: L > 0 required");
  const double disc = 4.0 * kPi * kPi - sf.K * L * L;
  if (disc < 0.0)
    throw std::domain_error("minkowski2d_rhs: 4 pi^2 - K L^2 < 0");
  const double r = sf.phi_inv(L / (2.0 * kPi));
  const double x = sf.Phi(r);  // A(L) / 2 pi
  return 2.0 * w.g(x) * std::sqrt(disc) - 2.0 * kPi * w.g(0.0) +
         4.0 * kPi * sf.K * w.G(x);
}

// d/dt [ \int g(Phi) kappa ds + A_g ] under normal speed F:
//   \int ( 2 g'(Phi) u kappa - g''(Phi) |grad Phi|^2 ) F ds.
inline double evolution_rhs_2d(const CurveGeometry& g, const Weight& w,
                               const std::vector<double>& F) {
  if (static_cast<int>(F.size()) != g.n())
    throw std::invalid_argument("evolution_rhs_2d: grid mismatch");
  double s = 0.0;
  for (int j = 0; j < g.n(); ++j)
    s += (2.0 * w.dg(g.Phi[j]) * g.u[j] * g.kappa[j] -
          w.d2g(g.Phi[j]) * g.gradPhiSq[j]) *
         F[j] * g.ds[j];
  return s;
}

// \int (phi'(rho) - u kappa) ds; vanishes on every closed curve (integrated
// Laplacian of Phi). A cheap consistency monitor.
inline double minkowski_defect_2d(const CurveGeometry& g) {
  double s = 0.0;
  for (int j = 0; j < g.n(); ++j)
    s += (g.dphi[j] - g.u[j] * g.kappa[j]) * g.ds[j];
  return s;
}

// \int (phi'/kappa - u) ds >= 0 for convex curves, zero exactly on geodesic
// circles (any center).
inline double heintze_karcher_gap_2d(const CurveGeometry& g) {
  double s = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    if (!(g.kappa[j] > 0.0))
      throw std::domain_error("heintze_karcher_gap_2d: curve not convex");
    s += (g.dphi[j] / g.kappa[j] - g.u[j]) * g.ds[j];
  }
  return s;
}

// Weighted barycenter of the curve (flat case), weights w_j >= 0 per sample.
inline std::array<double, 2> weighted_center(const CurveGeometry& g,
                                             const std::vector<double>& wts) {
  if (g.space.K != 0)
    throw std::invalid_argument("weighted_center: flat case only");
  if (static_cast<int>(wts.size()) != g.n())
    throw std::invalid_argument("weighted_center: grid mismatch");
  double sx = 0.0, sy = 0.0, sw = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    const double th = 2.0 * kPi * j / g.n();
    const double mass = wts[j] * g.ds[j];
    sx += g.rho[j] * std::cos(th) * mass;
    sy += g.rho[j] * std::sin(th) * mass;
    sw += mass;
  }
  if (!(sw > 0.0))
    throw std::domain_error("weighted_center: zero total weight");
  return {sx / sw, sy / sw};
}

// Re-samples the same flat curve radially about the point (cx, cy). Weighted
// functionals are origin-dependent, so callers must report the shift; nothing
// here recenters implicitly.
inline ClosedCurve recenter_curve(const ClosedCurve& c, double cx, double cy) {
  if (c.space.K != 0)
    throw std::invalid_argument("recenter_curve: flat case only");
  const int n = c.n();
  const TrigSeries R(c.rho);
  auto point = [&](double th, double& x, double& y) {
    const double r = R(th);
    x = r * std::cos(th) - cx;
    y = r * std::sin(th) - cy;
  };
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double alpha = 2.0 * kPi * i / n;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    // Root of f(theta) = cross(p(theta) - c, e_alpha) with positive
    // projection onto e_alpha; unique when the curve is star-shaped about c.
    double th = alpha;
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const double r = R(th), dr = R.deriv(th);
      const double x = r * std::cos(th) - cx, y = r * std::sin(th) - cy;
      const double xp = dr * std::cos(th) - r * std::sin(th);
      const double yp = dr * std::sin(th) + r * std::cos(th);
      const double f = y * ca - x * sa;
      const double df = yp * ca - xp * sa;
      if (df == 0.0) break;
      const double step = f / df;
      th -= step;
      if (std::abs(step) < 1e-13) {
        double xx, yy;
        point(th, xx, yy);
        ok = xx * ca + yy * sa > 0.0;
        break;
      }
    }
    if (!ok) {
      // Bisection fallback over a fine scan.
      const int m = 16 * n;
      double lo = 0.0, hi = 0.0;
      bool found = false;
      double xx, yy;
      point(alpha, xx, yy);
      double prev_th = alpha - kPi, prev_f = 0.0;
      {
        point(prev_th, xx, yy);
        prev_f = yy * ca - xx * sa;
      }
      for (int j = 1; j <= m && !found; ++j) {
        const double tj = alpha - kPi + 2.0 * kPi * j / m;
        point(tj, xx, yy);
        const double fj = yy * ca - xx * sa;
        if ((prev_f <= 0.0) != (fj <= 0.0)) {
          point(0.5 * (prev_th + tj), xx, yy);
          if (xx * ca + yy * sa > 0.0) {
            lo = prev_th;
            hi = tj;
            found = true;
          }
        }
        prev_th = tj;
        prev_f = fj;
      }
      if (!found)
        throw std::domain_error(
            "recenter_curve: curve is not star-shaped about the requested "
            "center");
      point(lo, xx, yy);
      double flo = yy * ca - xx * sa;
      for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        point(mid, xx, yy);
        const double fm = yy * ca - xx * sa;
        if ((fm <= 0.0) == (flo <= 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      th = 0.5 * (lo + hi);
    }
    double x, y;
    point(th, x, y);
    out[i] = std::hypot(x, y);
  }
  return make_closed_curve(c.space, std::move(out));
}

}  // namespace geomflow
