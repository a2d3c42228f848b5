#pragma once

// Hypersurfaces of revolution in M^n(K), n >= 3: radial graphs r = rho(theta)
// over the polar angle theta in [0, pi] of S^{n-1}, rotated around the axis.
// Geometry reduces to the meridian; the parallel principal curvature kappa_2
// carries multiplicity n-2. theta-derivatives use 4th-order centered stencils
// with even reflection across the poles, quadrature is composite Simpson
// (the sin^{n-2} theta factor vanishes at the poles, taming endpoint error).

#include <cmath>
#include <stdexcept>
#include <vector>

#include "geomflow/numerics.hpp"
#include "geomflow/spaceform.hpp"
#include "geomflow/symfun.hpp"

namespace geomflow {

struct AxisymShape {
  SpaceForm space;
  int n = 3;                // ambient dimension, >= 3
  std::vector<double> rho;  // M+1 samples at theta_j = j pi / M, M even

  int segments() const { return static_cast<int>(rho.size()) - 1; }
};

// One-sided 4th-order derivative estimate at a pole; ~0 for profiles with a
// smooth even extension.
inline double pole_slope(const std::vector<double>& rho, bool at_zero) {
  const int M = static_cast<int>(rho.size()) - 1;
  const double h = kPi / M;
  auto f = [&](int i) { return at_zero ? rho[i] : rho[M - i]; };
  const double d =
      (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) /
      (12.0 * h);
  return at_zero ? d : -d;
}

inline AxisymShape make_axisym_shape(const SpaceForm& sf, int n,
                                     std::vector<double> rho,
                                     double pole_tol = 1e-6) {
  if (n < 3) throw std::invalid_argument("make_axisym_shape: n >= 3");
  const int M = static_cast<int>(rho.size()) - 1;
  if (M < 8 || M % 2 != 0)
    throw std::invalid_argument(
        "make_axisym_shape: need an even number of segments, M >= 8");
  double rmax = 0.0;
  for (double r : rho) {
    if (!std::isfinite(r) || !(r > 0.0))
      throw std::domain_error("make_axisym_shape: rho must be positive");
    if (sf.K == 1 && r >= 0.5 * kPi)
      throw std::domain_error(
          "make_axisym_shape: K = 1 profiles must stay inside the open "
          "hemisphere");
    rmax = std::max(rmax, r);
  }
  for (bool at_zero : {true, false})
    if (std::abs(pole_slope(rho, at_zero)) > pole_tol * rmax)
      throw std::domain_error(
          "make_axisym_shape: profile is not pole-regular (rho'(pole) != 0)");
  return AxisymShape{sf, n, std::move(rho)};
}

// sigma_k of the curvature tuple (kappa1, kappa2, ..., kappa2): either k
// parallels, or kappa1 with k-1 parallels.
inline double sigma_axisym(int n, int k, double k1, double k2) {
  if (k < 0) throw std::invalid_argument("sigma_axisym: k >= 0");
  if (k == 0) return 1.0;
  auto ipow = [](double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
  };
  return binom(n - 2, k) * ipow(k2, k) +
         binom(n - 2, k - 1) * ipow(k2, k - 1) * k1;
}

struct AxisymGeometry {
  SpaceForm space;
  int n = 3;
  std::vector<double> rho, drho, d2rho;  // theta-derivatives
  std::vector<double> phi, dphi, Phi;    // warp values at rho_j
  std::vector<double> W;                 // sqrt(phi^2 + rho'^2)
  std::vector<double> kappa1, kappa2;    // meridian / parallel curvature
  std::vector<double> u, gradPhiSq;
  std::vector<double> dmu;  // area element * Simpson weight: sums integrate
  double area = 0.0;        // |Sigma|
  double volume = 0.0;      // |Omega|

  int samples() const { return static_cast<int>(rho.size()); }
  double h() const { return kPi / (samples() - 1); }
  double sigma(int k, int j) const {
    return sigma_axisym(n, k, kappa1[j], kappa2[j]);
  }
};

namespace detail {

// 4th-order first and second derivatives on [0, pi] with even reflection.
inline void pole_reflected_derivatives(const std::vector<double>& f,
                                       std::vector<double>& d1,
                                       std::vector<double>& d2) {
  const int M = static_cast<int>(f.size()) - 1;
  const double h = kPi / M;
  auto at = [&](int i) {
    if (i < 0) i = -i;
    if (i > M) i = 2 * M - i;
    return f[i];
  };
  d1.resize(M + 1);
  d2.resize(M + 1);
  for (int j = 0; j <= M; ++j) {
    d1[j] = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) /
            (12.0 * h);
    d2[j] = (-at(j - 2) + 16.0 * at(j - 1) - 30.0 * at(j) + 16.0 * at(j + 1) -
             at(j + 2)) /
            (12.0 * h * h);
  }
  d1[0] = d1[M] = 0.0;  // exact by evenness
}

}  // namespace detail

inline AxisymGeometry axisym_geometry(const AxisymShape& s) {
  const int M = s.segments();
  const int n = s.n;
  const double h = kPi / M;
  const double omega = unit_sphere_area(n - 2);
  AxisymGeometry g;
  g.space = s.space;
  g.n = n;
  g.rho = s.rho;
  detail::pole_reflected_derivatives(g.rho, g.drho, g.d2rho);
  const int P = M + 1;
  g.phi.resize(P);
  g.dphi.resize(P);
  g.Phi.resize(P);
  g.W.resize(P);
  g.kappa1.resize(P);
  g.kappa2.resize(P);
  g.u.resize(P);
  g.gradPhiSq.resize(P);
  g.dmu.resize(P);
  for (int j = 0; j <= M; ++j) {
    const double r = g.rho[j];
    if (!(r > 0.0) || (s.space.K == 1 && r >= 0.5 * kPi))
      throw std::domain_error("axisym_geometry: sample outside chart");
    const double th = h * j;
    const double ph = s.space.phi(r), dph = s.space.dphi(r);
    const double rp = g.drho[j], rpp = g.d2rho[j];
    const double W2 = ph * ph + rp * rp, W = std::sqrt(W2);
    g.phi[j] = ph;
    g.dphi[j] = dph;
    g.Phi[j] = s.space.Phi(r);
    g.W[j] = W;
    g.kappa1[j] = (ph * ph * dph + 2.0 * dph * rp * rp - ph * rpp) / (W2 * W);
    const double st = std::sin(th);
    // parallel curvature; the pole limit is kappa1 (umbilic axis points)
    g.kappa2[j] = (j == 0 || j == M)
                      ? g.kappa1[j]
                      : (ph * dph * st - rp * std::cos(th)) / (W * ph * st);
    g.u[j] = ph * ph / W;
    g.gradPhiSq[j] = ph * ph * rp * rp / W2;
    if (!std::isfinite(g.kappa1[j]) || !std::isfinite(g.kappa2[j]))
      throw std::domain_error("axisym_geometry: non-finite curvature");
    const double simpson =
        (j == 0 || j == M) ? h / 3.0 : (j % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    const double spow = std::pow(st, n - 2);
    g.dmu[j] = omega * W * std::pow(ph, n - 2) * spow * simpson;
    g.area += g.dmu[j];
    g.volume += omega * phi_power_integral(s.space, n - 1, r) * spow * simpson;
  }
  return g;
}

// W_l: l = -1 volume, l = 0 area, else int sigma_l dmu.
inline double quermassintegral(const AxisymGeometry& g, int l) {
  if (l < -1 || l > g.n - 1)
    throw std::invalid_argument("quermassintegral: l outside -1..n-1");
  if (l == -1) return g.volume;
  if (l == 0) return g.area;
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j) s += g.sigma(l, j) * g.dmu[j];
  return s;
}

// \int g(Phi) sigma_k dmu, 1 <= k <= n-1.
inline double weighted_sigma_integral(const AxisymGeometry& g, const Weight& w,
                                      int k) {
  if (k < 1 || k > g.n - 1)
    throw std::invalid_argument("weighted_sigma_integral: k outside 1..n-1");
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j)
    s += w.g(g.Phi[j]) * g.sigma(k, j) * g.dmu[j];
  return s;
}

// A_g(Omega) by the definition: adaptive quadrature along each ray.
inline double Ag_volume(const AxisymShape& s, const Weight& w,
                        double rel_tol = 1e-10) {
  const SpaceForm& sf = s.space;
  const int M = s.segments();
  const int n = s.n;
  const double h = kPi / M;
  const double omega = unit_sphere_area(n - 2);
  double total = 0.0;
  for (int j = 0; j <= M; ++j) {
    auto f = [&](double t) {
      const double Ph = sf.Phi(t);
      return (w.dg(Ph) * sf.dphi(t) + sf.K * w.g(Ph)) *
             std::pow(sf.phi(t), n - 1);
    };
    const double simpson =
        (j == 0 || j == M) ? h / 3.0 : (j % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    total += integrate(f, 0.0, s.rho[j], rel_tol) *
             std::pow(std::sin(h * j), n - 2) * simpson;
  }
  return omega * total;
}

// Precomputed radial antiderivative of the A_g integrand; shape-independent,
// so one table serves a whole flow run.
inline CumulativeAntiderivative make_Ag_radial_table(const SpaceForm& sf,
                                                     const Weight& w, int n,
                                                     double r_hi,
                                                     int cells = 4096) {
  return CumulativeAntiderivative(
      [&, n](double t) {
        const double Ph = sf.Phi(t);
        return (w.dg(Ph) * sf.dphi(t) + sf.K * w.g(Ph)) *
               std::pow(sf.phi(t), n - 1);
      },
      r_hi, cells);
}

inline double Ag_volume_fast(const AxisymShape& s,
                             const CumulativeAntiderivative& table) {
  const int M = s.segments();
  const double h = kPi / M;
  const double omega = unit_sphere_area(s.n - 2);
  double total = 0.0;
  for (int j = 0; j <= M; ++j) {
    const double simpson =
        (j == 0 || j == M) ? h / 3.0 : (j % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    total += table(s.rho[j]) * std::pow(std::sin(h * j), s.n - 2) * simpson;
  }
  return omega * total;
}

// \int_Omega phi'(r) dv; the radial integral is exact (phi^n / n).
inline double phi_prime_volume(const AxisymShape& s) {
  const int M = s.segments();
  const double h = kPi / M;
  const double omega = unit_sphere_area(s.n - 2);
  double total = 0.0;
  for (int j = 0; j <= M; ++j) {
    const double simpson =
        (j == 0 || j == M) ? h / 3.0 : (j % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    total += std::pow(s.space.phi(s.rho[j]), s.n) *
             std::pow(std::sin(h * j), s.n - 2) * simpson;
  }
  return omega * total / s.n;
}

// \int u dmu; equals n |Omega| in R^n (divergence theorem).
inline double support_integral(const AxisymGeometry& g) {
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j) s += g.u[j] * g.dmu[j];
  return s;
}

// \int [ (n-1-k) phi' sigma_k - (k+1) u sigma_{k+1} ] dmu, k = 0..n-2;
// vanishes on closed hypersurfaces.
inline double minkowski_defect_axisym(const AxisymGeometry& g, int k) {
  if (k < 0 || k > g.n - 2)
    throw std::invalid_argument("minkowski_defect_axisym: k outside 0..n-2");
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j)
    s += ((g.n - 1 - k) * g.dphi[j] * g.sigma(k, j) -
          (k + 1) * g.u[j] * g.sigma(k + 1, j)) *
         g.dmu[j];
  return s;
}

// \int [ (n-1) phi'/sigma_1 - u ] dmu >= 0 for mean-convex hypersurfaces,
// zero exactly on geodesic spheres.
inline double hk_gap_axisym(const AxisymGeometry& g) {
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j) {
    const double s1 = g.sigma(1, j);
    if (!(s1 > 0.0))
      throw std::domain_error("hk_gap_axisym: not mean-convex");
    s += ((g.n - 1) * g.dphi[j] / s1 - g.u[j]) * g.dmu[j];
  }
  return s;
}

// Convexity flags with scale-free margins, minimized over samples.
struct ConvexityClass {
  int n = 3;
  double kappa_min = 0.0;         // over both principal curvatures
  std::vector<double> sigma_min;  // sigma_min[k], k = 1..n-1

  bool k_convex(int k) const {
    if (k < 1 || k > n - 1)
      throw std::invalid_argument("k_convex: k outside 1..n-1");
    for (int j = 1; j <= k; ++j)
      if (!(sigma_min[j] > 0.0)) return false;
    return true;
  }
  bool strictly_convex() const { return kappa_min > 0.0; }
  bool h_convex() const { return kappa_min >= 1.0; }
  double h_margin() const { return kappa_min - 1.0; }
};

inline ConvexityClass convexity_class(const AxisymGeometry& g) {
  ConvexityClass c;
  c.n = g.n;
  c.kappa_min = std::min(g.kappa1[0], g.kappa2[0]);
  c.sigma_min.assign(g.n, 0.0);
  for (int k = 1; k <= g.n - 1; ++k)
    c.sigma_min[k] = g.sigma(k, 0);
  for (int j = 1; j < g.samples(); ++j) {
    c.kappa_min = std::min({c.kappa_min, g.kappa1[j], g.kappa2[j]});
    for (int k = 1; k <= g.n - 1; ++k)
      c.sigma_min[k] = std::min(c.sigma_min[k], g.sigma(k, j));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Exact first-variation rates under normal speed F (per-sample, same grid).
// Derived from dh_i^j/dt = -grad_i grad^j F - F (h^2)_i^j - K F delta_i^j,
// d(dmu)/dt = F sigma_1 dmu, dPhi/dt = u F, with the tangentially integrated
// Newton-tensor terms moved onto g by parts (T_{k-1} is divergence-free).

namespace detail {

inline void check_speed(const AxisymGeometry& g, const std::vector<double>& F,
                        const char* who) {
  if (static_cast<int>(F.size()) != g.samples())
    throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace detail

// d|Omega|/dt = \int F dmu
inline double volume_rate(const AxisymGeometry& g,
                          const std::vector<double>& F) {
  detail::check_speed(g, F, "volume_rate");
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j) s += F[j] * g.dmu[j];
  return s;
}

// dW_l/dt: l = -1 -> \int F; l = 0 -> \int sigma_1 F;
// l >= 1 -> \int [ (l+1) sigma_{l+1} - (n-l) K sigma_{l-1} ] F dmu.
inline double quermass_rate(const AxisymGeometry& g, int l,
                            const std::vector<double>& F) {
  detail::check_speed(g, F, "quermass_rate");
  if (l < -1 || l > g.n - 1)
    throw std::invalid_argument("quermass_rate: l outside -1..n-1");
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j) {
    double integrand;
    if (l == -1)
      integrand = 1.0;
    else if (l == 0)
      integrand = g.sigma(1, j);
    else
      integrand = (l + 1) * g.sigma(l + 1, j) -
                  (g.n - l) * g.space.K * g.sigma(l - 1, j);
    s += integrand * F[j] * g.dmu[j];
  }
  return s;
}

// d/dt \int g(Phi) sigma_k dmu. The Newton tensor contracted with the
// meridian direction is T_{k-1}^{11} = binom(n-2, k-1) kappa_2^{k-1}
// (gradients of radial functions point along the meridian).
inline double weighted_sigma_rate(const AxisymGeometry& g, const Weight& w,
                                  int k, const std::vector<double>& F) {
  detail::check_speed(g, F, "weighted_sigma_rate");
  if (k < 1 || k > g.n - 1)
    throw std::invalid_argument("weighted_sigma_rate: k outside 1..n-1");
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j) {
    const double sk = g.sigma(k, j), skm = g.sigma(k - 1, j),
                 skp = g.sigma(k + 1, j);
    const double gp = w.dg(g.Phi[j]), gpp = w.d2g(g.Phi[j]),
                 gv = w.g(g.Phi[j]);
    double T11 = binom(g.n - 2, k - 1);
    for (int i = 0; i < k - 1; ++i) T11 *= g.kappa2[j];
    s += (gp * g.u[j] * sk -
          gp * ((g.n - k) * g.dphi[j] * skm - k * g.u[j] * sk) -
          gpp * T11 * g.gradPhiSq[j] + (k + 1) * gv * skp -
          (g.n - k) * g.space.K * gv * skm) *
         F[j] * g.dmu[j];
  }
  return s;
}

// dA_g/dt = \int ( g'(Phi) phi' + K g(Phi) ) F dmu (flux of the A_g density).
inline double Ag_rate(const AxisymGeometry& g, const Weight& w,
                      const std::vector<double>& F) {
  detail::check_speed(g, F, "Ag_rate");
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j)
    s += (w.dg(g.Phi[j]) * g.dphi[j] + g.space.K * w.g(g.Phi[j])) * F[j] *
         g.dmu[j];
  return s;
}

// d/dt \int_Omega phi' dv = \int phi'(rho) F dmu.
inline double phi_prime_volume_rate(const AxisymGeometry& g,
                                    const std::vector<double>& F) {
  detail::check_speed(g, F, "phi_prime_volume_rate");
  double s = 0.0;
  for (int j = 0; j < g.samples(); ++j) s += g.dphi[j] * F[j] * g.dmu[j];
  return s;
}

// ---------------------------------------------------------------------------

// Shifts a flat shape along its symmetry axis by d and re-samples radially
// about the original origin. Weighted functionals change; callers report the
// shift explicitly.
inline AxisymShape translate_axisym(const AxisymShape& s, double d) {
  if (s.space.K != 0)
    throw std::invalid_argument("translate_axisym: flat case only");
  const int M = s.segments();
  const double h = kPi / M;
  std::vector<double> theta(M + 1);
  for (int j = 0; j <= M; ++j) theta[j] = h * j;
  const CubicSpline R(theta, s.rho);  // clamped, zero end slopes
  std::vector<double> out(M + 1);
  // meridian point in the (z, w) half-plane, shifted
  auto zw = [&](double t, double& z, double& w) {
    const double r = R(t);
    z = r * std::cos(t) + d;
    w = r * std::sin(t);
  };
  out[0] = s.rho[0] + d;
  out[M] = s.rho[M] - d;
  if (!(out[0] > 0.0) || !(out[M] > 0.0))
    throw std::domain_error("translate_axisym: origin leaves the body");
  for (int i = 1; i < M; ++i) {
    const double alpha = h * i;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    double lo = 0.0, hi = kPi;
    double z, w;
    // f(t) = w cos(alpha) - z sin(alpha): negative at t=0, positive at t=pi
    // when the shifted body still contains the origin.
    zw(lo, z, w);
    double flo = w * ca - z * sa;
    zw(hi, z, w);
    const double fhi = w * ca - z * sa;
    if (!(flo < 0.0) || !(fhi > 0.0))
      throw std::domain_error(
          "translate_axisym: shape not star-shaped about the shifted origin");
    for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      zw(mid, z, w);
      const double fm = w * ca - z * sa;
      if (fm < 0.0) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    zw(0.5 * (lo + hi), z, w);
    out[i] = std::hypot(z, w);
  }
  return make_axisym_shape(s.space, s.n, std::move(out));
}

}  // namespace geomflow
