#pragma once

// Time-stepping for the four locally constrained curvature flows on radial
// graphs, with monitored functionals and monotonicity verdicts.
//
// Normal speeds F (H = sigma_1 throughout, H_j the normalized ratios):
//   curve-lp:  F = phi'(rho)/kappa - u          on M^2(K), strictly convex
//   imcf-k:    F = H_{k-1}/H_k - u              in R^n, k-convex star-shaped
//   hyp-mean:  F = phi'/H - u/(n-1)             in H^n, h-convex
//   sph-mean:  F = (n-1)/H - u/phi'             in S^n_+, strictly convex
// A radial graph moves by d rho/dt = F W / phi(rho).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomflow/axisym.hpp"
#include "geomflow/curve2d.hpp"

namespace geomflow {

enum class FlowKind { CurveLp, ImcfK, HypMean, SphMean };

inline FlowKind parse_flow(const std::string& s) {
  if (s == "curve-lp") return FlowKind::CurveLp;
  if (s == "imcf-k") return FlowKind::ImcfK;
  if (s == "hyp-mean") return FlowKind::HypMean;
  if (s == "sph-mean") return FlowKind::SphMean;
  throw std::invalid_argument("unknown flow '" + s + "'");
}

inline const char* flow_name(FlowKind f) {
  switch (f) {
    case FlowKind::CurveLp: return "curve-lp";
    case FlowKind::ImcfK: return "imcf-k";
    case FlowKind::HypMean: return "hyp-mean";
    default: return "sph-mean";
  }
}

struct FlowSpec {
  FlowKind flow = FlowKind::CurveLp;
  int k = 1;                    // order parameter of imcf-k
  double dt = 1e-3;             // user step cap; a parabolic CFL bound may shrink it
  long max_steps = 200000;
  double stop_tol = 1e-10;      // stationary when max|F| <= stop_tol * max rho
  double stop_roundness = 0.0;  // if > 0, also stop once max rho - min rho <= this
  bool midpoint = true;         // 2nd-order explicit midpoint; false = Euler
};

// Hard failure of a run: convexity loss, non-finite speed, domain exit.
struct FlowError : std::runtime_error {
  long step;
  FlowError(long step_, const std::string& msg)
      : std::runtime_error("flow step " + std::to_string(step_) + ": " + msg),
        step(step_) {}
};

inline void check_flow_space(const SpaceForm& sf, int dim,
                             const FlowSpec& spec) {
  switch (spec.flow) {
    case FlowKind::CurveLp:
      if (dim != 2)
        throw std::invalid_argument("curve-lp runs on curves in M^2(K)");
      return;
    case FlowKind::ImcfK:
      if (dim < 3 || sf.K != 0)
        throw std::invalid_argument("imcf-k runs on hypersurfaces in R^n");
      if (spec.k < 1 || spec.k > dim - 1)
        throw std::invalid_argument("imcf-k: 1 <= k <= n-1 required");
      return;
    case FlowKind::HypMean:
      if (dim < 3 || sf.K != -1)
        throw std::invalid_argument("hyp-mean runs on hypersurfaces in H^n");
      return;
    default:
      if (dim < 3 || sf.K != 1)
        throw std::invalid_argument(
            "sph-mean runs on hypersurfaces in the hemisphere of S^n");
  }
}

// ---------------------------------------------------------------------------
// Pointwise speeds. Preconditions are enforced here (domain_error), so every
// evaluation along a run re-checks the convexity class the flow requires.

inline std::vector<double> curve_speed(const CurveGeometry& g,
                                       const FlowSpec& spec) {
  if (spec.flow != FlowKind::CurveLp)
    throw std::invalid_argument("curve_speed: curve-lp only");
  std::vector<double> F(g.n());
  for (int i = 0; i < g.n(); ++i) {
    if (!(g.kappa[i] > 0.0))
      throw std::domain_error("curve-lp: strict convexity lost");
    F[i] = g.dphi[i] / g.kappa[i] - g.u[i];
    if (!std::isfinite(F[i]))
      throw std::domain_error("curve-lp: non-finite speed");
  }
  return F;
}

inline std::vector<double> axisym_speed(const AxisymGeometry& g,
                                        const FlowSpec& spec) {
  const int n = g.n;
  std::vector<double> F(g.samples());
  for (int j = 0; j < g.samples(); ++j) {
    double f = 0.0;
    switch (spec.flow) {
      case FlowKind::ImcfK: {
        for (int i = 1; i <= spec.k; ++i)
          if (!(g.sigma(i, j) > 0.0))
            throw std::domain_error("imcf-k: k-convexity lost");
        const double ratio = binom(n - 1, spec.k) /
                             static_cast<double>(binom(n - 1, spec.k - 1));
        f = ratio * g.sigma(spec.k - 1, j) / g.sigma(spec.k, j) - g.u[j];
        break;
      }
      case FlowKind::HypMean: {
        if (!(std::min(g.kappa1[j], g.kappa2[j]) >= 1.0 - 1e-9))
          throw std::domain_error("hyp-mean: h-convexity lost");
        const double H = g.sigma(1, j);
        f = g.dphi[j] / H - g.u[j] / (n - 1);
        break;
      }
      case FlowKind::SphMean: {
        if (!(std::min(g.kappa1[j], g.kappa2[j]) > 0.0))
          throw std::domain_error("sph-mean: strict convexity lost");
        const double H = g.sigma(1, j);
        f = (n - 1.0) / H - g.u[j] / g.dphi[j];
        break;
      }
      default:
        throw std::invalid_argument("axisym_speed: curve-lp is 2D only");
    }
    if (!std::isfinite(f))
      throw std::domain_error("flow speed non-finite");
    F[j] = f;
  }
  return F;
}

// ---------------------------------------------------------------------------
// Parabolic step-size bound. The speeds contain 1/kappa or 1/H, so the radial
// update behaves like a diffusion with coefficient |dF/d kappa_1| / W^2
// (the meridian curvature carries the rho'' dependence, kappa = -phi rho''/W^3
// + lower order); explicit stability needs dt <~ dtheta^2 / (2 D).

inline double curve_dt_bound(const CurveGeometry& g, const FlowSpec& spec) {
  if (spec.flow != FlowKind::CurveLp)
    throw std::invalid_argument("curve_dt_bound: curve-lp only");
  double dmax = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double D =
        g.dphi[i] / (g.kappa[i] * g.kappa[i] * g.W[i] * g.W[i]);
    dmax = std::max(dmax, std::abs(D));
  }
  const double dth = g.dtheta();
  return 0.2 * dth * dth / std::max(dmax, 1e-300);
}

inline double axisym_dt_bound(const AxisymGeometry& g, const FlowSpec& spec) {
  const int n = g.n;
  double dmax = 0.0;
  for (int j = 0; j < g.samples(); ++j) {
    double dFdk1 = 0.0;
    switch (spec.flow) {
      case FlowKind::ImcfK: {
        // d sigma_i / d kappa_1 = binom(n-2, i-1) kappa_2^{i-1}
        const double sk = g.sigma(spec.k, j), skm = g.sigma(spec.k - 1, j);
        const double dskm =
            spec.k >= 2 ? binom(n - 2, spec.k - 2) *
                              std::pow(g.kappa2[j], spec.k - 2)
                        : 0.0;
        const double dsk =
            binom(n - 2, spec.k - 1) * std::pow(g.kappa2[j], spec.k - 1);
        const double ratio = binom(n - 1, spec.k) /
                             static_cast<double>(binom(n - 1, spec.k - 1));
        dFdk1 = ratio * (dskm * sk - skm * dsk) / (sk * sk);
        break;
      }
      case FlowKind::HypMean:
        dFdk1 = -g.dphi[j] / std::pow(g.sigma(1, j), 2);
        break;
      case FlowKind::SphMean:
        dFdk1 = -(n - 1.0) / std::pow(g.sigma(1, j), 2);
        break;
      default:
        throw std::invalid_argument("axisym_dt_bound: curve-lp is 2D only");
    }
    dmax = std::max(dmax, std::abs(dFdk1) / (g.W[j] * g.W[j]));
  }
  const double dth = kPi / (g.samples() - 1);
  return 0.2 * dth * dth / std::max(dmax, 1e-300);
}

// ---------------------------------------------------------------------------
// Single explicit step, rho += dt F W / phi, optionally through the midpoint.
// Returns the updated shape; dt_used receives the CFL-clamped step.

inline ClosedCurve curve_flow_step(const ClosedCurve& c,
                                   const CurveGeometry& g,
                                   const std::vector<double>& F,
                                   const FlowSpec& spec, double dt,
                                   long step_index = 0) {
  const int N = g.n();
  auto advance = [&](const std::vector<double>& rho, const CurveGeometry& gg,
                     const std::vector<double>& FF, double h) {
    std::vector<double> out(N);
    for (int i = 0; i < N; ++i)
      out[i] = rho[i] + h * FF[i] * gg.W[i] / gg.phi[i];
    return out;
  };
  try {
    if (!spec.midpoint) return make_closed_curve(c.space, advance(c.rho, g, F, dt));
    const auto half = make_closed_curve(c.space, advance(c.rho, g, F, 0.5 * dt));
    const auto gh = curve_geometry(half);
    const auto Fh = curve_speed(gh, spec);
    return make_closed_curve(c.space, advance(c.rho, gh, Fh, dt));
  } catch (const std::exception& e) {
    throw FlowError(step_index, e.what());
  }
}

inline AxisymShape axisym_flow_step(const AxisymShape& s,
                                    const AxisymGeometry& g,
                                    const std::vector<double>& F,
                                    const FlowSpec& spec, double dt,
                                    long step_index = 0) {
  const int m = g.samples();
  auto advance = [&](const std::vector<double>& rho, const AxisymGeometry& gg,
                     const std::vector<double>& FF, double h) {
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j)
      out[j] = rho[j] + h * FF[j] * gg.W[j] / gg.phi[j];
    return out;
  };
  try {
    if (!spec.midpoint)
      return make_axisym_shape(s.space, s.n, advance(s.rho, g, F, dt));
    const auto half =
        make_axisym_shape(s.space, s.n, advance(s.rho, g, F, 0.5 * dt));
    const auto gh = axisym_geometry(half);
    const auto Fh = axisym_speed(gh, spec);
    return make_axisym_shape(s.space, s.n, advance(s.rho, gh, Fh, dt));
  } catch (const std::exception& e) {
    throw FlowError(step_index, e.what());
  }
}

// ---------------------------------------------------------------------------
// Monitors

enum class Claim { None, Nonincreasing, Nondecreasing, Constant };

inline const char* claim_name(Claim c) {
  switch (c) {
    case Claim::Nonincreasing: return "nonincreasing";
    case Claim::Nondecreasing: return "nondecreasing";
    case Claim::Constant: return "constant";
    default: return "none";
  }
}

struct MonitorTrack {
  std::string name;
  Claim claim = Claim::None;
  std::vector<double> values;
  double max_violation = 0.0;  // worst per-step excess beyond the drift tolerance
  bool pass = true;
};

struct MonitorSeries {
  std::vector<double> t;
  std::vector<double> maxF;
  std::vector<MonitorTrack> tracks;
  long steps = 0;
  bool converged = false;       // stationary or roundness target met
  std::string stop_reason;      // "stationary" | "roundness" | "max_steps"
  double drift_tol = 1e-7;      // relative, per step
};

// pass iff every step respects the claim within drift_tol * |previous value|,
// plus an absolute floor of 1e-12 * (1 + series peak): functionals that decay
// to zero (isoperimetric defect, say) are differences of O(peak) quantities,
// so their step-to-step noise is absolute, not relative to the vanishing value.
inline void attach_verdicts(MonitorSeries& s) {
  for (auto& tr : s.tracks) {
    tr.max_violation = 0.0;
    if (tr.claim == Claim::None) {
      tr.pass = true;
      continue;
    }
    double peak = 0.0;
    for (double v : tr.values) peak = std::max(peak, std::abs(v));
    const double floor = 1e-12 * (1.0 + peak);
    for (size_t i = 1; i < tr.values.size(); ++i) {
      const double prev = tr.values[i - 1], cur = tr.values[i];
      const double tol = s.drift_tol * std::abs(prev) + floor;
      double excess = 0.0;
      switch (tr.claim) {
        case Claim::Nonincreasing: excess = (cur - prev) - tol; break;
        case Claim::Nondecreasing: excess = (prev - cur) - tol; break;
        case Claim::Constant: excess = std::abs(cur - prev) - tol; break;
        default: break;
      }
      tr.max_violation = std::max(tr.max_violation, excess);
    }
    tr.pass = tr.max_violation <= 0.0;
  }
}

// Claims the theorems make for each flow; anything else is recorded unclaimed.
inline Claim default_claim(FlowKind flow, const std::string& name, int k) {
  switch (flow) {
    case FlowKind::CurveLp:
      if (name == "length") return Claim::Constant;
      if (name == "weighted2d") return Claim::Nonincreasing;
      if (name == "isoperimetric2d") return Claim::Nonincreasing;
      if (name == "area") return Claim::Nondecreasing;  // dA/dt = HK gap >= 0
      break;
    case FlowKind::ImcfK:
      if (name.rfind("W_", 0) == 0) {
        const int l = std::stoi(name.substr(2));
        if (l <= k - 1) return Claim::Nondecreasing;
      }
      if (name == "weightedRn") return Claim::Nonincreasing;
      break;
    case FlowKind::HypMean:
      if (name == "area") return Claim::Constant;
      if (name == "weightedH") return Claim::Nonincreasing;
      break;
    case FlowKind::SphMean:
      if (name == "sphPhiVol") return Claim::Nondecreasing;
      if (name == "weightedH") return Claim::Nonincreasing;
      break;
  }
  return Claim::None;
}

inline std::vector<std::string> default_monitors(FlowKind flow, int k) {
  switch (flow) {
    case FlowKind::CurveLp:
      return {"length", "area", "weighted2d", "isoperimetric2d"};
    case FlowKind::ImcfK: {
      std::vector<std::string> m;
      for (int l = -1; l <= k - 1; ++l) m.push_back("W_" + std::to_string(l));
      m.push_back("weightedRn");
      return m;
    }
    case FlowKind::HypMean:
      return {"area", "weightedH"};
    default:
      return {"sphPhiVol", "weightedH"};
  }
}

inline double heintze_karcher_gap(const CurveGeometry& g) {
  return heintze_karcher_gap_2d(g);
}
inline double heintze_karcher_gap(const AxisymGeometry& g) {
  return hk_gap_axisym(g);
}

namespace detail {

inline double roundness(const std::vector<double>& rho) {
  const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
  return *hi - *lo;
}

inline double curve_monitor(const ClosedCurve& c, const CurveGeometry& g,
                            const std::string& id, const Weight& w,
                            const FlowSpec& spec) {
  (void)spec;
  if (id == "length") return g.L;
  if (id == "area") return g.A;
  if (id == "weighted2d")
    return weighted_kappa_integral(g, w) + Ag_area_fast(g, w);
  if (id == "isoperimetric2d")
    return g.L * g.L - 4.0 * kPi * g.A + c.space.K * g.A * g.A;
  if (id == "hkGap") return heintze_karcher_gap_2d(g);
  if (id == "roundness") return roundness(c.rho);
  throw std::invalid_argument("unknown 2D monitor '" + id + "'");
}

inline double axisym_monitor(const AxisymShape& s, const AxisymGeometry& g,
                             const std::string& id, const Weight& w,
                             const FlowSpec& spec,
                             const CumulativeAntiderivative* ag_table) {
  if (id.rfind("W_", 0) == 0)
    return quermassintegral(g, std::stoi(id.substr(2)));
  if (id == "area") return g.area;
  if (id == "volume") return g.volume;
  if (id == "weightedRn") return weighted_sigma_integral(g, w, spec.k);
  if (id == "weightedH") {
    const double ag = ag_table ? Ag_volume_fast(s, *ag_table) : Ag_volume(s, w);
    return weighted_sigma_integral(g, w, 1) + (s.n - 1) * ag;
  }
  if (id == "sphPhiVol") return phi_prime_volume(s);
  if (id == "hkGap") return hk_gap_axisym(g);
  if (id == "roundness") return roundness(s.rho);
  throw std::invalid_argument("unknown axisym monitor '" + id + "'");
}

}  // namespace detail

// Single-shot functional evaluation (computes geometry on the spot).
inline double monitor_value(const ClosedCurve& c, const std::string& id,
                            const Weight& w, const FlowSpec& spec = {}) {
  return detail::curve_monitor(c, curve_geometry(c), id, w, spec);
}
inline double monitor_value(const AxisymShape& s, const std::string& id,
                            const Weight& w, const FlowSpec& spec = {}) {
  return detail::axisym_monitor(s, axisym_geometry(s), id, w, spec, nullptr);
}

// ---------------------------------------------------------------------------
// Runs. The series records every committed state, including the initial and
// terminal shapes; verdicts are attached before returning.

struct CurveRun {
  MonitorSeries series;
  ClosedCurve final_shape;
};

struct AxisymRun {
  MonitorSeries series;
  AxisymShape final_shape;
};

inline CurveRun run_curve_flow(const ClosedCurve& c0, const FlowSpec& spec,
                               const std::vector<std::string>& monitors,
                               const Weight& w) {
  check_flow_space(c0.space, 2, spec);
  MonitorSeries series;
  for (const auto& name : monitors)
    series.tracks.push_back(
        {name, default_claim(spec.flow, name, spec.k), {}, 0.0, true});

  ClosedCurve c = c0;
  double t = 0.0;
  long step = 0;
  while (true) {
    CurveGeometry g;
    std::vector<double> F;
    try {
      g = curve_geometry(c);
      F = curve_speed(g, spec);
    } catch (const std::exception& e) {
      throw FlowError(step, e.what());
    }
    double fmax = 0.0, rmax = 0.0;
    for (int i = 0; i < g.n(); ++i) {
      fmax = std::max(fmax, std::abs(F[i]));
      rmax = std::max(rmax, c.rho[i]);
    }
    series.t.push_back(t);
    series.maxF.push_back(fmax);
    for (auto& tr : series.tracks)
      tr.values.push_back(detail::curve_monitor(c, g, tr.name, w, spec));

    if (fmax <= spec.stop_tol * rmax) {
      series.converged = true;
      series.stop_reason = "stationary";
      break;
    }
    if (spec.stop_roundness > 0.0 &&
        detail::roundness(c.rho) <= spec.stop_roundness) {
      series.converged = true;
      series.stop_reason = "roundness";
      break;
    }
    if (step >= spec.max_steps) {
      series.stop_reason = "max_steps";
      break;
    }
    const double dt = std::min(spec.dt, curve_dt_bound(g, spec));
    c = curve_flow_step(c, g, F, spec, dt, step);
    t += dt;
    ++step;
  }
  series.steps = step;
  attach_verdicts(series);
  return {std::move(series), std::move(c)};
}

inline AxisymRun run_axisym_flow(const AxisymShape& s0, const FlowSpec& spec,
                                 const std::vector<std::string>& monitors,
                                 const Weight& w) {
  check_flow_space(s0.space, s0.n, spec);
  MonitorSeries series;
  bool needs_ag = false;
  for (const auto& name : monitors) {
    series.tracks.push_back(
        {name, default_claim(spec.flow, name, spec.k), {}, 0.0, true});
    needs_ag = needs_ag || name == "weightedH";
  }

  // One radial antiderivative table serves the whole run: the A_g integrand
  // depends only on r, and the monotone functionals keep rho bounded.
  double r_hi = 0.0;
  for (double r : s0.rho) r_hi = std::max(r_hi, r);
  r_hi = std::min(2.5 * r_hi + 0.5, 0.999 * s0.space.convex_r_max());
  CumulativeAntiderivative ag_table =
      needs_ag ? make_Ag_radial_table(s0.space, w, s0.n, r_hi)
               : CumulativeAntiderivative([](double) { return 0.0; }, 1.0, 8);

  AxisymShape s = s0;
  double t = 0.0;
  long step = 0;
  while (true) {
    AxisymGeometry g;
    std::vector<double> F;
    try {
      g = axisym_geometry(s);
      F = axisym_speed(g, spec);
    } catch (const std::exception& e) {
      throw FlowError(step, e.what());
    }
    double fmax = 0.0, rmax = 0.0;
    for (int j = 0; j < g.samples(); ++j) {
      fmax = std::max(fmax, std::abs(F[j]));
      rmax = std::max(rmax, s.rho[j]);
    }
    series.t.push_back(t);
    series.maxF.push_back(fmax);
    try {
      for (auto& tr : series.tracks)
        tr.values.push_back(detail::axisym_monitor(
            s, g, tr.name, w, spec, needs_ag ? &ag_table : nullptr));
    } catch (const std::exception& e) {
      throw FlowError(step, e.what());
    }

    if (fmax <= spec.stop_tol * rmax) {
      series.converged = true;
      series.stop_reason = "stationary";
      break;
    }
    if (spec.stop_roundness > 0.0 &&
        detail::roundness(s.rho) <= spec.stop_roundness) {
      series.converged = true;
      series.stop_reason = "roundness";
      break;
    }
    if (step >= spec.max_steps) {
      series.stop_reason = "max_steps";
      break;
    }
    const double dt = std::min(spec.dt, axisym_dt_bound(g, spec));
    s = axisym_flow_step(s, g, F, spec, dt, step);
    t += dt;
    ++step;
  }
  series.steps = step;
  attach_verdicts(series);
  return {std::move(series), std::move(s)};
}

}  // namespace geomflow
