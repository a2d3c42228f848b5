#pragma once

// Generalized eigenproblem -Delta f = lambda H_k f on discretized convex
// curves and surfaces of revolution, and the sharp upper bound on its first
// nonzero eigenvalue obtained from the three-term curvature comparison.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomflow/inequalities.hpp"

namespace geomflow {

// Verdict tolerance for eigenvalue comparisons. lambda_1 carries the O(h^2)
// bias of the second-order stencils, which dominates the quadrature error in
// the bound's integrals; sphere equality is only detectable up to that bias.
inline constexpr double kEigenTol = 1e-4;

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending; zero mode first when present
  std::vector<int> modes;           // Fourier index per entry; -1 for curves
  std::vector<double> residuals;    // ||C y - lambda y||_2, unit Ritz vectors
  int size = 0;                     // 1D grid size backing the solve
};

// First entry safely above the zero mode.
inline double lambda1(const SpectrumResult& s) {
  const double top =
      s.eigenvalues.empty() ? 0.0 : std::abs(s.eigenvalues.back());
  for (double l : s.eigenvalues)
    if (l > 1e-7 * top) return l;
  throw std::domain_error("lambda1: no positive eigenvalue in the result");
}

namespace detail {

// A y = lambda B y with A symmetric tridiagonal (plus one periodic corner
// coupling) and B a positive diagonal.
struct SymTriPencil {
  std::vector<double> diag;
  std::vector<double> off;     // off[i] couples i and i+1
  double corner = 0.0;         // A(0, n-1); periodic problems only
  std::vector<double> mass;    // B diagonal
  bool has_zero_mode = false;  // constants span the kernel of A
};

// Tridiagonal LU with partial pivoting (dgttrf layout); stable for the
// mildly indefinite matrix left after splitting off the periodic corner as
// a rank-one update.
class TriLU {
 public:
  TriLU(std::vector<double> dl, std::vector<double> d, std::vector<double> du)
      : dl_(std::move(dl)), d_(std::move(d)), du_(std::move(du)) {
    const int n = static_cast<int>(d_.size());
    du2_.assign(std::max(0, n - 2), 0.0);
    swap_.assign(std::max(0, n - 1), 0);
    for (int i = 0; i < n - 1; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] == 0.0) throw std::runtime_error("TriLU: singular pivot");
        const double f = dl_[i] / d_[i];
        dl_[i] = f;
        d_[i + 1] -= f * du_[i];
      } else {
        swap_[i] = 1;
        const double f = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = f;
        const double t = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = t - f * d_[i + 1];
        if (i < n - 2) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -f * du_[i + 1];
        }
      }
    }
    if (d_[n - 1] == 0.0) throw std::runtime_error("TriLU: singular pivot");
  }

  void solve(std::vector<double>& b) const {
    const int n = static_cast<int>(d_.size());
    for (int i = 0; i < n - 1; ++i) {
      if (!swap_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const double t = b[i];
        b[i] = b[i + 1];
        b[i + 1] = t - dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (int i = n - 3; i >= 0; --i)
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }

 private:
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<int> swap_;
};

// Congruent operator C = B^{-1/2} A B^{-1/2} in banded storage with an O(n)
// apply of (C + delta I)^{-1}, the periodic corner restored through a
// Sherman-Morrison rank-one update over the pivoted tridiagonal LU.
class ShiftInvertOp {
 public:
  ShiftInvertOp(const SymTriPencil& p, double delta) {
    const int n = static_cast<int>(p.diag.size());
    cdiag_.resize(n);
    coff_.resize(std::max(0, n - 1));
    for (int i = 0; i < n; ++i) cdiag_[i] = p.diag[i] / p.mass[i];
    for (int i = 0; i + 1 < n; ++i)
      coff_[i] = p.off[i] / std::sqrt(p.mass[i] * p.mass[i + 1]);
    if (p.corner != 0.0)
      ccorner_ = p.corner / std::sqrt(p.mass.front() * p.mass.back());

    std::vector<double> d(cdiag_);
    for (double& v : d) v += delta;
    if (ccorner_ != 0.0) {
      // C + delta = T + w w^T with w = gamma e_0 + (corner/gamma) e_{n-1},
      // gamma = sqrt(|corner|): both end diagonals give up |corner|.
      const double a = std::abs(ccorner_);
      d.front() -= a;
      d.back() -= a;
      w_.assign(n, 0.0);
      w_[0] = std::sqrt(a);
      w_[n - 1] = ccorner_ / w_[0];
    }
    lu_.emplace(coff_, std::move(d), coff_);
    if (!w_.empty()) {
      tw_ = w_;
      lu_->solve(tw_);
      denom_ = 1.0;
      for (int i = 0; i < n; ++i) denom_ += w_[i] * tw_[i];
      if (denom_ == 0.0) throw std::runtime_error("ShiftInvertOp: breakdown");
    }
  }

  int size() const { return static_cast<int>(cdiag_.size()); }

  void mult(const double* x, double* y) const {  // y = C x
    const int n = size();
    for (int i = 0; i < n; ++i) {
      double v = cdiag_[i] * x[i];
      if (i > 0) v += coff_[i - 1] * x[i - 1];
      if (i + 1 < n) v += coff_[i] * x[i + 1];
      y[i] = v;
    }
    if (ccorner_ != 0.0) {
      y[0] += ccorner_ * x[n - 1];
      y[n - 1] += ccorner_ * x[0];
    }
  }

  void apply(const double* x, double* y) const {  // y = (C + delta)^{-1} x
    const int n = size();
    std::vector<double> b(x, x + n);
    lu_->solve(b);
    if (!w_.empty()) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w_[i] * b[i];
      const double c = s / denom_;
      for (int i = 0; i < n; ++i) b[i] -= c * tw_[i];
    }
    std::copy(b.begin(), b.end(), y);
  }

 private:
  std::vector<double> cdiag_, coff_, w_, tw_;
  double ccorner_ = 0.0, denom_ = 1.0;
  std::optional<TriLU> lu_;
};

struct EigenPairs {
  std::vector<double> lambda;
  Eigen::MatrixXd vectors;  // congruent coordinates, one column per pair
  std::vector<double> resid;
};

// Smallest `count` eigenpairs by shift-inverted subspace iteration with
// Rayleigh-Ritz extraction. An exactly known kernel (constants, present for
// periodic and Neumann problems) is deflated analytically: without that, the
// huge 1/delta amplification of the zero mode would wash the wanted
// directions out of the block within a few applies.
inline EigenPairs smallest_eigenpairs(const SymTriPencil& p, int count) {
  const int n = static_cast<int>(p.diag.size());
  if (count < 1 || count > n)
    throw std::invalid_argument("smallest_eigenpairs: bad count");
  for (double m : p.mass)
    if (!(m > 0.0))
      throw std::domain_error("smallest_eigenpairs: mass must be positive");

  double gersh = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = std::abs(p.diag[i]) / p.mass[i];
    if (i > 0) row += std::abs(p.off[i - 1]) / std::sqrt(p.mass[i - 1] * p.mass[i]);
    if (i + 1 < n) row += std::abs(p.off[i]) / std::sqrt(p.mass[i] * p.mass[i + 1]);
    gersh = std::max(gersh, row);
  }
  if (p.corner != 0.0)
    gersh += std::abs(p.corner) / std::sqrt(p.mass.front() * p.mass.back());
  const double delta = 1e-8 * gersh + 1e-300;
  ShiftInvertOp op(p, delta);

  EigenPairs out;
  Eigen::VectorXd v0;
  int want = count;
  if (p.has_zero_mode) {
    v0.resize(n);
    for (int i = 0; i < n; ++i) v0[i] = std::sqrt(p.mass[i]);
    v0.normalize();
    Eigen::VectorXd cv0(n);
    op.mult(v0.data(), cv0.data());
    const double l0 = v0.dot(cv0);
    out.lambda.push_back(l0);
    out.resid.push_back((cv0 - l0 * v0).norm());
    want = count - 1;
  }

  Eigen::MatrixXd X;
  if (want > 0) {
    const int avail = n - (p.has_zero_mode ? 1 : 0);
    const int block = std::min(avail, want + 5);
    std::mt19937_64 rng(0x8f1c9a37u);
    std::normal_distribution<double> gauss;
    X.resize(n, block);
    for (int c = 0; c < block; ++c)
      for (int i = 0; i < n; ++i) X(i, c) = gauss(rng);
    auto deflate = [&](Eigen::MatrixXd& Z) {
      if (p.has_zero_mode) Z -= v0 * (v0.transpose() * Z);
    };
    deflate(X);

    const double tol_res = 1e-12 * gersh + 1e-300;
    Eigen::VectorXd ritz;
    bool done = false;
    for (int iter = 0; iter < 500 && !done; ++iter) {
      Eigen::MatrixXd Y(n, block);
      for (int c = 0; c < block; ++c)
        op.apply(X.col(c).data(), Y.col(c).data());
      deflate(Y);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
      Eigen::MatrixXd Q =
          qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
      Eigen::MatrixXd CQ(n, block);
      for (int c = 0; c < block; ++c)
        op.mult(Q.col(c).data(), CQ.col(c).data());
      Eigen::MatrixXd S = Q.transpose() * CQ;
      S = (0.5 * (S + S.transpose())).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      ritz = es.eigenvalues();
      X = Q * es.eigenvectors();
      const Eigen::MatrixXd CX = CQ * es.eigenvectors();
      done = true;
      for (int c = 0; c < want && done; ++c)
        done = (CX.col(c) - ritz[c] * X.col(c)).norm() <= tol_res;
    }
    if (!done)
      throw std::runtime_error("smallest_eigenpairs: no convergence");
    for (int c = 0; c < want; ++c) {
      Eigen::VectorXd cx(n);
      op.mult(X.col(c).data(), cx.data());
      out.lambda.push_back(ritz[c]);
      out.resid.push_back((cx - ritz[c] * X.col(c)).norm());
    }
  }

  out.vectors.resize(n, count);
  int col = 0;
  if (p.has_zero_mode) out.vectors.col(col++) = v0;
  for (int c = 0; c < want; ++c) out.vectors.col(col++) = X.col(c);
  return out;
}

// Uniform-arclength resampling of the curvature: fit W and kappa with the
// trigonometric interpolant, invert the spectral arclength antiderivative by
// safeguarded Newton, and evaluate kappa at the recovered angles.
struct CurveSampling {
  SymTriPencil pencil;
  double h = 0.0;
};

inline CurveSampling curve_pencil(const CurveGeometry& g) {
  const int N = g.n();
  for (double k : g.kappa)
    if (!(k > 0.0))
      throw std::domain_error("curve_spectrum: curvature must stay positive");
  const TrigSeries Wfit(g.W), Kfit(g.kappa);
  auto arc = [&](double th) { return Wfit.antiderivative(th); };
  const double L = arc(2.0 * kPi);
  if (!(L > 0.0))
    throw std::runtime_error("curve_spectrum: arclength resampling failed");
  const double hs = L / N;

  std::vector<double> ks(N);
  ks[0] = Kfit(0.0);
  double theta = 0.0;
  for (int i = 1; i < N; ++i) {
    const double target = hs * i;
    double t = theta + hs / std::max(Wfit(theta), 1e-12);
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
      if (!(t > theta) || !(t < 2.0 * kPi)) break;
      const double w = Wfit(t);
      if (!(w > 0.0)) break;
      const double step = (arc(t) - target) / w;
      t -= step;
      if (std::abs(step) <= 1e-13) {
        ok = true;
        break;
      }
    }
    if (!ok) t = invert_monotone(arc, target, theta, 2.0 * kPi);
    theta = t;
    ks[i] = Kfit(t);
    if (!(ks[i] > 0.0))
      throw std::domain_error("curve_spectrum: curvature must stay positive");
  }

  CurveSampling cs;
  cs.h = hs;
  cs.pencil.diag.assign(N, 2.0 / (hs * hs));
  cs.pencil.off.assign(N - 1, -1.0 / (hs * hs));
  cs.pencil.corner = -1.0 / (hs * hs);
  cs.pencil.mass = std::move(ks);
  cs.pencil.has_zero_mode = true;
  return cs;
}

// Fourier-mode restriction of -Delta f = lambda H_k f to f = F(theta)e^{im
// phi} on a surface of revolution: -(p F')' + q F = lambda w F with
//   p = phi sin(theta) / W,  q = m^2 W / (phi sin(theta)),  w = H_k W phi
//   sin(theta),
// assembled by finite volumes on the uniform theta grid. m = 0 keeps the
// pole nodes (natural zero flux, half cells); m >= 1 excludes them
// (eigenfunctions vanish like sin^m theta).
inline SymTriPencil axisym_pencil(const AxisymGeometry& g, int k, int m) {
  const int M = g.samples() - 1;
  const double h = g.h();
  const double norm = binom(g.n - 1, k);
  std::vector<double> pnode(M + 1), vnode(M + 1);
  for (int j = 0; j <= M; ++j) {
    const double sth = std::sin(h * j);
    pnode[j] = g.phi[j] * sth / g.W[j];
    vnode[j] = g.sigma(k, j) / norm * g.W[j] * g.phi[j] * sth;
  }
  std::vector<double> pf(M), vf(M);
  for (int j = 0; j < M; ++j) {
    pf[j] = 0.5 * (pnode[j] + pnode[j + 1]);
    vf[j] = 0.5 * (vnode[j] + vnode[j + 1]);
  }

  SymTriPencil p;
  if (m == 0) {
    p.diag.assign(M + 1, 0.0);
    p.off.assign(M, 0.0);
    p.mass.assign(M + 1, 0.0);
    for (int j = 0; j <= M; ++j) {
      const double left = j > 0 ? pf[j - 1] : 0.0;
      const double right = j < M ? pf[j] : 0.0;
      p.diag[j] = (left + right) / h;
      if (j < M) p.off[j] = -pf[j] / h;
      if (j == 0)
        p.mass[j] = vf[0] * h / 4.0;  // integral over [0, h/2], v(0) = 0
      else if (j == M)
        p.mass[j] = vf[M - 1] * h / 4.0;
      else
        p.mass[j] = vnode[j] * h;
    }
    p.has_zero_mode = true;
  } else {
    p.diag.assign(M - 1, 0.0);
    p.off.assign(M - 2, 0.0);
    p.mass.assign(M - 1, 0.0);
    for (int j = 1; j < M; ++j) {
      const double q = m * m * g.W[j] / (g.phi[j] * std::sin(h * j));
      p.diag[j - 1] = (pf[j - 1] + pf[j]) / h + q * h;
      if (j + 1 < M) p.off[j - 1] = -pf[j] / h;
      p.mass[j - 1] = vnode[j] * h;
    }
  }
  return p;
}

}  // namespace detail

inline SpectrumResult curve_spectrum(const CurveGeometry& g, int count) {
  if (count < 2)
    throw std::invalid_argument("curve_spectrum: count >= 2 required");
  auto cs = detail::curve_pencil(g);
  const int want = std::min<int>(count, cs.pencil.diag.size());
  const auto pairs = detail::smallest_eigenpairs(cs.pencil, want);
  SpectrumResult out;
  out.size = g.n();
  out.eigenvalues = pairs.lambda;
  out.residuals = pairs.resid;
  out.modes.assign(out.eigenvalues.size(), -1);
  return out;
}

inline SpectrumResult axisym_spectrum(const AxisymGeometry& g, int k,
                                      int max_mode = 3, int count = 6) {
  if (g.n != 3)
    throw std::invalid_argument("axisym_spectrum: eigen-solving is n = 3 only");
  if (k < 1 || k > g.n - 1)
    throw std::invalid_argument("axisym_spectrum: 1 <= k <= n-1 required");
  if (max_mode < 1)
    throw std::invalid_argument("axisym_spectrum: max_mode >= 1 required");
  if (count < 2)
    throw std::invalid_argument("axisym_spectrum: count >= 2 required");
  if (!convexity_class(g).k_convex(k))
    throw std::domain_error("axisym_spectrum: curvature cone violation");

  struct Entry {
    double lambda, resid;
    int mode;
  };
  std::vector<Entry> merged;
  for (int m = 0; m <= max_mode; ++m) {
    const auto p = detail::axisym_pencil(g, k, m);
    const int want = std::min<int>(count, p.diag.size());
    const auto pairs = detail::smallest_eigenpairs(p, want);
    for (std::size_t i = 0; i < pairs.lambda.size(); ++i)
      merged.push_back({pairs.lambda[i], pairs.resid[i], m});
  }
  std::sort(merged.begin(), merged.end(),
            [](const Entry& a, const Entry& b) { return a.lambda < b.lambda; });

  SpectrumResult out;
  out.size = g.samples();
  for (int i = 0; i < count && i < static_cast<int>(merged.size()); ++i) {
    out.eigenvalues.push_back(merged[i].lambda);
    out.residuals.push_back(merged[i].resid);
    out.modes.push_back(merged[i].mode);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Upper bound on lambda_1: (n-1)|Sigma| / (2 * bracket) with
//   bracket = rhs of the three-term comparison - k/(n-k+1) int H_{k-2} dmu,
// positive whenever the comparison holds strictly against its middle term.

inline double eigen_bound(const AxisymGeometry& g, int k) {
  const int n = g.n;
  if (g.space.K != 0)
    throw std::invalid_argument("eigen_bound: flat space only");
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("eigen_bound: 1 <= k <= n-1 required");
  if (!convexity_class(g).k_convex(k))
    throw std::domain_error("eigen_bound: k-convexity violated");
  const auto ci = detail::curvature_integrals(g, k);
  const double bracket =
      detail::three_term_rhs(n, k, ci.norming) - k / (n - k + 1.0) * ci.lower;
  if (!(bracket > 0.0))
    throw std::domain_error("eigen_bound: nonpositive comparison bracket");
  return 0.5 * (n - 1) * g.area / bracket;
}

// n = 2: reduces to pi L / (L^2 - 2 pi A).
inline double eigen_bound(const CurveGeometry& g) {
  if (g.space.K != 0)
    throw std::invalid_argument("eigen_bound: flat space only");
  if (!is_convex(g)) throw std::domain_error("eigen_bound: convexity violated");
  const auto ci = detail::curvature_integrals(g);
  const double bracket = detail::three_term_rhs(2, 1, ci.norming) - 0.5 * ci.lower;
  if (!(bracket > 0.0))
    throw std::domain_error("eigen_bound: nonpositive comparison bracket");
  return 0.5 * g.L / bracket;
}

namespace detail {

// H_k-weighted center of mass, int H_k x dmu / int H_k dmu. The bound's
// derivation normalizes it to the origin; its ingredients are translation
// invariant in exact arithmetic (int u dmu = n|Omega| regardless of origin),
// so recentering only pins down the discrete evaluation.
inline std::array<double, 2> hk_center(const CurveGeometry& g) {
  return weighted_center(g, g.kappa);  // H_1 = kappa when n = 2
}

inline double hk_center_axis(const AxisymGeometry& g, int k) {
  if (g.space.K != 0)
    throw std::invalid_argument("hk_center_axis: flat case only");
  const double norm = binom(g.n - 1, k);
  double sz = 0.0, sw = 0.0;
  for (int j = 0; j < g.samples(); ++j) {
    const double hk = g.sigma(k, j) / norm;
    sz += hk * g.rho[j] * std::cos(g.h() * j) * g.dmu[j];
    sw += hk * g.dmu[j];
  }
  if (!(sw > 0.0)) throw std::domain_error("hk_center_axis: zero total weight");
  return sz / sw;
}

}  // namespace detail

inline InequalityReport verify_eigen_bound(const CurveGeometry& g) {
  if (g.space.K != 0)
    throw std::invalid_argument("verify_eigen_bound: flat space only");
  if (!is_convex(g))
    throw std::domain_error("verify_eigen_bound: convexity violated");
  const auto c = detail::hk_center(g);
  const auto shifted =
      curve_geometry(recenter_curve(make_closed_curve(g.space, g.rho), c[0], c[1]));
  const double bound = eigen_bound(shifted);
  const double l1 = lambda1(curve_spectrum(shifted, 4));
  char extra[96];
  std::snprintf(extra, sizeof extra, "k=1 recenter=(%.3e,%.3e)", c[0], c[1]);
  return detail::make_report("eigen-bound",
                             detail::describe(g.space, 2, g.n(), extra), bound,
                             l1, kEigenTol, hash_doubles(g.rho));
}

inline InequalityReport verify_eigen_bound(const AxisymGeometry& g, int k) {
  if (g.space.K != 0)
    throw std::invalid_argument("verify_eigen_bound: flat space only");
  if (g.n != 3)
    throw std::invalid_argument("verify_eigen_bound: n = 3 only");
  if (!convexity_class(g).k_convex(k))
    throw std::domain_error("verify_eigen_bound: k-convexity violated");
  const double c = detail::hk_center_axis(g, k);
  const auto shifted = axisym_geometry(
      translate_axisym(AxisymShape{g.space, g.n, g.rho}, -c));
  const double bound = eigen_bound(shifted, k);
  const double l1 = lambda1(axisym_spectrum(shifted, k, 3, 4));
  char extra[96];
  std::snprintf(extra, sizeof extra, "k=%d recenter=%.3e", k, c);
  return detail::make_report("eigen-bound",
                             detail::describe(g.space, 3, g.samples(), extra),
                             bound, l1, kEigenTol, hash_doubles(g.rho));
}

}  // namespace geomflow
