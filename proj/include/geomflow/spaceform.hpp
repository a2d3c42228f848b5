#pragma once

// Simply connected space forms M^n(K), K in {-1, 0, +1}, in polar coordinates
// about a fixed origin: metric dr^2 + phi(r)^2 g_{S^{n-1}} with warp
//   phi = sinh r | r | sin r,   Phi(r) = \int_0^r phi,   phi'' = -K phi.
// The conformal vector field V = phi d_r satisfies <V, nu> = u (support
// function) on hypersurfaces; weighted functionals integrate a convex,
// nondecreasing weight g composed with Phi.

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomflow/numerics.hpp"

namespace geomflow {

struct SpaceForm {
  int K = 0;  // sectional curvature, one of -1, 0, +1

  double r_max() const {
    return K == 1 ? kPi : std::numeric_limits<double>::infinity();
  }
  // Geodesic balls are convex up to this radius (hemisphere when K = 1).
  double convex_r_max() const {
    return K == 1 ? 0.5 * kPi : std::numeric_limits<double>::infinity();
  }

  double phi(double r) const {
    return K == 0 ? r : (K == 1 ? std::sin(r) : std::sinh(r));
  }
  double dphi(double r) const {
    return K == 0 ? 1.0 : (K == 1 ? std::cos(r) : std::cosh(r));
  }
  double Phi(double r) const {
    if (K == 0) return 0.5 * r * r;
    if (K == 1) return 1.0 - std::cos(r);
    return std::cosh(r) - 1.0;
  }
  // Inverse of phi on the principal branch ([0, pi/2] when K = 1).
  double phi_inv(double x) const {
    if (!(x >= 0.0)) throw std::domain_error("phi_inv: negative argument");
    if (K == 0) return x;
    if (K == -1) return std::asinh(x);
    if (x > 1.0 + 1e-12) throw std::domain_error("phi_inv: x > 1 for K = 1");
    return std::asin(std::min(x, 1.0));
  }
};

inline SpaceForm make_space_form(int K) {
  if (K != -1 && K != 0 && K != 1)
    throw std::invalid_argument("make_space_form: K must be -1, 0 or +1");
  return SpaceForm{K};
}

// Area of the unit m-sphere: omega_m = 2 pi^{(m+1)/2} / Gamma((m+1)/2).
inline double unit_sphere_area(int m) {
  if (m < 0) throw std::invalid_argument("unit_sphere_area: m < 0");
  return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

// ---------------------------------------------------------------------------
// Weight catalog. Every weight is smooth, nonnegative, nondecreasing and
// convex on its validity interval [0, hi]; g(0) = 0 is accepted but flagged.

enum class WeightKind {
  Constant,       // c
  Monomial,       // c x^p, p >= 1
  Poly,           // nonnegative-coefficient polynomial
  Exp,            // e^x
  ExpSq,          // e^{x^2}
  Sinh,           // sinh x
  Cosh,           // cosh x
  CoshM1,         // cosh x - 1
  RationalMinus,  // x^p / (1 - x), integer p >= 1, needs hi < 1
  RationalPlus,   // x^p / (1 + x), integer p >= 2
};

class Weight {
 public:
  Weight(WeightKind kind, std::vector<double> params, double hi)
      : kind_(kind), params_(std::move(params)), hi_(hi) {
    validate();
  }

  WeightKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double hi() const { return hi_; }
  bool positivity_note() const { return positivity_note_; }
  const std::string& id() const { return id_; }

  double g(double x) const {
    check(x);
    switch (kind_) {
      case WeightKind::Constant: return params_[0];
      case WeightKind::Monomial: return params_[1] * std::pow(x, params_[0]);
      case WeightKind::Poly: {
        double s = 0.0;
        for (size_t j = params_.size(); j-- > 0;) s = s * x + params_[j];
        return s;
      }
      case WeightKind::Exp: return std::exp(x);
      case WeightKind::ExpSq: return std::exp(x * x);
      case WeightKind::Sinh: return std::sinh(x);
      case WeightKind::Cosh: return std::cosh(x);
      case WeightKind::CoshM1: return std::cosh(x) - 1.0;
      case WeightKind::RationalMinus:
        return std::pow(x, params_[0]) / (1.0 - x);
      case WeightKind::RationalPlus:
        return std::pow(x, params_[0]) / (1.0 + x);
    }
    return 0.0;
  }

  double dg(double x) const {
    check(x);
    switch (kind_) {
      case WeightKind::Constant: return 0.0;
      case WeightKind::Monomial: {
        const double p = params_[0];
        return params_[1] * p * std::pow(x, p - 1.0);
      }
      case WeightKind::Poly: {
        double s = 0.0;
        for (size_t j = params_.size(); j-- > 1;) s = s * x + j * params_[j];
        return s;
      }
      case WeightKind::Exp: return std::exp(x);
      case WeightKind::ExpSq: return 2.0 * x * std::exp(x * x);
      case WeightKind::Sinh: return std::cosh(x);
      case WeightKind::Cosh: return std::sinh(x);
      case WeightKind::CoshM1: return std::sinh(x);
      case WeightKind::RationalMinus: {
        const double p = params_[0], q = 1.0 - x;
        return p * std::pow(x, p - 1.0) / q + std::pow(x, p) / (q * q);
      }
      case WeightKind::RationalPlus: {
        const double p = params_[0], q = 1.0 + x;
        return p * std::pow(x, p - 1.0) / q - std::pow(x, p) / (q * q);
      }
    }
    return 0.0;
  }

  double d2g(double x) const {
    check(x);
    switch (kind_) {
      case WeightKind::Constant: return 0.0;
      case WeightKind::Monomial: {
        const double p = params_[0];
        if (p == 1.0) return 0.0;
        return params_[1] * p * (p - 1.0) * std::pow(x, p - 2.0);
      }
      case WeightKind::Poly: {
        double s = 0.0;
        for (size_t j = params_.size(); j-- > 2;)
          s = s * x + static_cast<double>(j) * (j - 1.0) * params_[j];
        return s;
      }
      case WeightKind::Exp: return std::exp(x);
      case WeightKind::ExpSq:
        return (2.0 + 4.0 * x * x) * std::exp(x * x);
      case WeightKind::Sinh: return std::sinh(x);
      case WeightKind::Cosh: return std::cosh(x);
      case WeightKind::CoshM1: return std::cosh(x);
      case WeightKind::RationalMinus: {
        const double p = params_[0], q = 1.0 - x;
        return p * (p - 1.0) * std::pow(x, p - 2.0) / q +
               2.0 * p * std::pow(x, p - 1.0) / (q * q) +
               2.0 * std::pow(x, p) / (q * q * q);
      }
      case WeightKind::RationalPlus: {
        const double p = params_[0], q = 1.0 + x;
        return p * (p - 1.0) * std::pow(x, p - 2.0) / q -
               2.0 * p * std::pow(x, p - 1.0) / (q * q) +
               2.0 * std::pow(x, p) / (q * q * q);
      }
    }
    return 0.0;
  }

  // G(x) = \int_0^x g, with G(0) = 0.
  double G(double x) const {
    check(x);
    switch (kind_) {
      case WeightKind::Constant: return params_[0] * x;
      case WeightKind::Monomial: {
        const double p = params_[0];
        return params_[1] * std::pow(x, p + 1.0) / (p + 1.0);
      }
      case WeightKind::Poly: {
        double s = 0.0;
        for (size_t j = params_.size(); j-- > 0;)
          s = (s + params_[j] / (j + 1.0)) * x;
        return s;
      }
      case WeightKind::Exp: return std::expm1(x);
      case WeightKind::ExpSq: {
        // All-positive series \sum_k x^{2k+1} / (k! (2k+1)).
        double term = x, sum = x;
        const double x2 = x * x;
        for (int k = 1; k < 400; ++k) {
          term *= x2 / k;
          const double add = term / (2 * k + 1);
          sum += add;
          if (add < 1e-17 * sum) break;
        }
        return sum;
      }
      case WeightKind::Sinh: return std::cosh(x) - 1.0;
      case WeightKind::Cosh: return std::sinh(x);
      case WeightKind::CoshM1: return std::sinh(x) - x;
      case WeightKind::RationalMinus: {
        // x^p/(1-x) = -(1 + x + ... + x^{p-1}) + 1/(1-x).
        const int p = static_cast<int>(params_[0]);
        double s = -std::log1p(-x);
        for (int j = 0; j < p; ++j) s -= std::pow(x, j + 1.0) / (j + 1.0);
        return s;
      }
      case WeightKind::RationalPlus: {
        // x^p/(1+x) = sum_{j=0}^{p-1} (-1)^{p-1-j} x^j + (-1)^p/(1+x).
        const int p = static_cast<int>(params_[0]);
        double s = (p % 2 == 0) ? std::log1p(x) : -std::log1p(x);
        for (int j = 0; j < p; ++j) {
          const double sign = ((p - 1 - j) % 2 == 0) ? 1.0 : -1.0;
          s += sign * std::pow(x, j + 1.0) / (j + 1.0);
        }
        return s;
      }
    }
    return 0.0;
  }

 private:
  void check(double x) const {
    if (!(x >= 0.0) || x > hi_ * (1.0 + 1e-12))
      throw std::domain_error("Weight: argument outside validity interval [0," +
                              std::to_string(hi_) + "]");
  }

  // Sampled soundness check: g >= 0 (g > 0 on the interior), g' >= 0,
  // g'' >= 0, finite values; rejects presets that violate convexity or
  // monotonicity anywhere on the declared interval.
  void validate() {
    if (!(hi_ > 0.0) || !std::isfinite(hi_))
      throw std::domain_error("Weight: validity interval must be (0, hi]");
    switch (kind_) {
      case WeightKind::Constant:
        if (params_.size() != 1 || !(params_[0] > 0.0))
          throw std::domain_error("Weight constant: needs c > 0");
        break;
      case WeightKind::Monomial:
        if (params_.size() == 1) params_.push_back(1.0);
        if (params_.size() != 2 || !(params_[0] >= 1.0) || !(params_[1] > 0.0))
          throw std::domain_error("Weight monomial: needs p >= 1, c > 0");
        break;
      case WeightKind::Poly: {
        if (params_.empty())
          throw std::domain_error("Weight poly: needs coefficients");
        bool any = false;
        for (double c : params_) {
          if (c < 0.0)
            throw std::domain_error("Weight poly: negative coefficient");
          any = any || c > 0.0;
        }
        if (!any) throw std::domain_error("Weight poly: identically zero");
        break;
      }
      case WeightKind::RationalMinus:
        if (params_.size() != 1 || params_[0] < 1.0 ||
            params_[0] != std::floor(params_[0]))
          throw std::domain_error("Weight rational-minus: integer p >= 1");
        if (hi_ >= 1.0)
          throw std::domain_error(
              "Weight rational-minus: validity interval must stay below the "
              "pole at x = 1");
        break;
      case WeightKind::RationalPlus:
        if (params_.size() != 1 || params_[0] < 2.0 ||
            params_[0] != std::floor(params_[0]))
          throw std::domain_error(
              "Weight rational-plus: integer p >= 2 (p = 1 is concave)");
        break;
      default:
        if (!params_.empty())
          throw std::domain_error("Weight: unexpected parameters");
        break;
    }
    const int samples = 1000;
    for (int i = 1; i <= samples; ++i) {
      const double x = hi_ * i / samples;
      const double v = g(x), d1 = dg(x), d2 = d2g(x);
      if (!std::isfinite(v) || std::isnan(d1) || std::isnan(d2))
        throw std::domain_error("Weight: non-finite value on interval");
      if (!(v > 0.0)) throw std::domain_error("Weight: g <= 0 on interior");
      if (d1 < -1e-14 * std::max(1.0, std::abs(v)))
        throw std::domain_error("Weight: g' < 0 on interval");
      if (d2 < -1e-14 * std::max(1.0, std::abs(v)))
        throw std::domain_error("Weight: g'' < 0 on interval");
    }
    positivity_note_ = g(0.0) == 0.0;
    id_ = format_id();
  }

  std::string format_id() const {
    auto num = [](double v) {
      char buf[32];
      if (v == std::floor(v) && std::abs(v) < 1e15)
        std::snprintf(buf, sizeof buf, "%.0f", v);
      else
        std::snprintf(buf, sizeof buf, "%.17g", v);  // id round-trips exactly
      return std::string(buf);
    };
    switch (kind_) {
      case WeightKind::Constant: return "constant:" + num(params_[0]);
      case WeightKind::Monomial:
        return params_[1] == 1.0 ? "monomial:" + num(params_[0])
                                 : "monomial:" + num(params_[0]) + ":" +
                                       num(params_[1]);
      case WeightKind::Poly: {
        std::string s = "poly";
        for (double c : params_) s += ":" + num(c);
        return s;
      }
      case WeightKind::Exp: return "exp";
      case WeightKind::ExpSq: return "expsq";
      case WeightKind::Sinh: return "sinh";
      case WeightKind::Cosh: return "cosh";
      case WeightKind::CoshM1: return "coshm1";
      case WeightKind::RationalMinus: return "rational-minus:" + num(params_[0]);
      case WeightKind::RationalPlus: return "rational-plus:" + num(params_[0]);
    }
    return "?";
  }

  WeightKind kind_;
  std::vector<double> params_;
  double hi_;
  bool positivity_note_ = false;
  std::string id_;
};

// Default validity interval: generous for entire weights, capped below the
// e^{x^2} overflow, strictly below the rational pole.
inline double default_weight_hi(WeightKind kind) {
  switch (kind) {
    case WeightKind::ExpSq: return 26.0;
    case WeightKind::RationalMinus: return 1.0 - 1e-6;
    default: return 30.0;
  }
}

inline Weight make_weight(WeightKind kind, std::vector<double> params = {},
                          double hi = 0.0) {
  if (hi == 0.0) hi = default_weight_hi(kind);
  return Weight(kind, std::move(params), hi);
}

// Parses "monomial:2", "monomial:1.5:0.95", "exp", "rational-minus:1",
// "poly:0:1:3", "constant:2", ...
inline Weight parse_weight(const std::string& spec, double hi = 0.0) {
  std::vector<std::string> tok;
  size_t pos = 0;
  while (pos <= spec.size()) {
    const size_t next = spec.find(':', pos);
    tok.push_back(spec.substr(pos, next == std::string::npos ? std::string::npos
                                                             : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  static const std::map<std::string, WeightKind> kinds = {
      {"constant", WeightKind::Constant},
      {"monomial", WeightKind::Monomial},
      {"poly", WeightKind::Poly},
      {"exp", WeightKind::Exp},
      {"expsq", WeightKind::ExpSq},
      {"sinh", WeightKind::Sinh},
      {"cosh", WeightKind::Cosh},
      {"coshm1", WeightKind::CoshM1},
      {"rational-minus", WeightKind::RationalMinus},
      {"rational-plus", WeightKind::RationalPlus},
  };
  const auto it = kinds.find(tok[0]);
  if (it == kinds.end())
    throw std::invalid_argument("parse_weight: unknown preset '" + tok[0] +
                                "'");
  std::vector<double> params;
  for (size_t i = 1; i < tok.size(); ++i) params.push_back(std::stod(tok[i]));
  return make_weight(it->second, std::move(params), hi);
}

// \int_0^r phi(s)^m ds in closed form (power-reduction recursion); the radial
// factor of ball volumes. O(m), no quadrature, safe in per-step hot paths.
inline double phi_power_integral(const SpaceForm& sf, int m, double r) {
  if (m < 0) throw std::invalid_argument("phi_power_integral: m >= 0");
  if (sf.K == 0) return std::pow(r, m + 1) / (m + 1);
  // I_m = -K phi^{m-1} phi' / m + K (m-1)/m I_{m-2}; I_0 = r, I_1 = Phi(r)
  double even = r, odd = sf.Phi(r);
  const double ph = sf.phi(r), dph = sf.dphi(r);
  if (m == 0) return even;
  if (m == 1) return odd;
  double pw = 1.0;  // phi^{j-1} for the j currently being produced
  for (int j = 2; j <= m; ++j) {
    pw *= ph;
    const double next =
        sf.K * (-pw * dph + (j - 1.0) * (j % 2 ? odd : even)) / j;
    if (j % 2) odd = next; else even = next;
  }
  return m % 2 ? odd : even;
}

// ---------------------------------------------------------------------------
// Geodesic-ball and geodesic-sphere functionals.

// A_g(B(r)) = omega_{n-1} \int_0^r (g'(Phi) phi' + K g(Phi)) phi^{n-1} ds.
inline double ball_Ag(const SpaceForm& sf, const Weight& w, int n, double r,
                      double rel_tol = 1e-10) {
  if (n < 2) throw std::invalid_argument("ball_Ag: n >= 2");
  if (!(r >= 0.0) || r >= sf.r_max())
    throw std::domain_error("ball_Ag: radius outside space form");
  const double omega = unit_sphere_area(n - 1);
  auto f = [&](double s) {
    const double Ph = sf.Phi(s);
    return (w.dg(Ph) * sf.dphi(s) + sf.K * w.g(Ph)) *
           std::pow(sf.phi(s), n - 1);
  };
  return omega * integrate(f, 0.0, r, rel_tol);
}

// Geodesic-ball volume (the g(x) = x case of A_g).
inline double ball_volume(const SpaceForm& sf, int n, double r,
                          double rel_tol = 1e-12) {
  if (n < 2) throw std::invalid_argument("ball_volume: n >= 2");
  const double omega = unit_sphere_area(n - 1);
  return omega *
         integrate([&](double s) { return std::pow(sf.phi(s), n - 1); }, 0.0,
                   r, rel_tol);
}

// \int_{S(r)} g(Phi) H dmu for the geodesic sphere of radius r, whose mean
// curvature is H = (n-1) phi'/phi:
//   omega_{n-1} (n-1) g(Phi(r)) phi'(r) phi(r)^{n-2}.
inline double sphere_weighted_H(const SpaceForm& sf, const Weight& w, int n,
                                double r) {
  if (n < 2) throw std::invalid_argument("sphere_weighted_H: n >= 2");
  if (!(r > 0.0) || r >= sf.r_max())
    throw std::domain_error("sphere_weighted_H: radius outside space form");
  return unit_sphere_area(n - 1) * (n - 1) * w.g(sf.Phi(r)) * sf.dphi(r) *
         std::pow(sf.phi(r), n - 2);
}

}  // namespace geomflow
