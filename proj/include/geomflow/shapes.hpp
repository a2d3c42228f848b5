#pragma once

// Shape factories: named profiles (circle:2, offset_sphere:1:0.3, ...) and
// seeded random convex corpora with rejection sampling on the convexity class.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomflow/axisym.hpp"
#include "geomflow/curve2d.hpp"

namespace geomflow {

namespace detail {

inline std::vector<std::string> split_spec(const std::string& spec) {
  std::vector<std::string> parts;
  size_t pos = 0;
  while (pos <= spec.size()) {
    const size_t next = spec.find(':', pos);
    if (next == std::string::npos) {
      parts.push_back(spec.substr(pos));
      break;
    }
    parts.push_back(spec.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

inline double spec_num(const std::vector<std::string>& parts, size_t i) {
  if (i >= parts.size())
    throw std::invalid_argument("shape spec: missing parameter " +
                                std::to_string(i));
  try {
    return std::stod(parts[i]);
  } catch (const std::exception&) {
    throw std::invalid_argument("shape spec: bad number '" + parts[i] + "'");
  }
}

inline void require_params(const std::vector<std::string>& parts, size_t lo,
                           size_t hi) {
  const size_t got = parts.size() - 1;
  if (got < lo || got > hi)
    throw std::invalid_argument("shape spec '" + parts[0] +
                                "': wrong parameter count");
}

// Geodesic circle of radius R centered at distance d from the origin along
// theta = 0, solved from the law of cosines in M^2(K) (same formula serves the
// axisymmetric sphere with theta the polar angle).
inline double offset_radius(const SpaceForm& sf, double R, double d,
                            double theta) {
  const double c = std::cos(theta);
  switch (sf.K) {
    case 0:
      return d * c + std::sqrt(R * R - d * d * (1.0 - c * c));
    case 1: {
      const double C = std::sqrt(1.0 - std::pow(std::sin(d), 2) * (1.0 - c * c));
      return std::atan2(std::sin(d) * c, std::cos(d)) +
             std::acos(std::cos(R) / C);
    }
    default: {
      const double C = std::sqrt(std::pow(std::cosh(d), 2) -
                                 std::pow(std::sinh(d), 2) * c * c);
      return std::atanh(std::tanh(d) * c) + std::acosh(std::cosh(R) / C);
    }
  }
}

inline void check_offset(const SpaceForm& sf, double R, double d) {
  if (R <= 0.0 || d < 0.0 || d >= R)
    throw std::invalid_argument("offset shape: need 0 <= d < R");
  if (R + d >= sf.convex_r_max())
    throw std::domain_error("offset shape: R + d leaves the convex domain");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Deterministic curve profiles (uniform grid theta_i = 2 pi i / N)

inline std::vector<double> circle_profile(int N, double R) {
  if (R <= 0.0) throw std::invalid_argument("circle: R > 0 required");
  return std::vector<double>(N, R);
}

inline std::vector<double> ellipse_profile(int N, double a, double b) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("ellipse: a, b > 0");
  std::vector<double> rho(N);
  for (int i = 0; i < N; ++i) {
    const double th = 2.0 * kPi * i / N;
    rho[i] = a * b /
             std::sqrt(std::pow(b * std::cos(th), 2) +
                       std::pow(a * std::sin(th), 2));
  }
  return rho;
}

inline std::vector<double> offset_circle_profile(const SpaceForm& sf, int N,
                                                 double R, double d) {
  detail::check_offset(sf, R, d);
  std::vector<double> rho(N);
  for (int i = 0; i < N; ++i)
    rho[i] = detail::offset_radius(sf, R, d, 2.0 * kPi * i / N);
  return rho;
}

// coeffs alternate a_1, b_1, a_2, b_2, ... in rho = a0 + sum a_m cos + b_m sin
inline std::vector<double> fourier_profile(int N, double a0,
                                           const std::vector<double>& coeffs) {
  std::vector<double> rho(N, a0);
  for (int i = 0; i < N; ++i) {
    const double th = 2.0 * kPi * i / N;
    for (size_t j = 0; j < coeffs.size(); ++j) {
      const double m = static_cast<double>(j / 2 + 1);
      rho[i] += coeffs[j] * (j % 2 ? std::sin(m * th) : std::cos(m * th));
    }
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Deterministic axisymmetric profiles (theta_j = pi j / M)

inline std::vector<double> sphere_profile(int M, double R) {
  if (R <= 0.0) throw std::invalid_argument("sphere: R > 0 required");
  return std::vector<double>(M + 1, R);
}

inline std::vector<double> offset_sphere_profile(const SpaceForm& sf, int M,
                                                 double R, double d) {
  detail::check_offset(sf, R, d);
  std::vector<double> rho(M + 1);
  for (int j = 0; j <= M; ++j)
    rho[j] = detail::offset_radius(sf, R, d, kPi * j / M);
  return rho;
}

// Ellipsoid of revolution with semi-axis a along the rotation axis, 1 across.
inline std::vector<double> ellipsoid_profile(int M, double a) {
  if (a <= 0.0) throw std::invalid_argument("ellipsoid: a > 0 required");
  std::vector<double> rho(M + 1);
  for (int j = 0; j <= M; ++j) {
    const double th = kPi * j / M;
    rho[j] = a / std::sqrt(std::pow(std::cos(th), 2) +
                           a * a * std::pow(std::sin(th), 2));
  }
  return rho;
}

inline std::vector<double> legendre_profile(int M, double a0,
                                            const std::vector<double>& coeffs) {
  std::vector<double> rho(M + 1, a0);
  for (int j = 0; j <= M; ++j) {
    const double x = std::cos(kPi * j / M);
    for (size_t l = 0; l < coeffs.size(); ++l)
      rho[j] += coeffs[l] * std::legendre(static_cast<unsigned>(l + 1), x);
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Random convex corpora. Coefficients are drawn with a 1/m^2 amplitude decay
// and the draw is rejected until the requested convexity class holds with a
// quantitative margin, so corpus members stay strictly inside the hypotheses.

struct CorpusFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline ClosedCurve random_convex_curve(const SpaceForm& sf, int N, double base,
                                       double amp, std::uint64_t seed,
                                       int max_tries = 64) {
  if (base <= 0.0 || amp < 0.0)
    throw std::invalid_argument("random curve: base > 0, amp >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<double> coeffs;
    for (int m = 1; m <= 5; ++m) {
      coeffs.push_back(amp * base * unit(rng) / (m * m));
      coeffs.push_back(amp * base * unit(rng) / (m * m));
    }
    std::vector<double> rho = fourier_profile(N, base, coeffs);
    double lo = rho[0], hi = rho[0];
    for (double r : rho) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (lo <= 0.05 * base || hi >= 0.98 * sf.convex_r_max()) continue;
    const auto curve = make_closed_curve(sf, rho);
    const auto geo = curve_geometry(curve);
    double kmin = geo.kappa[0];
    for (double k : geo.kappa) kmin = std::min(kmin, k);
    if (kmin * base <= 1e-3) continue;
    return curve;
  }
  throw CorpusFailure("random curve: no convex draw after retries");
}

// Accepts only profiles whose principal curvature tuple lies in the k-positive
// cone with margin; h_convex additionally demands kappa_min >= 1 + margin.
inline AxisymShape random_convex_axisym(const SpaceForm& sf, int n, int M,
                                        int k, double base, double amp,
                                        std::uint64_t seed, bool h_convex = false,
                                        int max_tries = 64) {
  if (base <= 0.0 || amp < 0.0)
    throw std::invalid_argument("random axisym: base > 0, amp >= 0");
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("random axisym: 1 <= k <= n-1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<double> coeffs;
    for (int l = 1; l <= 4; ++l)
      coeffs.push_back(amp * base * unit(rng) / ((l + 1) * (l + 1)));
    std::vector<double> rho = legendre_profile(M, base, coeffs);
    double lo = rho[0], hi = rho[0];
    for (double r : rho) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (lo <= 0.05 * base || hi >= 0.98 * sf.convex_r_max()) continue;
    const auto shape = make_axisym_shape(sf, n, rho);
    const auto cc = convexity_class(axisym_geometry(shape));
    if (h_convex) {
      if (cc.h_margin() <= 1e-3) continue;
    } else {
      bool ok = true;
      for (int j = 1; j <= k && ok; ++j)
        ok = cc.sigma_min[j] * std::pow(base, j) > 1e-3;
      if (!ok) continue;
    }
    return shape;
  }
  throw CorpusFailure("random axisym: no admissible draw after retries");
}

// ---------------------------------------------------------------------------
// Spec-string parsing: "name[:param[:param...]]"

inline ClosedCurve parse_curve_spec(const SpaceForm& sf,
                                    const std::string& spec, int N) {
  const auto p = detail::split_spec(spec);
  const std::string& name = p[0];
  if (name == "circle") {
    detail::require_params(p, 1, 1);
    return make_closed_curve(sf, circle_profile(N, detail::spec_num(p, 1)));
  }
  if (name == "ellipse") {
    detail::require_params(p, 2, 2);
    if (sf.K != 0)
      throw std::invalid_argument("ellipse: flat space only");
    return make_closed_curve(
        sf, ellipse_profile(N, detail::spec_num(p, 1), detail::spec_num(p, 2)));
  }
  if (name == "offset_circle") {
    detail::require_params(p, 2, 2);
    return make_closed_curve(sf, offset_circle_profile(sf, N,
                                                       detail::spec_num(p, 1),
                                                       detail::spec_num(p, 2)));
  }
  if (name == "fourier") {
    detail::require_params(p, 1, 16);
    std::vector<double> coeffs;
    for (size_t i = 2; i < p.size(); ++i)
      coeffs.push_back(detail::spec_num(p, i));
    return make_closed_curve(
        sf, fourier_profile(N, detail::spec_num(p, 1), coeffs));
  }
  if (name == "random") {
    detail::require_params(p, 1, 3);
    const auto seed = static_cast<std::uint64_t>(detail::spec_num(p, 1));
    const double amp = p.size() > 2 ? detail::spec_num(p, 2) : 0.1;
    const double base = p.size() > 3 ? detail::spec_num(p, 3) : 1.0;
    return random_convex_curve(sf, N, base, amp, seed);
  }
  throw std::invalid_argument("unknown curve spec '" + name + "'");
}

inline AxisymShape parse_axisym_spec(const SpaceForm& sf, int n,
                                     const std::string& spec, int M) {
  const auto p = detail::split_spec(spec);
  const std::string& name = p[0];
  if (name == "sphere" || name == "circle") {
    detail::require_params(p, 1, 1);
    return make_axisym_shape(sf, n, sphere_profile(M, detail::spec_num(p, 1)));
  }
  if (name == "offset_sphere") {
    detail::require_params(p, 2, 2);
    return make_axisym_shape(
        sf, n, offset_sphere_profile(sf, M, detail::spec_num(p, 1),
                                     detail::spec_num(p, 2)));
  }
  if (name == "ellipsoid") {
    detail::require_params(p, 1, 1);
    if (sf.K != 0)
      throw std::invalid_argument("ellipsoid: flat space only");
    return make_axisym_shape(sf, n,
                             ellipsoid_profile(M, detail::spec_num(p, 1)));
  }
  if (name == "legendre") {
    detail::require_params(p, 1, 16);
    std::vector<double> coeffs;
    for (size_t i = 2; i < p.size(); ++i)
      coeffs.push_back(detail::spec_num(p, i));
    return make_axisym_shape(
        sf, n, legendre_profile(M, detail::spec_num(p, 1), coeffs));
  }
  if (name == "random") {
    detail::require_params(p, 1, 3);
    const auto seed = static_cast<std::uint64_t>(detail::spec_num(p, 1));
    const double amp = p.size() > 2 ? detail::spec_num(p, 2) : 0.05;
    const double base = p.size() > 3 ? detail::spec_num(p, 3) : 1.0;
    return random_convex_axisym(sf, n, M, 1, base, amp, seed,
                                sf.K == -1 /* h-convex in hyperbolic space */);
  }
  throw std::invalid_argument("unknown axisym spec '" + name + "'");
}

}  // namespace geomflow
