#pragma once

// Shared numeric utilities: adaptive quadrature, monotone inversion,
// cumulative antiderivatives, periodic spectral derivatives, trigonometric
// interpolation, cubic splines, and hashing for reproducible reports.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/FFT>

namespace geomflow {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

#ifdef GEOMFLOW_VERSION
inline constexpr const char* kVersion = GEOMFLOW_VERSION;
#else
inline constexpr const char* kVersion = "0.1.0";
#endif

// Adaptive Gauss-Kronrod integral of f over [a,b] with relative tolerance.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12) {
  if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, 15, rel_tol, &err);
}

// Solves f(r) = y for strictly monotone f on [a,b] by bisection with a
// guarded secant candidate. Terminates at |hi-lo| <= 1e-12*(b-a).
template <class F>
double invert_monotone(F&& f, double y, double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("invert_monotone: bad bracket");
  double flo = f(a) - y, fhi = f(b) - y;
  if (flo == 0.0) return a;
  if (fhi == 0.0) return b;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::domain_error("invert_monotone: target not bracketed");
  double lo = a, hi = b;
  const double tol = 1e-12 * (b - a);
  for (int it = 0; it < 256 && (hi - lo) > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    const double sec = lo - flo * (hi - lo) / (fhi - flo);
    if (sec > lo + 0.05 * (hi - lo) && sec < hi - 0.05 * (hi - lo)) mid = sec;
    const double fm = f(mid) - y;
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

// Q(r) = \int_0^r f(s) ds tabulated on a uniform grid with fixed-order
// Gauss panels, evaluated by cubic Hermite (slopes are f itself).
class CumulativeAntiderivative {
 public:
  template <class F>
  CumulativeAntiderivative(F&& f, double r_max, int cells = 2048)
      : h_(r_max / cells), q_(cells + 1), s_(cells + 1) {
    if (!(r_max > 0.0) || cells < 4)
      throw std::invalid_argument("CumulativeAntiderivative: bad domain");
    using gauss = boost::math::quadrature::gauss<double, 15>;
    q_[0] = 0.0;
    s_[0] = f(0.0);
    for (int i = 1; i <= cells; ++i) {
      const double a = (i - 1) * h_, b = i * h_;
      q_[i] = q_[i - 1] + gauss::integrate(f, a, b);
      s_[i] = f(b);
    }
  }

  double r_max() const { return h_ * (static_cast<double>(q_.size()) - 1.0); }

  double operator()(double r) const {
    if (!(r >= 0.0) || r > r_max() * (1.0 + 1e-12))
      throw std::domain_error("CumulativeAntiderivative: outside domain");
    const int cells = static_cast<int>(q_.size()) - 1;
    int i = std::min(static_cast<int>(r / h_), cells - 1);
    const double t = (r - i * h_) / h_;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * q_[i] + (t3 - 2 * t2 + t) * h_ * s_[i] +
           (-2 * t3 + 3 * t2) * q_[i + 1] + (t3 - t2) * h_ * s_[i + 1];
  }

 private:
  double h_;
  std::vector<double> q_, s_;  // node values and slopes
};

namespace detail {

inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace detail

// First and second derivatives of N uniform samples of a smooth 2*pi-periodic
// function, by FFT. Coefficients below 1e-15 of the peak are zeroed so exact
// constants stay exactly constant and roundoff is not amplified by k^2.
inline void spectral_derivatives(const std::vector<double>& f,
                                 std::vector<double>& d1,
                                 std::vector<double>& d2) {
  const int n = static_cast<int>(f.size());
  if (n < 8) throw std::invalid_argument("spectral_derivatives: need N >= 8");
  auto& fft = detail::fft_engine();
  std::vector<std::complex<double>> in(n), c(n), w1(n), w2(n);
  for (int i = 0; i < n; ++i) in[i] = f[i];
  fft.fwd(c, in);
  double peak = 0.0;
  for (auto& z : c) peak = std::max(peak, std::abs(z));
  const double floor = 1e-15 * peak;
  std::vector<std::complex<double>> g1(n), g2(n);
  for (int j = 0; j < n; ++j) {
    std::complex<double> cj = (std::abs(c[j]) <= floor) ? 0.0 : c[j];
    int k = (j <= n / 2) ? j : j - n;  // signed wavenumber
    // Nyquist mode: drop for the odd-order derivative, keep for the even.
    const double k1 = (2 * j == n) ? 0.0 : static_cast<double>(k);
    g1[j] = cj * std::complex<double>(0.0, k1);
    g2[j] = cj * (-static_cast<double>(k) * static_cast<double>(k));
  }
  fft.inv(w1, g1);
  fft.inv(w2, g2);
  d1.resize(n);
  d2.resize(n);
  for (int i = 0; i < n; ++i) {
    d1[i] = w1[i].real();
    d2[i] = w2[i].real();
  }
}

// Trigonometric interpolant through N uniform periodic samples on [0, 2*pi).
class TrigSeries {
 public:
  explicit TrigSeries(const std::vector<double>& samples)
      : n_(static_cast<int>(samples.size())) {
    if (n_ < 8) throw std::invalid_argument("TrigSeries: need N >= 8");
    auto& fft = detail::fft_engine();
    std::vector<std::complex<double>> in(n_), c(n_);
    for (int i = 0; i < n_; ++i) in[i] = samples[i];
    fft.fwd(c, in);
    const int half = n_ / 2;
    a_.assign(half + 1, 0.0);
    b_.assign(half + 1, 0.0);
    a_[0] = c[0].real() / n_;
    for (int k = 1; k < half; ++k) {
      a_[k] = 2.0 * c[k].real() / n_;
      b_[k] = -2.0 * c[k].imag() / n_;
    }
    if (2 * half == n_) a_[half] = c[half].real() / n_;
  }

  double operator()(double theta) const {
    double s = a_[0];
    for (size_t k = 1; k < a_.size(); ++k)
      s += a_[k] * std::cos(k * theta) + b_[k] * std::sin(k * theta);
    return s;
  }

  double deriv(double theta) const {
    double s = 0.0;
    const size_t half = a_.size() - 1;
    for (size_t k = 1; k < a_.size(); ++k) {
      // The Nyquist cosine has no symmetric derivative on the grid; drop it,
      // matching spectral_derivatives.
      if (2 * half == static_cast<size_t>(n_) && k == half) continue;
      s += k * (b_[k] * std::cos(k * theta) - a_[k] * std::sin(k * theta));
    }
    return s;
  }

  // Exact antiderivative of the interpolant, vanishing at 0; over a full
  // period it reduces to the mean times 2 pi.
  double antiderivative(double theta) const {
    double s = a_[0] * theta;
    for (size_t k = 1; k < a_.size(); ++k)
      s += (a_[k] * std::sin(k * theta) + b_[k] * (1.0 - std::cos(k * theta))) /
           static_cast<double>(k);
    return s;
  }

 private:
  int n_;
  std::vector<double> a_, b_;
};

// Clamped cubic spline on strictly increasing nodes (zero end slopes by
// default, matching even reflection at the ends of a polar profile).
class CubicSpline {
 public:
  CubicSpline(const std::vector<double>& x, const std::vector<double>& y,
              double slope_lo = 0.0, double slope_hi = 0.0)
      : x_(x), y_(y) {
    const int n = static_cast<int>(x.size());
    if (n < 3 || y.size() != x.size())
      throw std::invalid_argument("CubicSpline: need >= 3 nodes");
    for (int i = 1; i < n; ++i)
      if (!(x[i] > x[i - 1]))
        throw std::invalid_argument("CubicSpline: nodes must increase");
    // Solve the tridiagonal system for node derivatives (clamped ends).
    std::vector<double> a(n), b(n), c(n), r(n);
    b[0] = 1.0;
    c[0] = 0.0;
    r[0] = slope_lo;
    for (int i = 1; i < n - 1; ++i) {
      const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
      a[i] = hr;
      b[i] = 2.0 * (hl + hr);
      c[i] = hl;
      r[i] = 3.0 * (hr * (y[i] - y[i - 1]) / hl + hl * (y[i + 1] - y[i]) / hr);
    }
    a[n - 1] = 0.0;
    b[n - 1] = 1.0;
    r[n - 1] = slope_hi;
    m_.resize(n);
    std::vector<double> cp(n), rp(n);
    cp[0] = c[0] / b[0];
    rp[0] = r[0] / b[0];
    for (int i = 1; i < n; ++i) {
      const double den = b[i] - a[i] * cp[i - 1];
      cp[i] = c[i] / den;
      rp[i] = (r[i] - a[i] * rp[i - 1]) / den;
    }
    m_[n - 1] = rp[n - 1];
    for (int i = n - 2; i >= 0; --i) m_[i] = rp[i] - cp[i] * m_[i + 1];
  }

  double operator()(double xq) const {
    const int n = static_cast<int>(x_.size());
    if (xq < x_.front() - 1e-12 || xq > x_.back() + 1e-12)
      throw std::domain_error("CubicSpline: query outside range");
    xq = std::clamp(xq, x_.front(), x_.back());
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (x_[mid] <= xq ? lo : hi) = mid;
    }
    const double h = x_[lo + 1] - x_[lo], t = (xq - x_[lo]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[lo] + (t3 - 2 * t2 + t) * h * m_[lo] +
           (-2 * t3 + 3 * t2) * y_[lo + 1] + (t3 - t2) * h * m_[lo + 1];
  }

 private:
  std::vector<double> x_, y_, m_;
};

// FNV-1a over raw bytes; used for shape and config digests in reports.
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t seed = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t hash_doubles(std::span<const double> v,
                                  std::uint64_t seed = 1469598103934665603ull) {
  std::uint64_t h = seed;
  for (double d : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    h = fnv1a(&bits, sizeof bits, h);
  }
  return h;
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace geomflow
