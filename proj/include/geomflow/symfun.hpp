#pragma once

// Elementary symmetric polynomials of principal curvature tuples, normalized
// means H_k, Newton tensors, Garding cones, and Newton-MacLaurin gaps.
//
// Conventions for a tuple of m = n-1 principal curvatures:
//   sigma_0 = 1, sigma_k = e_k(kappa), H_k = sigma_k / binom(m, k),
//   T_0 = I,  T_k = sigma_k I - T_{k-1} h,
// so that tr(T_{k-1} h) = k sigma_k, tr(T_{k-1}) = (n-k) sigma_{k-1} and
// tr(T_{k-1} h^2) = sigma_1 sigma_k - (k+1) sigma_{k+1}.

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "geomflow/numerics.hpp"

namespace geomflow {

// All sigma_0..sigma_kmax by the stable one-pass recurrence.
inline std::vector<double> sigma_all(std::span<const double> kappa,
                                     int kmax = -1) {
  const int m = static_cast<int>(kappa.size());
  if (m == 0) throw std::invalid_argument("sigma_all: empty tuple");
  if (kmax < 0 || kmax > m) kmax = m;
  std::vector<double> e(kmax + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < m; ++i) {
    const double x = kappa[i];
    for (int j = std::min(kmax, i + 1); j >= 1; --j) e[j] += x * e[j - 1];
  }
  return e;
}

inline double sigma(int k, std::span<const double> kappa) {
  if (k < 0) throw std::invalid_argument("sigma: k < 0");
  const int m = static_cast<int>(kappa.size());
  if (k > m) return 0.0;
  return sigma_all(kappa, k)[k];
}

// Normalized mean H_k = sigma_k / binom(m, k); H_0 = 1.
inline double h_norm(int k, std::span<const double> kappa) {
  const int m = static_cast<int>(kappa.size());
  if (k < 0 || k > m) throw std::invalid_argument("h_norm: k outside 0..m");
  return sigma(k, kappa) / binom(m, k);
}

// kappa in the Garding cone Gamma_k^+: sigma_j > 0 for j = 1..k.
inline bool cone_check(int k, std::span<const double> kappa) {
  const int m = static_cast<int>(kappa.size());
  if (k < 1 || k > m) throw std::invalid_argument("cone_check: k outside 1..m");
  const auto e = sigma_all(kappa, k);
  for (int j = 1; j <= k; ++j)
    if (!(e[j] > 0.0)) return false;
  return true;
}

namespace detail {

// Eigenvalues of a Weingarten matrix; symmetric input uses the self-adjoint
// path, otherwise real parts are taken after a reality check.
inline std::vector<double> weingarten_eigenvalues(const Eigen::MatrixXd& h) {
  const int m = static_cast<int>(h.rows());
  if (m == 0 || h.cols() != m)
    throw std::invalid_argument("weingarten: square matrix required");
  const double scale = std::max(1.0, h.norm());
  if ((h - h.transpose()).norm() <= 1e-12 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("weingarten: eigensolve failed");
    return {es.eigenvalues().data(), es.eigenvalues().data() + m};
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("weingarten: eigensolve failed");
  std::vector<double> ev(m);
  for (int i = 0; i < m; ++i) {
    if (std::abs(es.eigenvalues()[i].imag()) > 1e-10 * scale)
      throw std::domain_error("weingarten: complex eigenvalues");
    ev[i] = es.eigenvalues()[i].real();
  }
  return ev;
}

}  // namespace detail

// Newton tensor T_k of the Weingarten matrix, 0 <= k <= m-1.
inline Eigen::MatrixXd newton_tensor(int k, const Eigen::MatrixXd& h) {
  const int m = static_cast<int>(h.rows());
  if (k < 0 || k > m - 1)
    throw std::invalid_argument("newton_tensor: k outside 0..m-1");
  const auto ev = detail::weingarten_eigenvalues(h);
  const auto e = sigma_all(ev, k);
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(m, m);
  for (int j = 1; j <= k; ++j)
    T = e[j] * Eigen::MatrixXd::Identity(m, m) - T * h;
  return T;
}

// H_k H_l - H_{k+1} H_{l-1} >= 0 on Gamma_k^+ (1 <= l <= k <= m), zero
// exactly on umbilic tuples.
inline double maclaurin_gap(int k, int l, std::span<const double> kappa) {
  const int m = static_cast<int>(kappa.size());
  if (!(1 <= l && l <= k && k <= m))
    throw std::invalid_argument("maclaurin_gap: need 1 <= l <= k <= m");
  if (!cone_check(k, kappa))
    throw std::domain_error("maclaurin_gap: tuple outside Gamma_k^+");
  const auto e = sigma_all(kappa);
  auto H = [&](int j) {
    if (j > m) return 0.0;
    return e[j] / binom(m, j);
  };
  return H(k) * H(l) - H(k + 1) * H(l - 1);
}

}  // namespace geomflow
