#pragma once

// Independent reference implementations used only by the tests. Nothing here calls
// into the library's stencil, assembly or eigensolver code.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

/// Textbook 8th-order central second-derivative coefficients (unit spacing).
inline const std::vector<double>& fd8_weights() {
  static const std::vector<double> w{-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
  return w;
}

inline double coordinate(std::size_t i, std::size_t n, double h) {
  return (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * h;
}

/// Dense d^2/dx^2 with Dirichlet closure.
inline Eigen::MatrixXd second_derivative(std::size_t n, double h) {
  const auto& w = fd8_weights();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double c = w[k] / (h * h);
      if (k == 0) {
        d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += c;
        continue;
      }
      if (i + k < n) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + k)) += c;
      if (i >= k) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - k)) += c;
    }
  }
  return d;
}

/// Lowest eigenvalue of -1/(2m) d^2/dx^2 + v(x), assembled densely.
inline Eigen::MatrixXd line_hamiltonian(std::size_t n, double h, const std::function<double(double)>& v,
                                        double mass = 1.0) {
  Eigen::MatrixXd hm = (-0.5 / mass) * second_derivative(n, h);
  for (std::size_t i = 0; i < n; ++i) {
    hm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += v(coordinate(i, n, h));
  }
  return hm;
}

inline double lowest_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// A (x) I + I (x) A for a dense one-dimensional operator.
inline Eigen::MatrixXd kron_sum(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        out(i * n + k, j * n + k) += a(i, j);
        out(k * n + i, k * n + j) += a(i, j);
      }
    }
  }
  return out;
}

/// Two bilinearly coupled oscillators
///   p^2/2 + w_m^2 x^2/2 + P^2/2 + w^2 (Q + lambda x / w)^2 / 2,
/// ground energy from the normal-mode frequencies.
inline double coupled_oscillators_ground(double omega_matter, double omega, double lambda) {
  Eigen::Matrix2d k;
  k << omega_matter * omega_matter + lambda * lambda, omega * lambda, omega * lambda, omega * omega;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(k);
  return 0.5 * (std::sqrt(es.eigenvalues()(0)) + std::sqrt(es.eigenvalues()(1)));
}

/// Fock amplitudes of a coherent state with real amplitude alpha, truncated at `cutoff`
/// and renormalized.
inline std::vector<double> coherent_amplitudes(double alpha, int cutoff) {
  std::vector<double> c(static_cast<std::size_t>(cutoff) + 1);
  double norm = 0.0;
  double term = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
    c[static_cast<std::size_t>(n)] = term;
    norm += term * term;
  }
  for (double& x : c) x /= std::sqrt(norm);
  return c;
}

/// C(n, k) in double precision.
inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
