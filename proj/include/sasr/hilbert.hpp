// Copyright 2026 The sasr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Truncated Fock-space states of a single cavity mode and the exact
// photon-loss channel acting on them.

#ifndef SASR_HILBERT_HPP
#define SASR_HILBERT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "sasr/errors.hpp"

namespace sasr {

using Complex = std::complex<double>;

/// Largest admissible population in the top Fock level of a solved state.
inline constexpr double kTailTolerance = 1e-8;

/// Density matrix Q(n, m) = <n|rho|m> of the cavity mode on {|0>, ..., |n_max>}.
/// Immutable once built.
class FieldState {
 public:
  explicit FieldState(Eigen::MatrixXcd q) : q_(std::move(q)) {
    detail::require(q_.rows() == q_.cols(), "FieldState: matrix must be square");
    detail::require(q_.rows() >= 2, "FieldState: need n_max >= 1");
  }

  Eigen::Index dim() const { return q_.rows(); }
  int n_max() const { return static_cast<int>(q_.rows()) - 1; }
  const Eigen::MatrixXcd& matrix() const { return q_; }
  Complex operator()(Eigen::Index n, Eigen::Index m) const { return q_(n, m); }

 private:
  Eigen::MatrixXcd q_;
};

/// Fock amplitudes of a pure field state, kept at unit norm.
class PureFieldState {
 public:
  explicit PureFieldState(Eigen::VectorXcd amp) : amp_(std::move(amp)) {
    detail::require(amp_.size() >= 2, "PureFieldState: need n_max >= 1");
    normalize();
  }

  static PureFieldState fock(int n, int n_max) {
    detail::require(n >= 0 && n <= n_max, "PureFieldState::fock: n outside [0, n_max]");
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(n_max + 1);
    amp(n) = 1.0;
    return PureFieldState(std::move(amp));
  }

  Eigen::Index dim() const { return amp_.size(); }
  int n_max() const { return static_cast<int>(amp_.size()) - 1; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Complex operator()(Eigen::Index n) const { return amp_(n); }

 private:
  void normalize() {
    const double norm = amp_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw NumericalDegeneracy("PureFieldState: zero or non-finite norm");
    }
    amp_ /= norm;
  }

  Eigen::VectorXcd amp_;
};

inline FieldState vacuum(int n_max) {
  detail::require(n_max >= 1, "vacuum: n_max must be >= 1");
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  q(0, 0) = 1.0;
  return FieldState(std::move(q));
}

inline FieldState to_density(const PureFieldState& psi) {
  return FieldState(psi.amplitudes() * psi.amplitudes().adjoint());
}

/// Untruncated coherent-state amplitudes exp(-|a|^2/2) a^n / sqrt(n!) for
/// n <= n_max, evaluated in log space so large |alpha| does not underflow.
inline Eigen::VectorXcd coherent_amplitudes(Complex alpha, int n_max) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_max + 1);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    c(0) = 1.0;
    return c;
  }
  const double phase = std::arg(alpha);
  const double log_r = std::log(r);
  for (int n = 0; n <= n_max; ++n) {
    const double log_mag = -0.5 * r * r + n * log_r - 0.5 * std::lgamma(n + 1.0);
    c(n) = std::polar(std::exp(log_mag), n * phase);
  }
  return c;
}

/// Poisson weight of |alpha> that lies above the cutoff.
inline double coherent_tail_mass(Complex alpha, int n_max) {
  const double mean = std::norm(alpha);
  if (mean == 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(n_max) + 1.0, mean);
}

/// |alpha> projected onto the truncated space and renormalized.
inline FieldState coherent(Complex alpha, int n_max) {
  detail::require(n_max >= 1, "coherent: n_max must be >= 1");
  const double r = std::abs(alpha);
  if (r * r + 10.0 * r + 10.0 > n_max) {
    throw TruncationError("coherent: cutoff n_max=" + std::to_string(n_max) +
                          " too small for |alpha|=" + std::to_string(r));
  }
  Eigen::VectorXcd c = coherent_amplitudes(alpha, n_max);
  c /= c.norm();
  return FieldState(c * c.adjoint());
}

inline double trace(const FieldState& s) { return s.matrix().trace().real(); }

inline Eigen::VectorXd photon_distribution(const FieldState& s) {
  return s.matrix().diagonal().real();
}

inline double mean_photon(const FieldState& s) {
  const Eigen::VectorXd p = photon_distribution(s);
  double n = 0.0;
  for (Eigen::Index k = 1; k < p.size(); ++k) n += static_cast<double>(k) * p(k);
  return n;
}

inline double mean_photon(const PureFieldState& psi) {
  double n = 0.0;
  for (Eigen::Index k = 1; k < psi.dim(); ++k) n += static_cast<double>(k) * std::norm(psi(k));
  return n;
}

/// max |Q(n,m) - conj(Q(m,n))|
inline double hermiticity_defect(const FieldState& s) {
  return (s.matrix() - s.matrix().adjoint()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue(const FieldState& s) {
  const Eigen::MatrixXcd h = 0.5 * (s.matrix() + s.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// tr(rho^2)
inline double purity(const FieldState& s) {
  return s.matrix().cwiseAbs2().sum();
}

/// <alpha|rho|alpha> with the untruncated coherent amplitudes.
inline double fidelity_to_coherent(const FieldState& s, Complex alpha) {
  const double tail = coherent_tail_mass(alpha, s.n_max());
  if (tail > kTailTolerance) {
    throw TruncationError("fidelity_to_coherent: coherent target leaks " + std::to_string(tail) +
                          " beyond n_max=" + std::to_string(s.n_max()));
  }
  const Eigen::VectorXcd c = coherent_amplitudes(alpha, s.n_max());
  return (c.adjoint() * s.matrix() * c)(0, 0).real();
}

/// Exact amplitude-damping channel for field decay rate gamma_c over dt.
/// Photon number decays as exp(-2 gamma_c dt).
inline FieldState apply_decay(const FieldState& s, double gamma_c, double dt) {
  detail::require(gamma_c >= 0.0 && std::isfinite(gamma_c), "apply_decay: gamma_c must be >= 0");
  detail::require(dt >= 0.0 && std::isfinite(dt), "apply_decay: dt must be >= 0");
  const double eta = std::exp(-2.0 * gamma_c * dt);
  const Eigen::Index dim = s.dim();
  if (eta == 1.0) return s;

  // w(n, k) = sqrt(binom(n+k, k) eta^n (1-eta)^k), the k-photon-loss Kraus weight.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  const double log_eta = eta > 0.0 ? std::log(eta) : -std::numeric_limits<double>::infinity();
  const double log_loss = std::log1p(-eta);
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index k = 0; n + k < dim; ++k) {
      const double log_binom = std::lgamma(n + k + 1.0) - std::lgamma(n + 1.0) - std::lgamma(k + 1.0);
      const double a = (n == 0) ? 0.0 : static_cast<double>(n) * log_eta;
      const double b = (k == 0) ? 0.0 : static_cast<double>(k) * log_loss;
      w(n, k) = std::exp(0.5 * (log_binom + a + b));
    }
  }

  const Eigen::MatrixXcd& q = s.matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      Complex acc = 0.0;
      const Eigen::Index kmax = dim - std::max(n, m);
      for (Eigen::Index k = 0; k < kmax; ++k) acc += w(n, k) * w(m, k) * q(n + k, m + k);
      out(n, m) = acc;
    }
  }
  return FieldState(std::move(out));
}

}  // namespace sasr

#endif  // SASR_HILBERT_HPP
