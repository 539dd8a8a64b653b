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

// Closed-form results for the atom-pumped lossy cavity. All quantities are
// dimensionless (n_c = r / gamma_c, g_tau) except emission_rate_per_atom.
// Points where an approximation diverges return std::nullopt; callers must
// fall back to the full master-equation solver there.

#ifndef SASR_ANALYTIC_HPP
#define SASR_ANALYTIC_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "sasr/atom.hpp"
#include "sasr/errors.hpp"
#include "sasr/hilbert.hpp"

namespace sasr {

enum class Injection { poisson, regular };

/// Steady photon-number distribution for atoms without phase preference,
/// built from the detailed-balance recursion
///   P_n = P_{n-1} n_c rho_ee sin^2(sqrt(n) g tau) / (2n + n_c (1 - rho_ee) sin^2(sqrt(n) g tau)),
/// normalized over {0, ..., n_max}. Throws TruncationError when more than
/// 1e-8 of the untruncated distribution lies above n_max.
inline Eigen::VectorXd pn_random_phase(double n_c, double rho_ee, double g_tau, int n_max) {
  detail::require(rho_ee >= 0.0 && rho_ee <= 1.0, "pn_random_phase: rho_ee must lie in [0, 1]");
  detail::require(n_c >= 0.0, "pn_random_phase: n_c must be >= 0");
  detail::require(n_max >= 1, "pn_random_phase: n_max must be >= 1");

  auto log_ratio = [&](int k) {
    const double s = std::sin(std::sqrt(static_cast<double>(k)) * g_tau);
    const double s2 = s * s;
    const double num = n_c * rho_ee * s2;
    if (num <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(num) - std::log(2.0 * k + n_c * (1.0 - rho_ee) * s2);
  };

  Eigen::VectorXd log_p(n_max + 1);
  log_p(0) = 0.0;
  for (int k = 1; k <= n_max; ++k) log_p(k) = log_p(k - 1) + log_ratio(k);
  const double peak = log_p.maxCoeff();
  // Scalar exp: the vectorized one returns denormals instead of 0 for -inf.
  Eigen::VectorXd p = (log_p.array() - peak).unaryExpr([](double v) { return std::exp(v); });
  const double inside = p.sum();

  // Continue the product past the cutoff to bound the discarded weight.
  double outside = 0.0;
  double log_term = log_p(n_max);
  const int limit = 10 * (n_max + 1) + 10000;
  for (int k = n_max + 1; k <= limit; ++k) {
    log_term += log_ratio(k);
    const double term = std::exp(log_term - peak);
    outside += term;
    if (term < 1e-20 * inside && k > 2 * n_max) break;
    if (k == limit) outside = std::numeric_limits<double>::infinity();
  }
  if (outside / (inside + outside) > kTailTolerance || !std::isfinite(outside)) {
    throw TruncationError("pn_random_phase: distribution not normalizable within n_max=" +
                          std::to_string(n_max));
  }
  return p / inside;
}

/// Mean photon number without atomic coherence in the small-Rabi-angle
/// regime, with pumping parameter p = n_c (g tau)^2. Empty past the lasing
/// divergence.
inline std::optional<double> mean_n_noncollective(double p, double rho_ee) {
  const double denom = 1.0 + (1.0 - 2.0 * rho_ee) * 0.5 * p;
  if (!(denom > 0.0)) return std::nullopt;
  return 0.5 * rho_ee * p / denom;
}

/// Amplitude of the coherent field built up by phase-aligned atoms:
/// alpha = -i n_c rho_eg g tau.
inline Complex coherent_alpha(double n_c, Complex rho_eg, double g_tau) {
  return Complex(0.0, -1.0) * n_c * rho_eg * g_tau;
}

/// Non-collective term plus the collective term (n_c |rho_eg| g tau)^2.
inline std::optional<double> mean_n_total(double n_c, const AtomState& a, double g_tau) {
  const auto first = mean_n_noncollective(n_c * g_tau * g_tau, a.rho_ee);
  if (!first) return std::nullopt;
  const double collective = n_c * std::abs(a.rho_eg) * g_tau;
  return *first + collective * collective;
}

/// Effective number of earlier atoms whose field still acts on a newly
/// injected one.
inline double n_eff(Injection injection, double n_c) {
  detail::require(n_c > 0.0, "n_eff: n_c must be > 0");
  if (injection == Injection::poisson) return n_c;
  return 1.0 / std::expm1(1.0 / n_c);
}

/// rho_ee g^2 tau + 2 n_eff |rho_eg|^2 g^2 tau, in 1/s for g in rad/s and tau in s.
inline double emission_rate_per_atom(double n_eff_value, const AtomState& a, double g, double tau) {
  detail::require(n_eff_value >= 0.0 && g >= 0.0 && tau >= 0.0,
                  "emission_rate_per_atom: arguments must be non-negative");
  const double g2tau = g * g * tau;
  return a.rho_ee * g2tau + 2.0 * n_eff_value * std::norm(a.rho_eg) * g2tau;
}

/// n_c above which the collective term exceeds the non-collective one:
/// 2 rho_ee / (2 |rho_eg|)^2. Infinite without coherence.
inline double dominance_threshold(const AtomState& a) {
  const double d = 2.0 * std::abs(a.rho_eg);
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * a.rho_ee / (d * d);
}

/// n_c ~ (g tau)^-2 theta / sin(theta) where Rabi feedback clamps <n>.
inline std::optional<double> saturation_nc(double g_tau, double theta) {
  const double s = std::sin(theta);
  if (s == 0.0 || g_tau == 0.0) return std::nullopt;
  return theta / (s * g_tau * g_tau);
}

struct BetaFactors {
  double beta = 0.0;
  std::optional<double> beta_coll;  // empty when rho_ee == 0
};

inline BetaFactors beta_factors(double n_c, const AtomState& a, double g_tau) {
  BetaFactors b;
  b.beta = g_tau * g_tau;
  if (a.rho_ee > 0.0) b.beta_coll = 2.0 * n_c * (std::norm(a.rho_eg) / a.rho_ee) * g_tau * g_tau;
  return b;
}

}  // namespace sasr

#endif  // SASR_ANALYTIC_HPP
