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

// Collective spontaneous decay of N identical two-level atoms in the
// symmetric (J = N/2) sector. Rates are in units of the single-atom decay
// rate; multiply by g^2 tau for the cavity-assisted rate.

#ifndef SASR_DICKE_HPP
#define SASR_DICKE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sasr/atom.hpp"
#include "sasr/errors.hpp"

namespace sasr {

inline constexpr int kMaxDecomposeAtoms = 64;
inline constexpr int kMaxBruteForceAtoms = 12;

/// N atoms each in c_e|e> + c_g|g>.
struct EnsembleSpec {
  int n_atoms = 1;
  Complex c_e = 1.0;
  Complex c_g = 0.0;

  void validate() const {
    detail::require(n_atoms >= 1, "EnsembleSpec: n_atoms must be >= 1");
    detail::require(std::abs(std::norm(c_e) + std::norm(c_g) - 1.0) <= 1e-12,
                    "EnsembleSpec: |c_e|^2 + |c_g|^2 must equal 1");
  }

  AtomState atom() const { return PureAtom{c_e, c_g}.density(); }
};

/// (N/2 + M)(N/2 - M + 1), the decay rate of |J = N/2, M>.
inline double dicke_rate(int n_atoms, double m) {
  detail::require(n_atoms >= 1, "dicke_rate: n_atoms must be >= 1");
  const double half_n = 0.5 * n_atoms;
  const double k = half_n - m;  // number of ground-state atoms
  detail::require(std::abs(m) <= half_n + 1e-12, "dicke_rate: |M| exceeds N/2");
  detail::require(std::abs(k - std::round(k)) <= 1e-12, "dicke_rate: N/2 - M must be an integer");
  return (half_n + m) * (half_n - m + 1.0);
}

struct DickeComponent {
  double m = 0.0;          // M = N/2 - k
  Complex amplitude = 0.0; // on the normalized |J = N/2, M>
  double probability = 0.0;
};

/// Expansion of the product state over symmetric Dicke states, ordered from
/// M = N/2 (k = 0) down to M = -N/2. The amplitude for k ground-state atoms
/// is c_e^{N-k} c_g^k sqrt(binom(N, k)).
inline std::vector<DickeComponent> decompose_product_state(const EnsembleSpec& spec) {
  spec.validate();
  if (spec.n_atoms > kMaxDecomposeAtoms) {
    throw ResourceError("decompose_product_state: n_atoms exceeds " +
                        std::to_string(kMaxDecomposeAtoms));
  }
  const int n = spec.n_atoms;
  const double log_e = std::log(std::abs(spec.c_e));
  const double log_g = std::log(std::abs(spec.c_g));
  const double arg_e = std::arg(spec.c_e);
  const double arg_g = std::arg(spec.c_g);

  std::vector<DickeComponent> out;
  out.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const int ne = n - k;
    double log_mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(ne + 1.0) - std::lgamma(k + 1.0));
    if (ne > 0) log_mag += ne * log_e;
    if (k > 0) log_mag += k * log_g;
    const double mag = std::exp(log_mag);  // exp(-inf) == 0 for vanishing amplitudes
    DickeComponent c;
    c.m = 0.5 * n - k;
    c.amplitude = std::polar(mag, ne * arg_e + k * arg_g);
    c.probability = mag * mag;
    out.push_back(c);
  }
  return out;
}

/// <sigma_sum^dag sigma_sum> = N(N-1)|rho_eg|^2 + N rho_ee for N identical
/// uncorrelated atoms.
inline double ensemble_rate(int n_atoms, const AtomState& a) {
  detail::require(n_atoms >= 1, "ensemble_rate: n_atoms must be >= 1");
  const double n = n_atoms;
  return n * (n - 1.0) * std::norm(a.rho_eg) + n * a.rho_ee;
}

/// <sigma_sum^dag sigma_sum> evaluated by acting with the collective lowering
/// operator on the explicit 2^N product state.
inline double brute_force_rate(const EnsembleSpec& spec) {
  spec.validate();
  if (spec.n_atoms > kMaxBruteForceAtoms) {
    throw ResourceError("brute_force_rate: n_atoms exceeds " + std::to_string(kMaxBruteForceAtoms));
  }
  const int n = spec.n_atoms;
  const std::size_t size = std::size_t{1} << n;
  // Bit i set <=> atom i excited.
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(size));
  for (std::size_t s = 0; s < size; ++s) {
    Complex amp = 1.0;
    for (int i = 0; i < n; ++i) amp *= ((s >> i) & 1U) ? spec.c_e : spec.c_g;
    psi(static_cast<Eigen::Index>(s)) = amp;
  }
  Eigen::VectorXcd lowered = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size));
  for (std::size_t s = 0; s < size; ++s) {
    for (int i = 0; i < n; ++i) {
      if ((s >> i) & 1U) {
        lowered(static_cast<Eigen::Index>(s & ~(std::size_t{1} << i))) += psi(static_cast<Eigen::Index>(s));
      }
    }
  }
  return lowered.squaredNorm();
}

}  // namespace sasr

#endif  // SASR_DICKE_HPP
