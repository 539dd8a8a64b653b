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

#ifndef SASR_ATOM_HPP
#define SASR_ATOM_HPP

#include <cmath>
#include <complex>

#include "sasr/errors.hpp"
#include "sasr/hilbert.hpp"

namespace sasr {

/// Internal state of one injected two-level atom. rho_gg = 1 - rho_ee is
/// implied.
struct AtomState {
  double rho_ee = 0.0;
  Complex rho_eg = 0.0;

  double rho_gg() const { return 1.0 - rho_ee; }
  Complex rho_ge() const { return std::conj(rho_eg); }
};

/// Positivity of the 2x2 atomic density matrix.
inline bool is_physical(const AtomState& a, double tol = 1e-12) {
  if (!(a.rho_ee >= -tol && a.rho_ee <= 1.0 + tol)) return false;
  const double bound = std::sqrt(std::max(0.0, a.rho_ee * (1.0 - a.rho_ee)));
  return std::abs(a.rho_eg) <= bound + tol;
}

/// Pure state sin(theta/2)|e> + cos(theta/2) e^{i phi}|g> left by a pump
/// pulse of area theta.
inline AtomState prepare(double theta, double phi = 0.0) {
  const double s = std::sin(0.5 * theta);
  return AtomState{s * s, 0.5 * std::sin(theta) * std::polar(1.0, -phi)};
}

/// Scales the coherence by `factor`; populations are untouched.
inline AtomState dephase(const AtomState& a, double factor) {
  detail::require(factor >= 0.0 && factor <= 1.0, "dephase: factor must lie in [0, 1]");
  return AtomState{a.rho_ee, a.rho_eg * factor};
}

/// <sigma_i^dag sigma_j> for two atoms prepared with the same pulse area.
inline double pair_correlation(double theta) {
  const double s = std::sin(theta);
  return 0.25 * s * s;
}

/// Amplitudes (c_e, c_g) of a pure atom; rho_eg = c_e conj(c_g).
struct PureAtom {
  Complex c_e = 0.0;
  Complex c_g = 1.0;

  static PureAtom from_pulse(double theta, double phi = 0.0) {
    return PureAtom{std::sin(0.5 * theta), std::cos(0.5 * theta) * std::polar(1.0, phi)};
  }

  AtomState density() const { return AtomState{std::norm(c_e), c_e * std::conj(c_g)}; }
};

}  // namespace sasr

#endif  // SASR_ATOM_HPP
