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

// Resonant Jaynes-Cummings transit of a single atom through the cavity and
// the lossless injection engine built on it.
//
// One transit maps |e,n> -> C_n |e,n> - i S_n |g,n+1> and
// |g,n> -> C_{n-1} |g,n> - i S_{n-1} |e,n-1>, with C_n = cos(sqrt(n+1) g tau),
// S_n = sin(sqrt(n+1) g tau), C_{-1} = 1 and S_{-1} = 0. Inside a truncated
// space the coupling out of the top level is switched off (S_{n_max} = 0), so
// every map here is exactly trace preserving; the population that would
// have left the space is reported as a truncation error instead.

#ifndef SASR_INTERACTION_HPP
#define SASR_INTERACTION_HPP

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sasr/atom.hpp"
#include "sasr/dicke.hpp"
#include "sasr/errors.hpp"
#include "sasr/hilbert.hpp"

namespace sasr {

/// Vacuum Rabi angle g*tau accumulated during one transit.
struct KickParams {
  double g_tau = 0.0;

  void validate() const {
    detail::require(g_tau >= 0.0 && std::isfinite(g_tau), "KickParams: g_tau must be >= 0");
  }
};

/// Tabulated C_n, S_n for one cutoff, with the boundary conventions applied.
class RabiTable {
 public:
  RabiTable(double g_tau, int n_max) : c_(n_max + 1), s_(n_max + 1) {
    for (int n = 0; n <= n_max; ++n) {
      const double angle = std::sqrt(n + 1.0) * g_tau;
      c_[n] = std::cos(angle);
      s_[n] = std::sin(angle);
    }
    s_top_ = s_[n_max];
    c_[n_max] = 1.0;
    s_[n_max] = 0.0;
  }

  double c(int n) const { return n < 0 ? 1.0 : c_[n]; }
  double s(int n) const { return n < 0 ? 0.0 : s_[n]; }
  /// Untruncated S_{n_max}: the coupling that would leave the space.
  double s_top() const { return s_top_; }

 private:
  std::vector<double> c_;
  std::vector<double> s_;
  double s_top_ = 0.0;
};

namespace detail {

/// Calls visit(a, b, coeff) for every term of Q'(n, m) = sum coeff * Q(a, b)
/// produced by one atomic transit. Indices outside [0, dim) are skipped.
template <typename Visitor>
inline void for_each_kick_term(const RabiTable& t, const AtomState& a, int n, int m, int dim,
                               Visitor&& visit) {
  const Complex i(0.0, 1.0);
  const double ree = a.rho_ee;
  const double rgg = a.rho_gg();
  const Complex reg = a.rho_eg;
  const Complex rge = a.rho_ge();
  visit(n, m, Complex(ree * t.c(n) * t.c(m) + rgg * t.c(n - 1) * t.c(m - 1)));
  if (n + 1 < dim && m + 1 < dim) visit(n + 1, m + 1, Complex(rgg * t.s(n) * t.s(m)));
  if (n >= 1 && m >= 1) visit(n - 1, m - 1, Complex(ree * t.s(n - 1) * t.s(m - 1)));
  if (m + 1 < dim) visit(n, m + 1, i * reg * t.c(n) * t.s(m));
  if (n + 1 < dim) visit(n + 1, m, -i * rge * t.s(n) * t.c(m));
  if (m >= 1) visit(n, m - 1, i * rge * t.c(n - 1) * t.s(m - 1));
  if (n >= 1) visit(n - 1, m, -i * reg * t.s(n - 1) * t.c(m - 1));
}

inline void check_kick_leakage(double leak, const char* where) {
  if (leak > kTailTolerance) {
    throw TruncationError(std::string(where) + ": population " + std::to_string(leak) +
                          " would leave the truncated space");
  }
}

}  // namespace detail

/// Field state after one atom in state `a` has crossed the cavity, with the
/// atom traced out.
inline FieldState jc_kick(const FieldState& s, const AtomState& a, const KickParams& k) {
  k.validate();
  const int dim = static_cast<int>(s.dim());
  const RabiTable table(k.g_tau, s.n_max());
  const Eigen::MatrixXcd& q = s.matrix();
  detail::check_kick_leakage(a.rho_ee * table.s_top() * table.s_top() * q(dim - 1, dim - 1).real(),
                             "jc_kick");
  Eigen::MatrixXcd out(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      Complex acc = 0.0;
      detail::for_each_kick_term(table, a, n, m, dim,
                                 [&](int r, int c, Complex coeff) { acc += coeff * q(r, c); });
      out(n, m) = acc;
    }
  }
  return FieldState(std::move(out));
}

/// Atom-field state after a transit: excited(n) = <e,n|psi>, ground(n) = <g,n|psi>.
struct JointState {
  Eigen::VectorXcd excited;
  Eigen::VectorXcd ground;

  double norm_squared() const { return excited.squaredNorm() + ground.squaredNorm(); }
};

/// Unitary transit of a pure atom through a pure field.
inline JointState jc_kick_pure(const PureFieldState& psi, const PureAtom& atom, const KickParams& k) {
  k.validate();
  detail::require(std::abs(std::norm(atom.c_e) + std::norm(atom.c_g) - 1.0) <= 1e-10,
                  "jc_kick_pure: atom amplitudes must be normalized");
  const int dim = static_cast<int>(psi.dim());
  const RabiTable t(k.g_tau, psi.n_max());
  detail::check_kick_leakage(std::norm(atom.c_e) * t.s_top() * t.s_top() * std::norm(psi(dim - 1)),
                             "jc_kick_pure");
  const Complex i(0.0, 1.0);
  JointState out{Eigen::VectorXcd(dim), Eigen::VectorXcd(dim)};
  for (int n = 0; n < dim; ++n) {
    const Complex up = (n + 1 < dim) ? psi(n + 1) : Complex(0.0);
    const Complex down = (n >= 1) ? psi(n - 1) : Complex(0.0);
    out.excited(n) = atom.c_e * t.c(n) * psi(n) - i * atom.c_g * t.s(n) * up;
    out.ground(n) = atom.c_g * t.c(n - 1) * psi(n) - i * atom.c_e * t.s(n - 1) * down;
  }
  return out;
}

/// Field density matrix with the atom traced out.
inline FieldState reduced_field(const JointState& joint) {
  return FieldState(joint.excited * joint.excited.adjoint() + joint.ground * joint.ground.adjoint());
}

enum class AtomOutcome { excited, ground };

struct AtomMeasurement {
  AtomOutcome outcome;
  PureFieldState field;
  double probability;
};

/// Energy-basis measurement of the atom; `u` is a uniform draw in [0, 1).
/// Outcome e is selected when u < p_e.
inline AtomMeasurement measure_atom(const JointState& joint, double u) {
  detail::require(u >= 0.0 && u < 1.0, "measure_atom: u must lie in [0, 1)");
  const double pe_raw = joint.excited.squaredNorm();
  const double total = pe_raw + joint.ground.squaredNorm();
  if (!(total > 1e-300)) throw NumericalDegeneracy("measure_atom: joint state has zero norm");
  const double pe = pe_raw / total;
  if (u < pe) return AtomMeasurement{AtomOutcome::excited, PureFieldState(joint.excited), pe};
  if (!(1.0 - pe > 0.0)) throw NumericalDegeneracy("measure_atom: ground branch has zero norm");
  return AtomMeasurement{AtomOutcome::ground, PureFieldState(joint.ground), 1.0 - pe};
}

/// Running <n> after each atom of `atoms` crosses an initially empty,
/// lossless cavity. The default cutoff n_max = atoms.size() is exact, since
/// each atom adds at most one photon.
inline std::vector<double> lossless_sequence(const std::vector<AtomState>& atoms,
                                             const KickParams& k, int n_max = -1) {
  k.validate();
  if (n_max < 0) n_max = std::max<int>(1, static_cast<int>(atoms.size()));
  FieldState s = vacuum(n_max);
  std::vector<double> trace;
  trace.reserve(atoms.size());
  for (const auto& a : atoms) {
    s = jc_kick(s, a, k);
    trace.push_back(mean_photon(s));
  }
  return trace;
}

/// <n> after all N atoms of `spec` interact with the empty cavity at once
/// for the same g*tau (Tavis-Cummings evolution in the symmetric sector).
/// Exact: no photon-number truncation is needed because excitations are
/// conserved.
inline double bunched_emission(const EnsembleSpec& spec, const KickParams& k) {
  k.validate();
  const auto components = decompose_product_state(spec);
  const int n_atoms = spec.n_atoms;
  double mean_n = 0.0;
  // The initial |M> (x) |0> with M = -N/2 + e lies in the sector of e
  // excitations. Sector basis index j = photons, with N/2 + M = e - j.
  for (const auto& comp : components) {
    const int excited = static_cast<int>(std::lround(comp.m + 0.5 * n_atoms));
    if (comp.probability == 0.0 || excited == 0) continue;
    const int size = excited + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
    for (int j = 0; j + 1 < size; ++j) {
      // a^dag J_- couples (atoms excited = e - j, j photons) to (e - j - 1, j + 1).
      const double ka = excited - j;
      h(j, j + 1) = h(j + 1, j) = std::sqrt(ka * (n_atoms - ka + 1.0)) * std::sqrt(j + 1.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::MatrixXcd v = es.eigenvectors().cast<Complex>();
    Eigen::VectorXcd phases(size);
    for (int j = 0; j < size; ++j) phases(j) = std::polar(1.0, -k.g_tau * es.eigenvalues()(j));
    const Eigen::VectorXcd evolved = v * phases.asDiagonal() * v.row(0).adjoint();
    for (int j = 1; j < size; ++j) mean_n += comp.probability * j * std::norm(evolved(j));
  }
  return mean_n;
}

}  // namespace sasr

#endif  // SASR_INTERACTION_HPP
