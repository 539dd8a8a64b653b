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

// Coarse-grained master equation of the cavity field pumped by a Poisson
// stream of atoms:
//
//   dQ/dt = n_c (K[Q] - Q) + 2 a Q a^dag - a^dag a Q - Q a^dag a,
//
// with time in units of 1/gamma_c and K the single-transit map of
// interaction.hpp. Steady states are solved on the Hermitian-reduced real
// system (one real unknown per diagonal element, two per upper-triangular
// element) with one diagonal equation replaced by the trace condition.

#ifndef SASR_STEADY_HPP
#define SASR_STEADY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>

#include "sasr/analytic.hpp"
#include "sasr/atom.hpp"
#include "sasr/errors.hpp"
#include "sasr/hilbert.hpp"
#include "sasr/interaction.hpp"

namespace sasr {

/// Parameters of the dimensionless master equation.
struct MasterParams {
  double n_c = 1.0;  // atoms per field decay time, r / gamma_c
  KickParams kick;
  AtomState atom;
  int n_max = 1;

  void validate() const {
    detail::require(n_c > 0.0 && std::isfinite(n_c), "MasterParams: n_c must be > 0");
    detail::require(n_max >= 1, "MasterParams: n_max must be >= 1");
    detail::require(is_physical(atom, 1e-10), "MasterParams: atom state is not a density matrix");
    kick.validate();
  }
};

/// Default memory guard for the dense generator: dim^2 * dim^2 complex entries.
inline constexpr Eigen::Index kDenseGeneratorMaxSize = 2500;

namespace detail {

/// Visits every term of dQ(n,m)/dt = sum coeff * Q(a,b).
template <typename Visitor>
inline void for_each_generator_term(const MasterParams& p, const RabiTable& t, int n, int m,
                                    Visitor&& visit) {
  const int dim = p.n_max + 1;
  for_each_kick_term(t, p.atom, n, m, dim,
                     [&](int a, int b, Complex c) { visit(a, b, p.n_c * c); });
  visit(n, m, Complex(-p.n_c - static_cast<double>(n + m)));
  if (n + 1 < dim && m + 1 < dim) {
    visit(n + 1, m + 1, Complex(2.0 * std::sqrt((n + 1.0) * (m + 1.0))));
  }
}

}  // namespace detail

/// Dense generator acting on vec(Q) with column-major index n + m * dim.
/// Throws ResourceError when dim^2 exceeds `max_size`.
inline Eigen::MatrixXcd build_generator(const MasterParams& p,
                                        Eigen::Index max_size = kDenseGeneratorMaxSize) {
  p.validate();
  const int dim = p.n_max + 1;
  const Eigen::Index size = static_cast<Eigen::Index>(dim) * dim;
  if (size > max_size) {
    throw ResourceError("build_generator: dim^2 = " + std::to_string(size) + " exceeds limit " +
                        std::to_string(max_size) + "; use the sparse steady-state solver");
  }
  const RabiTable t(p.kick.g_tau, p.n_max);
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(size, size);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      const Eigen::Index row = n + static_cast<Eigen::Index>(m) * dim;
      detail::for_each_generator_term(p, t, n, m, [&](int a, int b, Complex c) {
        l(row, a + static_cast<Eigen::Index>(b) * dim) += c;
      });
    }
  }
  return l;
}

/// dQ/dt for the given Q, without forming the generator.
inline Eigen::MatrixXcd apply_generator(const MasterParams& p, const Eigen::MatrixXcd& q) {
  const int dim = p.n_max + 1;
  detail::require(q.rows() == dim && q.cols() == dim, "apply_generator: dimension mismatch");
  const RabiTable t(p.kick.g_tau, p.n_max);
  Eigen::MatrixXcd out(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      Complex acc = 0.0;
      detail::for_each_generator_term(p, t, n, m, [&](int a, int b, Complex c) { acc += c * q(a, b); });
      out(n, m) = acc;
    }
  }
  return out;
}

/// max |dQ/dt| at Q.
inline double generator_residual(const MasterParams& p, const FieldState& s) {
  return apply_generator(p, s.matrix()).cwiseAbs().maxCoeff();
}

enum class SteadyMethod { automatic, direct, iterative };

struct SteadyOptions {
  SteadyMethod method = SteadyMethod::automatic;
  int direct_max_dim = 250;  // automatic: sparse LU up to here, BiCGSTAB above
  int iterative_max_iterations = 20000;
  double iterative_tolerance = 1e-14;
  double residual_tolerance = 1e-9;
  bool check_tail = true;
};

namespace detail {

/// Maps the upper triangle of a Hermitian dim x dim matrix onto real
/// unknowns ordered by diagonal offset d = m - n, which keeps the reduced
/// system banded.
class HermitianLayout {
 public:
  explicit HermitianLayout(int dim) : dim_(dim), offset_(dim + 1, 0) {
    offset_[0] = 0;
    offset_[1] = dim;
    for (int d = 1; d < dim; ++d) offset_[d + 1] = offset_[d] + 2 * (dim - d);
  }

  Eigen::Index size() const { return offset_[dim_]; }
  // Valid for n <= m. For n == m only the real slot exists.
  Eigen::Index re(int n, int m) const {
    const int d = m - n;
    return d == 0 ? n : offset_[d] + 2 * n;
  }
  Eigen::Index im(int n, int m) const { return re(n, m) + 1; }

 private:
  int dim_;
  std::vector<Eigen::Index> offset_;
};

inline Eigen::SparseMatrix<double> reduced_system(const MasterParams& p, const HermitianLayout& lay) {
  const int dim = p.n_max + 1;
  const RabiTable t(p.kick.g_tau, p.n_max);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(lay.size()) * 18);

  for (int d = 0; d < dim; ++d) {
    for (int n = 0; n + d < dim; ++n) {
      const int m = n + d;
      const Eigen::Index row_re = lay.re(n, m);
      const bool diag = (d == 0);
      if (diag && n == 0) continue;  // replaced by the trace condition
      for_each_generator_term(p, t, n, m, [&](int a, int b, Complex c) {
        // Q(a,b) = xr + i s xi, with s = -1 when (a,b) is below the diagonal.
        int lo = a, hi = b;
        double s = 1.0;
        if (a > b) {
          std::swap(lo, hi);
          s = -1.0;
        }
        const Eigen::Index xr = lay.re(lo, hi);
        // real part of c Q: cr xr - s ci xi;  imaginary part: ci xr + s cr xi
        trip.emplace_back(row_re, xr, c.real());
        if (!diag) trip.emplace_back(row_re + 1, xr, c.imag());
        if (lo != hi) {
          const Eigen::Index xi = xr + 1;
          trip.emplace_back(row_re, xi, -s * c.imag());
          if (!diag) trip.emplace_back(row_re + 1, xi, s * c.real());
        }
      });
    }
  }
  for (int n = 0; n < dim; ++n) trip.emplace_back(lay.re(0, 0), lay.re(n, n), 1.0);

  Eigen::SparseMatrix<double> a(lay.size(), lay.size());
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  return a;
}

inline FieldState unpack_hermitian(const Eigen::VectorXd& x, const HermitianLayout& lay, int dim) {
  Eigen::MatrixXcd q(dim, dim);
  for (int n = 0; n < dim; ++n) {
    q(n, n) = x(lay.re(n, n));
    for (int m = n + 1; m < dim; ++m) {
      const Complex v(x(lay.re(n, m)), x(lay.im(n, m)));
      q(n, m) = v;
      q(m, n) = std::conj(v);
    }
  }
  return FieldState(std::move(q));
}

}  // namespace detail

/// Stationary field of the master equation at the cutoff p.n_max.
/// Throws TruncationError if the top level holds more than 1e-8.
inline FieldState steady_state(const MasterParams& p, const SteadyOptions& opt = {}) {
  p.validate();
  const int dim = p.n_max + 1;
  const detail::HermitianLayout lay(dim);
  const Eigen::SparseMatrix<double> a = detail::reduced_system(p, lay);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(lay.size());
  b(lay.re(0, 0)) = 1.0;

  auto solve_direct = [&] {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) {
      throw NumericalDegeneracy("steady_state: sparse LU failed: " + lu.lastErrorMessage());
    }
    Eigen::VectorXd x = lu.solve(b);
    const Eigen::VectorXd r = b - a * x;  // one round of iterative refinement
    x += lu.solve(r);
    return x;
  };
  auto solve_iterative = [&] {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
    solver.preconditioner().setDroptol(1e-6);
    solver.preconditioner().setFillfactor(20);
    solver.setMaxIterations(opt.iterative_max_iterations);
    solver.setTolerance(opt.iterative_tolerance);
    solver.compute(a);
    if (solver.info() != Eigen::Success) {
      throw ConvergenceError("steady_state: preconditioner setup failed");
    }
    Eigen::VectorXd x = solver.solve(b);
    if (solver.info() != Eigen::Success) {
      throw ConvergenceError("steady_state: BiCGSTAB did not converge (error " +
                             std::to_string(solver.error()) + ")");
    }
    return x;
  };

  Eigen::VectorXd x;
  switch (opt.method) {
    case SteadyMethod::direct:
      x = solve_direct();
      break;
    case SteadyMethod::iterative:
      x = solve_iterative();
      break;
    case SteadyMethod::automatic:
      if (dim <= opt.direct_max_dim) {
        x = solve_direct();
      } else {
        try {
          x = solve_iterative();
        } catch (const ConvergenceError&) {
          x = solve_direct();
        }
      }
      break;
  }

  FieldState s = detail::unpack_hermitian(x, lay, dim);
  const double residual = generator_residual(p, s);
  if (!(residual <= opt.residual_tolerance)) {
    throw ConvergenceError("steady_state: residual " + std::to_string(residual) +
                           " exceeds tolerance");
  }
  if (opt.check_tail && s(dim - 1, dim - 1).real() > kTailTolerance) {
    throw TruncationError("steady_state: top-level population " +
                          std::to_string(s(dim - 1, dim - 1).real()) + " at n_max=" +
                          std::to_string(p.n_max));
  }
  return s;
}

/// Mean-field estimate of the saturated photon number: the field amplitude
/// x = sqrt(n) g tau where one transit (a Bloch rotation by 2x) no longer
/// feeds the field faster than it decays. Zero below any gain threshold.
inline double semiclassical_mean_photon(double n_c, const AtomState& a, double g_tau) {
  if (g_tau <= 0.0) return 0.0;
  const double w = a.rho_ee - a.rho_gg();
  const double coh = std::abs(a.rho_eg);
  const double inv_gt2 = 1.0 / (g_tau * g_tau);
  auto balance = [&](double x) {
    return n_c * (0.5 * w * (1.0 - std::cos(2.0 * x)) + coh * std::sin(2.0 * x)) - 2.0 * x * x * inv_gt2;
  };
  const int steps = 4000;
  const double x_hi = 2.0 * M_PI;
  double prev_x = x_hi / steps;
  double prev = balance(prev_x);
  if (prev <= 0.0) return 0.0;
  for (int i = 2; i <= steps; ++i) {
    const double x = x_hi * i / steps;
    const double v = balance(x);
    if (v <= 0.0) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (balance(mid) > 0.0 ? lo : hi) = mid;
      }
      const double xs = 0.5 * (lo + hi);
      return xs * xs * inv_gt2;
    }
    prev_x = x;
    prev = v;
  }
  return x_hi * x_hi * inv_gt2;
}

/// Estimated <n> used to pick a cutoff: the closed-form sum where it is
/// finite, capped by the mean-field saturation level.
inline double estimate_mean_photon(double n_c, const AtomState& a, double g_tau) {
  const auto closed = mean_n_total(n_c, a, g_tau);
  const double sc = semiclassical_mean_photon(n_c, a, g_tau);
  if (sc > 0.0) return closed ? std::min(*closed, sc) : sc;
  return closed ? *closed : 0.0;
}

/// ceil(n + 10 sqrt(n) + 10)
inline int default_cutoff(double mean_photon_estimate) {
  const double n = std::max(0.0, mean_photon_estimate);
  return static_cast<int>(std::ceil(n + 10.0 * std::sqrt(n) + 10.0));
}

/// Steady state with an automatically chosen cutoff, doubled until the tail
/// check passes or `max_n_max` is exceeded (ResourceError).
inline FieldState steady_state_auto(double n_c, const AtomState& atom, const KickParams& kick,
                                    const SteadyOptions& opt = {}, int max_n_max = 2048) {
  MasterParams p{n_c, kick, atom, default_cutoff(estimate_mean_photon(n_c, atom, kick.g_tau))};
  for (;;) {
    if (p.n_max > max_n_max) {
      throw ResourceError("steady_state_auto: required cutoff exceeds " + std::to_string(max_n_max));
    }
    try {
      return steady_state(p, opt);
    } catch (const TruncationError&) {
      p.n_max *= 2;
    }
  }
}

enum class EvolveMode { coarse_ode, discrete_regular };

struct EvolveOptions {
  int samples = 101;        // coarse_ode: uniformly spaced output times
  double tolerance = 1e-10;  // coarse_ode: absolute and relative step error
};

struct TimeSample {
  double t;  // units of 1/gamma_c
  FieldState state;
};

namespace detail {

inline FieldState hermitize(const Eigen::MatrixXcd& q) {
  return FieldState(0.5 * (q + q.adjoint()));
}

}  // namespace detail

/// Transient evolution from q0 up to t_end (units of 1/gamma_c).
///
/// coarse_ode integrates the master equation with an adaptive Dormand-Prince
/// stepper. discrete_regular injects one atom every 1/n_c: for atom k at
/// t_k = k / n_c the field decays exactly over the preceding interval and two
/// samples are emitted at t_k, just before and just after the transit.
/// Both modes start with the sample (0, q0).
inline std::vector<TimeSample> evolve(const MasterParams& p, const FieldState& q0, double t_end,
                                      EvolveMode mode, const EvolveOptions& opt = {}) {
  p.validate();
  detail::require(q0.n_max() == p.n_max, "evolve: q0 cutoff differs from params");
  detail::require(t_end >= 0.0 && std::isfinite(t_end), "evolve: t_end must be >= 0");
  std::vector<TimeSample> out;
  out.push_back({0.0, q0});
  if (t_end == 0.0) return out;

  if (mode == EvolveMode::discrete_regular) {
    const double period = 1.0 / p.n_c;
    FieldState s = q0;
    for (long k = 1;; ++k) {
      const double t = static_cast<double>(k) * period;
      if (t > t_end * (1.0 + 1e-12)) break;
      s = apply_decay(s, 1.0, period);
      out.push_back({t, s});
      s = jc_kick(s, p.atom, p.kick);
      out.push_back({t, s});
    }
    return out;
  }

  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  const int dim = p.n_max + 1;
  auto pack = [dim](const Eigen::MatrixXcd& q) {
    State x(2 * static_cast<std::size_t>(dim) * dim);
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n < dim; ++n) {
        const std::size_t i = 2 * (static_cast<std::size_t>(m) * dim + n);
        x[i] = q(n, m).real();
        x[i + 1] = q(n, m).imag();
      }
    return x;
  };
  auto unpack = [dim](const State& x) {
    Eigen::MatrixXcd q(dim, dim);
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n < dim; ++n) {
        const std::size_t i = 2 * (static_cast<std::size_t>(m) * dim + n);
        q(n, m) = Complex(x[i], x[i + 1]);
      }
    return q;
  };
  auto rhs = [&](const State& x, State& dxdt, double /*t*/) {
    dxdt = pack(apply_generator(p, unpack(x)));
  };

  const int samples = std::max(2, opt.samples);
  std::vector<double> times(samples);
  for (int i = 0; i < samples; ++i) times[i] = t_end * i / (samples - 1);
  State x = pack(q0.matrix());
  auto stepper = odeint::make_controlled(opt.tolerance, opt.tolerance, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), t_end / 1000.0,
                            [&](const State& xs, double t) {
                              if (t > 0.0) out.push_back({t, detail::hermitize(unpack(xs))});
                            },
                            odeint::max_step_checker(200000));
  } catch (const odeint::step_adjustment_error& e) {
    throw ConvergenceError(std::string("evolve: step size underflow: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw ConvergenceError(std::string("evolve: integration stalled: ") + e.what());
  }
  return out;
}

}  // namespace sasr

#endif  // SASR_STEADY_HPP
