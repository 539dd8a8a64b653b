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

// Quantum-trajectory unraveling of the pumped lossy cavity. Each trajectory
// follows a pure field state: atoms arrive as a Poisson or regular stream,
// cross the cavity instantaneously (decay is suspended during the transit)
// and are then measured in the energy basis. Between arrivals the field
// follows the photon-counting unraveling of cavity loss: the no-jump
// evolution c_n -> c_n exp(-gamma_c n t) and jumps psi -> a psi. Jump times
// are sampled exactly from the waiting-time distribution, so there is no
// time-step bias.
//
// Pump phase noise: the pump phase is a Wiener process with variance
// 2 pi linewidth dt, read off at every arrival. Transit dephasing by a factor
// f replaces an atom's phase with a uniformly random one with probability
// 1 - f, which shrinks the ensemble coherence by exactly f.

#ifndef SASR_TRAJECTORY_HPP
#define SASR_TRAJECTORY_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "sasr/analytic.hpp"
#include "sasr/atom.hpp"
#include "sasr/errors.hpp"
#include "sasr/hilbert.hpp"
#include "sasr/interaction.hpp"

namespace sasr {

/// Largest tolerated population in the top Fock level along a trajectory.
inline constexpr double kTrajectoryTailTolerance = 1e-6;

struct TrajectoryConfig {
  double r = 0.0;          // atom injection rate [1/s]
  double gamma_c = 0.0;    // cavity field decay rate [rad/s]
  double g = 0.0;          // atom-cavity coupling [rad/s]
  double tau = 0.0;        // transit time [s]
  double theta = 0.0;      // pump pulse area [rad]
  double phi = 0.0;        // initial pump phase [rad]
  Injection injection = Injection::poisson;
  double linewidth = 0.0;  // pump RMS linewidth [Hz]
  double transit_dephase = 1.0;  // retained fraction of |rho_eg|
  int n_max = 20;
  double t_end = 0.0;      // [s]
  std::uint64_t seed = 1;
  int n_trajectories = 1;
  int samples = 401;       // output grid points over [0, t_end]

  double n_c() const { return r / gamma_c; }
  double g_tau() const { return g * tau; }

  void validate() const {
    detail::require(r >= 0.0 && gamma_c >= 0.0 && g >= 0.0 && tau >= 0.0 && linewidth >= 0.0,
                    "TrajectoryConfig: rates and times must be >= 0");
    detail::require(transit_dephase >= 0.0 && transit_dephase <= 1.0,
                    "TrajectoryConfig: transit_dephase must lie in [0, 1]");
    detail::require(n_max >= 1, "TrajectoryConfig: n_max must be >= 1");
    detail::require(t_end >= 0.0 && std::isfinite(t_end), "TrajectoryConfig: t_end must be >= 0");
    detail::require(n_trajectories >= 1, "TrajectoryConfig: n_trajectories must be >= 1");
    detail::require(samples >= 2, "TrajectoryConfig: samples must be >= 2");
  }
};

enum class EventKind { atom_excited, atom_ground, photon_loss };

struct JumpEvent {
  double t;
  EventKind kind;

  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

struct TrajectoryResult {
  std::vector<double> times;   // uniform grid over [0, t_end]
  std::vector<double> mean_n;  // <n> of the conditional state at each time
  std::vector<JumpEvent> events;
  double steady_mean = 0.0;    // average of mean_n over the final quarter
  long window_photon_losses = 0;  // photon losses in the final quarter
  double window_start = 0.0;
};

namespace detail {

/// No-jump evolution of a normalized state over dt, via the populations
/// p_n = |c_n|^2: survival S(dt) = sum p_n exp(-2 gamma n dt).
class NoJumpClock {
 public:
  NoJumpClock(const PureFieldState& psi, double gamma_c)
      : p_(psi.amplitudes().cwiseAbs2()), gamma_(gamma_c) {}

  double survival(double dt) const {
    double s = 0.0;
    for (Eigen::Index n = 0; n < p_.size(); ++n) s += p_(n) * std::exp(-2.0 * gamma_ * n * dt);
    return s;
  }

  double mean_photon(double dt) const {
    double s = 0.0, w = 0.0;
    for (Eigen::Index n = 0; n < p_.size(); ++n) {
      const double v = p_(n) * std::exp(-2.0 * gamma_ * n * dt);
      s += v;
      w += static_cast<double>(n) * v;
    }
    return w / s;
  }

  /// Solves survival(dt) = u on [0, horizon], given survival(horizon) <= u.
  double jump_time(double u, double horizon) const {
    double lo = 0.0, hi = horizon;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (survival(mid) > u ? lo : hi) = mid;
    }
    return hi;
  }

 private:
  Eigen::VectorXd p_;
  double gamma_;
};

inline PureFieldState no_jump_evolve(const PureFieldState& psi, double gamma_c, double dt) {
  Eigen::VectorXcd c = psi.amplitudes();
  for (Eigen::Index n = 1; n < c.size(); ++n) c(n) *= std::exp(-gamma_c * n * dt);
  return PureFieldState(std::move(c));
}

inline PureFieldState lower(const PureFieldState& psi) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(psi.dim());
  for (Eigen::Index n = 1; n < psi.dim(); ++n) c(n - 1) = std::sqrt(static_cast<double>(n)) * psi(n);
  return PureFieldState(std::move(c));
}

inline void check_trajectory_tail(const PureFieldState& psi, double t) {
  const double top = std::norm(psi(psi.dim() - 1));
  if (top > kTrajectoryTailTolerance) {
    throw TruncationError("run_trajectory: top-level population " + std::to_string(top) +
                          " at t=" + std::to_string(t) + " s");
  }
}

}  // namespace detail

/// One trajectory from the vacuum. Deterministic for a given (cfg, seed).
inline TrajectoryResult run_trajectory(const TrajectoryConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  TrajectoryResult res;
  res.times.resize(cfg.samples);
  res.mean_n.assign(cfg.samples, 0.0);
  for (int i = 0; i < cfg.samples; ++i) res.times[i] = cfg.t_end * i / (cfg.samples - 1);
  res.window_start = 0.75 * cfg.t_end;

  const KickParams kick{cfg.g_tau()};
  const double inf = std::numeric_limits<double>::infinity();
  auto next_interval = [&] {
    if (cfg.r <= 0.0) return inf;
    if (cfg.injection == Injection::regular) return 1.0 / cfg.r;
    return -std::log1p(-uniform(rng)) / cfg.r;
  };

  PureFieldState psi = PureFieldState::fock(0, cfg.n_max);
  double t = 0.0;
  double pump_phase = cfg.phi;
  double last_arrival = 0.0;
  double next_arrival = next_interval();
  std::size_t sample = 0;
  const double scramble_probability = 1.0 - cfg.transit_dephase;

  while (true) {
    const double u = uniform(rng);
    const detail::NoJumpClock clock(psi, cfg.gamma_c);
    const double horizon = std::min(next_arrival, cfg.t_end);
    double t_event = horizon;
    bool jump = false;
    if (clock.survival(horizon - t) <= u) {
      t_event = t + clock.jump_time(u, horizon - t);
      jump = true;
    }
    const bool last_segment = !jump && horizon >= cfg.t_end;
    while (sample < res.times.size() &&
           (res.times[sample] < t_event || (last_segment && res.times[sample] <= t_event))) {
      res.mean_n[sample] = clock.mean_photon(res.times[sample] - t);
      ++sample;
    }
    if (last_segment) break;

    psi = detail::no_jump_evolve(psi, cfg.gamma_c, t_event - t);
    t = t_event;
    if (jump) {
      psi = detail::lower(psi);
      res.events.push_back({t, EventKind::photon_loss});
      if (t >= res.window_start) ++res.window_photon_losses;
      continue;
    }

    // Atom arrival.
    if (cfg.linewidth > 0.0) {
      pump_phase += std::sqrt(2.0 * M_PI * cfg.linewidth * (t - last_arrival)) * normal(rng);
    }
    last_arrival = t;
    double atom_phase = pump_phase;
    if (scramble_probability > 0.0 && uniform(rng) < scramble_probability) {
      atom_phase = 2.0 * M_PI * uniform(rng);
    }
    const JointState joint = jc_kick_pure(psi, PureAtom::from_pulse(cfg.theta, atom_phase), kick);
    AtomMeasurement meas = measure_atom(joint, uniform(rng));
    psi = std::move(meas.field);
    res.events.push_back(
        {t, meas.outcome == AtomOutcome::excited ? EventKind::atom_excited : EventKind::atom_ground});
    detail::check_trajectory_tail(psi, t);
    next_arrival = t + next_interval();
  }

  double acc = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < res.times.size(); ++i) {
    if (res.times[i] >= res.window_start) {
      acc += res.mean_n[i];
      ++count;
    }
  }
  res.steady_mean = count > 0 ? acc / count : 0.0;
  return res;
}

struct EnsembleResult {
  std::vector<double> times;
  std::vector<double> mean_n;       // ensemble average of <n>(t)
  double steady_mean = 0.0;         // mean of per-trajectory final-quarter averages
  double steady_stderr = 0.0;
  double jump_rate = 0.0;           // photon losses per second in the final quarter
  double jump_rate_stderr = 0.0;
  std::vector<double> trajectory_steady;
  int n_trajectories = 0;
  double n_c = 0.0;
  double g_tau = 0.0;
};

/// Runs trajectories with seeds cfg.seed + i for i < cfg.n_trajectories on
/// `threads` workers (0 = hardware concurrency). Results are combined in
/// seed order, so the output does not depend on scheduling.
inline EnsembleResult run_ensemble(const TrajectoryConfig& cfg, unsigned threads = 0) {
  cfg.validate();
  detail::require(cfg.n_trajectories >= 2, "run_ensemble: need at least 2 trajectories");
  const int count = cfg.n_trajectories;
  std::vector<TrajectoryResult> runs(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        runs[i] = run_trajectory(cfg, cfg.seed + static_cast<std::uint64_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EnsembleResult out;
  out.n_trajectories = count;
  out.n_c = cfg.n_c();
  out.g_tau = cfg.g_tau();
  out.times = runs.front().times;
  out.mean_n.assign(out.times.size(), 0.0);
  const double window = cfg.t_end - runs.front().window_start;
  std::vector<double> rates;
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < out.mean_n.size(); ++i) out.mean_n[i] += r.mean_n[i] / count;
    out.trajectory_steady.push_back(r.steady_mean);
    rates.push_back(window > 0.0 ? r.window_photon_losses / window : 0.0);
  }
  auto mean_and_stderr = [count](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= count;
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    var /= (count - 1);
    return std::pair<double, double>{m, std::sqrt(var / count)};
  };
  std::tie(out.steady_mean, out.steady_stderr) = mean_and_stderr(out.trajectory_steady);
  std::tie(out.jump_rate, out.jump_rate_stderr) = mean_and_stderr(rates);
  return out;
}

}  // namespace sasr

#endif  // SASR_TRAJECTORY_HPP
