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

// Command-line front end. Every subcommand reads an optional (partial) JSON
// config, runs one pipeline and writes CSV + JSON metadata under --out.
// On failure a JSON error object is printed to stderr and the exit code is
// nonzero.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sasr/experiments.hpp"

namespace {

using sasr::Json;
using sasr::RunConfig;

struct Globals {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> n_max;
};

Json read_overrides(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw sasr::IoError("cannot open config " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw sasr::InvalidArgument("config " + path + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("pipeline")) return doc["config"];
  return doc;
}

Json overrides(const Globals& g) {
  Json j = read_overrides(g.config);
  if (g.seed) j["seed"] = *g.seed;
  if (g.n_max) j["n_max"] = *g.n_max;
  return j;
}

RunConfig load(const Globals& g) {
  RunConfig base;
  base.mean_atoms = 1.0;
  return sasr::apply_overrides(base, overrides(g));
}

Json write(const Globals& g, const std::string& stem, const sasr::SweepResult& res) {
  return sasr::write_outputs(g.out, stem, res).string();
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

void cmd_steady(const Globals& g) {
  const RunConfig cfg = load(g);
  const sasr::AtomState a = cfg.atom();
  const double n_c = cfg.resolved_n_c();
  const sasr::KickParams kick{cfg.kick_g_tau()};
  const sasr::FieldState s = cfg.n_max > 0
                                 ? sasr::steady_state(sasr::MasterParams{n_c, kick, a, cfg.n_max})
                                 : sasr::steady_state_auto(n_c, a, kick);
  const double base = sasr::steady_mean_photon(cfg, n_c, sasr::AtomState{a.rho_ee, 0.0});
  sasr::SweepResult res;
  res.push(n_c, sasr::mean_photon(s), base);
  res.metadata = sasr::run_metadata(cfg, "steady");
  res.metadata["axis"] = "n_c";
  res.metadata["n_max"] = s.n_max();
  const auto pn = sasr::photon_distribution(s);
  res.metadata["photon_distribution"] = std::vector<double>(pn.data(), pn.data() + pn.size());
  res.metadata["purity"] = sasr::purity(s);
  const sasr::Complex alpha = sasr::coherent_alpha(n_c, a.rho_eg, kick.g_tau);
  try {
    res.metadata["fidelity_to_coherent"] = sasr::fidelity_to_coherent(s, alpha);
  } catch (const sasr::TruncationError&) {
    res.metadata["fidelity_to_coherent"] = nullptr;
  }
  Json summary{{"mean_n", res.mean_n[0]}, {"baseline", base}, {"n_max", s.n_max()},
               {"csv", write(g, "steady", res)}};
  print(summary);
}

void cmd_sweep_pump(const Globals& g) {
  RunConfig cfg = load(g);
  if (cfg.grid.empty()) cfg.grid = sasr::detail::linspace(0.0, 2.0 * M_PI, 41);
  print(Json{{"csv", write(g, "sweep_pump", sasr::sweep_pump(cfg, cfg.grid))}});
}

void cmd_sweep_atoms(const Globals& g) {
  RunConfig cfg = load(g);
  if (cfg.grid.empty()) cfg.grid = sasr::detail::logspace(0.02, 2.0, 21);
  const auto res = sasr::sweep_atoms(cfg, cfg.grid);
  print(Json{{"csv", write(g, "sweep_atoms", res)}});
}

void cmd_lossless(const Globals& g) {
  const RunConfig cfg = load(g);
  print(Json{{"csv", write(g, "lossless", sasr::lossless_run(cfg, cfg.atoms))}});
}

void cmd_transient(const Globals& g, const std::string& mode) {
  const RunConfig cfg = load(g);
  const auto m = mode == "discrete" ? sasr::EvolveMode::discrete_regular : sasr::EvolveMode::coarse_ode;
  print(Json{{"csv", write(g, "transient", sasr::transient_run(cfg, m))}});
}

void cmd_trajectory(const Globals& g) {
  const RunConfig cfg = load(g);
  sasr::EnsembleResult ens;
  const auto res = sasr::trajectory_run(cfg, &ens);
  print(Json{{"steady_mean", ens.steady_mean},
             {"steady_stderr", ens.steady_stderr},
             {"jump_rate", ens.jump_rate},
             {"jump_rate_stderr", ens.jump_rate_stderr},
             {"csv", write(g, "trajectory", res)}});
}

void cmd_dicke(const Globals& g) {
  const RunConfig cfg = load(g);
  const sasr::PureAtom atom = sasr::PureAtom::from_pulse(cfg.theta, cfg.phi);
  const sasr::EnsembleSpec spec{cfg.atoms, atom.c_e, atom.c_g};
  Json comps = Json::array();
  for (const auto& c : sasr::decompose_product_state(spec)) {
    comps.push_back({{"m", c.m}, {"probability", c.probability}, {"rate", sasr::dicke_rate(cfg.atoms, c.m)}});
  }
  Json out{{"n_atoms", cfg.atoms},
           {"ensemble_rate", sasr::ensemble_rate(cfg.atoms, spec.atom())},
           {"components", comps},
           {"bunched_mean_n", sasr::bunched_emission(spec, sasr::KickParams{cfg.kick_g_tau()})},
           {"config", cfg}};
  if (cfg.atoms <= sasr::kMaxBruteForceAtoms) out["brute_force_rate"] = sasr::brute_force_rate(spec);
  print(out);
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void cmd_analytic(const Globals& g) {
  const RunConfig cfg = load(g);
  const sasr::AtomState a = cfg.atom();
  const double n_c = cfg.resolved_n_c(), gt = cfg.kick_g_tau();
  const auto beta = sasr::beta_factors(n_c, a, gt);
  const sasr::Complex alpha = sasr::coherent_alpha(n_c, a.rho_eg, gt);
  print(Json{{"n_c", n_c},
             {"mean_atoms", cfg.resolved_mean_atoms()},
             {"g_tau", gt},
             {"mean_n_noncollective", optional_json(sasr::mean_n_noncollective(n_c * gt * gt, a.rho_ee))},
             {"mean_n_total", optional_json(sasr::mean_n_total(n_c, a, gt))},
             {"coherent_alpha", {alpha.real(), alpha.imag()}},
             {"n_eff", sasr::n_eff(cfg.injection, n_c)},
             {"emission_rate_per_atom", sasr::emission_rate_per_atom(sasr::n_eff(cfg.injection, n_c), a,
                                                                     gt / cfg.tau, cfg.tau)},
             {"dominance_threshold", sasr::dominance_threshold(a)},
             {"saturation_nc", optional_json(sasr::saturation_nc(gt, cfg.theta))},
             {"beta", beta.beta},
             {"beta_coll", optional_json(beta.beta_coll)},
             {"semiclassical_mean_n", sasr::semiclassical_mean_photon(n_c, a, gt)}});
}

void cmd_preset(const Globals& g, const std::string& name) {
  const auto out = sasr::run_preset(name, overrides(g));
  Json files = Json::array();
  for (const auto& [stem, res] : out.files) files.push_back(write(g, stem, res));
  print(Json{{"preset", name}, {"csv", files}});
}

int fail(const char* kind, const std::string& message) {
  std::cerr << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-atom superradiance simulator"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON config (partial configs are merged onto defaults)");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--n-max", g.n_max, "Fock cutoff (default: automatic)");

  std::string mode = "coarse";
  std::string preset;
  auto* steady = app.add_subcommand("steady", "Master-equation steady state");
  auto* pump = app.add_subcommand("sweep-pump", "Steady <n> versus pulse area");
  auto* atoms = app.add_subcommand("sweep-atoms", "Steady <n> versus atom number");
  auto* lossless = app.add_subcommand("lossless", "Atom-by-atom filling of a lossless cavity");
  auto* transient = app.add_subcommand("transient", "<n>(t) from the vacuum");
  transient->add_option("--mode", mode, "coarse (ODE) or discrete (regular kicks)")
      ->check(CLI::IsMember({"coarse", "discrete"}))
      ->capture_default_str();
  auto* trajectory = app.add_subcommand("trajectory", "Quantum-trajectory ensemble");
  auto* dicke = app.add_subcommand("dicke", "Dicke-state decomposition and rates");
  auto* analytic = app.add_subcommand("analytic", "Closed-form estimates");
  auto* pre = app.add_subcommand("preset", "Run a named preset sweep");
  pre->add_option("name", preset, "Preset name")->required()->check(CLI::IsMember(sasr::preset_names()));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*steady) cmd_steady(g);
    else if (*pump) cmd_sweep_pump(g);
    else if (*atoms) cmd_sweep_atoms(g);
    else if (*lossless) cmd_lossless(g);
    else if (*transient) cmd_transient(g, mode);
    else if (*trajectory) cmd_trajectory(g);
    else if (*dicke) cmd_dicke(g);
    else if (*analytic) cmd_analytic(g);
    else if (*pre) cmd_preset(g, preset);
  } catch (const sasr::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
