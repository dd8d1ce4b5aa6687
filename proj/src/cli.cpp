// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
#include "darkstate/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "darkstate/entanglement.hpp"
#include "darkstate/montecarlo.hpp"
#include "darkstate/propagator.hpp"

namespace darkstate::cli {

namespace {

std::string num(double x) { return fmt::format("{:.12g}", x); }

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << num(v);
    first = false;
  }
  out << '\n';
}

double single_eta(const RunConfig& cfg) {
  if (cfg.eta_list.size() != 1) {
    throw InvalidParameters("this command takes exactly one --eta value");
  }
  return cfg.eta_list.front();
}

Parameters with_eta(Parameters p, double eta) {
  p.eta = eta;
  p.validate();
  return p;
}

std::vector<double> entanglement_grid(const RunConfig& cfg) {
  const double onset = asymptotic_onset(cfg.params);
  if (!(cfg.t_max > onset)) {
    throw InvalidParameters(
        fmt::format("--tmax must exceed the asymptotic onset 5/kappa = {}", num(onset)));
  }
  return time_grid(onset, cfg.t_max, cfg.steps);
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (steps < 2) throw InvalidParameters("--steps must be >= 2");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidParameters("--tmax must be > 0");
  if (command == Command::Trajectories && trajectories < 1) {
    throw InvalidParameters("--trajectories must be >= 1");
  }
  if (eta_list.empty()) throw InvalidParameters("--eta needs at least one value");
  for (double eta : eta_list) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameters("--eta values must lie in [0, 1]");
  }
  if (!(p_detect >= 0.0 && p_detect <= 1.0)) {
    throw InvalidParameters("--p-detect must lie in [0, 1]");
  }
  if (rounds < 0) throw InvalidParameters("--rounds must be >= 0");
}

RunConfig default_config(Command command) {
  RunConfig cfg;
  cfg.command = command;
  switch (command) {
    case Command::Fidelity:
      cfg.t_max = 500.0;
      cfg.eta_list = {1.0, 0.8};
      break;
    case Command::Entropy:
      cfg.t_max = 500.0;
      break;
    default:
      break;
  }
  return cfg;
}

std::vector<double> time_grid(double t0, double t1, int steps) {
  if (steps < 2) throw InvalidParameters("time grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(steps));
  const double dt = (t1 - t0) / (steps - 1);
  for (int i = 0; i < steps; ++i) grid[i] = t0 + dt * i;
  grid.back() = t1;
  return grid;
}

double asymptotic_onset(const Parameters& params) { return 5.0 / params.kappa; }

//---------------------------------------------------------------------------//
// Commands
//---------------------------------------------------------------------------//

void cmd_amplitudes(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  out << "t,P_100,P_010,P_001\n";
  for (double t : time_grid(0.0, cfg.t_max, cfg.steps)) {
    // Raw squared amplitudes of the unnormalised conditional state; they sum to P_0.
    const auto psi = psi_coh_closed_form(cfg.params, t);
    write_row(out, {t, psi.population(Basis::Cavity), psi.population(Basis::AtomA),
                    psi.population(Basis::AtomB)});
  }
}

void cmd_probabilities(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const Propagator prop(cfg.params);
  out << "t,P0,Pcav,Pspon\n";
  for (double t : time_grid(0.0, cfg.t_max, cfg.steps)) {
    const auto p = probabilities(prop, t);
    write_row(out, {t, p.p0, p.p_cav, p.p_spon});
  }
}

void cmd_fidelity(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  out << 't';
  for (double eta : cfg.eta_list) out << ",F_eta=" << fmt::format("{:g}", eta);
  out << '\n';

  const Propagator prop(cfg.params);
  for (double t : entanglement_grid(cfg)) {
    const auto p = probabilities(prop, t);
    out << num(t);
    for (double eta : cfg.eta_list) {
      const double lambda = p.p0 / (p.p0 + p.p_spon + (1.0 - eta) * p.p_cav);
      out << ',' << num(fidelity(ConditionedMixture{lambda, t}));
    }
    out << '\n';
  }
}

void cmd_entropy(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const Parameters params = with_eta(cfg.params, single_eta(cfg));
  out << "t,E\n";
  for (double t : entanglement_grid(cfg)) {
    const auto mix = mixture_at(params, t, params.eta);
    write_row(out, {t, relative_entropy_of_entanglement(mix)});
  }
}

void cmd_trajectories(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const Parameters params = with_eta(cfg.params, single_eta(cfg));
  const auto grid = time_grid(0.0, cfg.t_max, cfg.steps);
  const auto est = run_ensemble(params, cfg.trajectories, grid, cfg.seed);

  out << "t,p0_hat,pcav_hat,pspon_hat,stderr_p0,stderr_pcav,stderr_pspon\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    write_row(out, {grid[k], est.p0_hat[k], est.p_cav_hat[k], est.p_spon_hat[k],
                    est.stderr_p0[k], est.stderr_cav[k], est.stderr_spon[k]});
  }

  // z-scores against the exact probabilities, using the analytic binomial sigma.
  const Propagator prop(params);
  const double n = static_cast<double>(est.n);
  double worst = 0.0;
  double worst_t = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto exact = probabilities(prop, grid[k]);
    const double pairs[3][2] = {{est.p0_hat[k], exact.p0},
                                {est.p_cav_hat[k], exact.p_cav},
                                {est.p_spon_hat[k], exact.p_spon}};
    for (const auto& [hat, p] : pairs) {
      const double sigma = std::sqrt(p * (1.0 - p) / n);
      const double diff = std::abs(hat - p);
      const double z = sigma > 0.0 ? diff / sigma : (diff > 1e-12 ? INFINITY : 0.0);
      if (z > worst) {
        worst = z;
        worst_t = grid[k];
      }
    }
  }
  out << fmt::format("# n={} seed={} trapped={} max|z|={:.4g} at t={} within_3_sigma={}\n",
                     est.n, cfg.seed, est.trapped, worst, num(worst_t),
                     worst <= 3.0 ? "yes" : "no");
}

void cmd_repump(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const double eta = single_eta(cfg);
  ConditionedMixture mix = mixture_asymptotic(cfg.params, 0.0, eta);
  out << "round,lambda,click_probability,fidelity,E\n";
  write_row(out, {0.0, mix.lambda, 0.0, fidelity(mix), relative_entropy_of_entanglement(mix)});
  for (int r = 1; r <= cfg.rounds; ++r) {
    const auto step = repump_round(mix, cfg.p_detect);
    mix = step.mixture_after_no_click;
    write_row(out, {static_cast<double>(r), mix.lambda, step.click_probability, fidelity(mix),
                    relative_entropy_of_entanglement(mix)});
  }
}

void run(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::Amplitudes: return cmd_amplitudes(cfg, out);
    case Command::Probabilities: return cmd_probabilities(cfg, out);
    case Command::Fidelity: return cmd_fidelity(cfg, out);
    case Command::Entropy: return cmd_entropy(cfg, out);
    case Command::Trajectories: return cmd_trajectories(cfg, out);
    case Command::Repump: return cmd_repump(cfg, out);
  }
}

//---------------------------------------------------------------------------//
// Argument parsing
//---------------------------------------------------------------------------//

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional dynamics of two atoms in a leaky cavity", "darkstate-sim"};
  app.require_subcommand(1);

  const std::map<std::string, std::pair<Command, std::string>> commands{
      {"amplitudes", {Command::Amplitudes, "squared amplitudes of the no-click state"}},
      {"probabilities", {Command::Probabilities, "P0, Pcav, Pspon versus time"}},
      {"fidelity", {Command::Fidelity, "singlet fidelity for one or more detector efficiencies"}},
      {"entropy", {Command::Entropy, "relative entropy of entanglement versus time"}},
      {"trajectories", {Command::Trajectories, "quantum-jump ensemble estimates"}},
      {"repump", {Command::Repump, "repump purification rounds"}},
  };

  RunConfig parsed;
  std::map<std::string, CLI::App*> subs;
  std::vector<CLI::Option*> tmax_opts, eta_opts;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--ga", parsed.params.g_a, "atom a coupling");
    sub->add_option("--gb", parsed.params.g_b, "atom b coupling");
    sub->add_option("--kappa", parsed.params.kappa, "cavity amplitude decay rate");
    sub->add_option("--gamma", parsed.params.gamma, "atomic amplitude decay rate");
    eta_opts.push_back(sub->add_option("--eta", parsed.eta_list, "detector efficiency (comma list)")
                           ->delimiter(','));
    tmax_opts.push_back(sub->add_option("--tmax", parsed.t_max, "last time point"));
    sub->add_option("--steps", parsed.steps, "number of time points");
    sub->add_option("--trajectories", parsed.trajectories, "ensemble size");
    sub->add_option("--seed", parsed.seed, "master seed");
    sub->add_option("--out", parsed.output_path, "output file, '-' for stdout");
    if (entry.first == Command::Repump) {
      sub->add_option("--p-detect", parsed.p_detect, "per-round detection probability");
      sub->add_option("--rounds", parsed.rounds, "number of repump rounds");
    }
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  std::size_t which = 0;
  for (const auto& [name, entry] : commands) {
    if (subs[name]->parsed()) {
      RunConfig cfg = default_config(entry.first);
      cfg.params = parsed.params;
      cfg.params.eta = 1.0;
      if (tmax_opts[which]->count() > 0) cfg.t_max = parsed.t_max;
      if (eta_opts[which]->count() > 0) cfg.eta_list = parsed.eta_list;
      cfg.steps = parsed.steps;
      cfg.trajectories = parsed.trajectories;
      cfg.seed = parsed.seed;
      cfg.output_path = parsed.output_path;
      cfg.p_detect = parsed.p_detect;
      cfg.rounds = parsed.rounds;
      parsed = cfg;
      break;
    }
    ++which;
  }

  try {
    parsed.validate();
    if (parsed.output_path == "-") {
      run(parsed, out);
      out.flush();
      if (!out) throw Error("failed writing to standard output");
    } else {
      std::ofstream file(parsed.output_path, std::ios::binary);
      if (!file) throw Error("cannot open output file '" + parsed.output_path + "'");
      run(parsed, file);
      file.flush();
      if (!file) throw Error("failed writing output file '" + parsed.output_path + "'");
    }
  } catch (const std::exception& e) {
    err << "darkstate-sim: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace darkstate::cli
