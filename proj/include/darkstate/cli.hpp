// Copyright 2026 The darkstate Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end.  Every command writes one CSV table (header row,
// comma separated, LF endings, 12 significant digits).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "darkstate/model.hpp"

namespace darkstate::cli {

enum class Command { Amplitudes, Probabilities, Fidelity, Entropy, Trajectories, Repump };

struct RunConfig {
  Command command = Command::Probabilities;
  Parameters params;
  double t_max = 15.0;
  int steps = 500;
  std::uint64_t trajectories = 10000;
  std::uint64_t seed = 42;
  std::string output_path = "-";
  /// Detector efficiencies; one column per entry for the fidelity command.
  std::vector<double> eta_list{1.0};
  double p_detect = 0.9;
  int rounds = 5;

  /// Throws InvalidParameters on steps < 2, t_max <= 0, trajectories < 1 or
  /// invalid physical parameters.
  void validate() const;
};

/// Defaults reproducing the published figures for `command`.
RunConfig default_config(Command command);

/// `steps` evenly spaced points from t0 to t1 inclusive.
std::vector<double> time_grid(double t0, double t1, int steps);

/// First grid time of the entanglement outputs: 5 cavity lifetimes.
double asymptotic_onset(const Parameters& params);

void cmd_amplitudes(const RunConfig& cfg, std::ostream& out);
void cmd_probabilities(const RunConfig& cfg, std::ostream& out);
void cmd_fidelity(const RunConfig& cfg, std::ostream& out);
void cmd_entropy(const RunConfig& cfg, std::ostream& out);
void cmd_trajectories(const RunConfig& cfg, std::ostream& out);
void cmd_repump(const RunConfig& cfg, std::ostream& out);

/// Dispatch on cfg.command.
void run(const RunConfig& cfg, std::ostream& out);

/// Parse argv, run, and write to --out (or `out` for "-").  Diagnostics go to
/// `err`.  Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace darkstate::cli
